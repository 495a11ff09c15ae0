#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "canonical.hpp"

namespace seqren {

enum class RuleName { ai_down, ai_up, switch_, q_down, q_up, r_down, r_up };

inline const char* to_string(RuleName r) {
  switch (r) {
    case RuleName::ai_down: return "ai_down";
    case RuleName::ai_up: return "ai_up";
    case RuleName::switch_: return "switch";
    case RuleName::q_down: return "q_down";
    case RuleName::q_up: return "q_up";
    case RuleName::r_down: return "r_down";
    case RuleName::r_up: return "r_up";
  }
  return "?";
}

inline std::optional<RuleName> rule_from_string(std::string_view s) {
  for (auto r : {RuleName::ai_down, RuleName::ai_up, RuleName::switch_, RuleName::q_down, RuleName::q_up,
                 RuleName::r_down, RuleName::r_up})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

using RuleSet = std::set<RuleName>;

inline RuleSet down_fragment() { return {RuleName::ai_down, RuleName::switch_, RuleName::q_down, RuleName::r_down}; }
inline RuleSet up_fragment() { return {RuleName::ai_up, RuleName::switch_, RuleName::q_up, RuleName::r_up}; }
inline RuleSet all_rules() {
  return {RuleName::ai_down, RuleName::ai_up, RuleName::switch_, RuleName::q_down,
          RuleName::q_up,    RuleName::r_down, RuleName::r_up};
}

inline bool in_down_fragment(RuleName r) { return down_fragment().count(r) > 0; }

using Path = std::vector<int>;

struct RuleInstance {
  RuleName rule;
  Structure conclusion;
  Structure premise;
  std::optional<Path> hint;
};

// Bottom-up chain: steps[0].conclusion ≈ conclusion, steps[i].premise ≈ steps[i+1].conclusion.
struct Derivation {
  Structure conclusion = unit();
  std::vector<RuleInstance> steps;

  Structure premise() const { return steps.empty() ? conclusion : steps.back().premise; }
  bool empty() const { return steps.empty(); }
};

struct CompositionError : std::runtime_error {
  Structure lower_premise, upper_conclusion;
  CompositionError(Structure lp, Structure uc)
      : std::runtime_error("cannot compose: premise " + print_structure(lp) + " is not equivalent to conclusion " +
                           print_structure(uc)),
        lower_premise(std::move(lp)),
        upper_conclusion(std::move(uc)) {}
};

inline Derivation compose(const Derivation& lower, const Derivation& upper) {
  if (!equiv(lower.premise(), upper.conclusion)) throw CompositionError(lower.premise(), upper.conclusion);
  Derivation d = lower;
  d.steps.insert(d.steps.end(), upper.steps.begin(), upper.steps.end());
  return d;
}

inline Derivation plug_in_context(const Derivation& d, const Context& c) {
  Derivation out;
  out.conclusion = plug(c, d.conclusion);
  for (const auto& s : d.steps)
    out.steps.push_back({s.rule, plug(c, s.conclusion), plug(c, s.premise), std::nullopt});
  return out;
}

// Affinity bookkeeping: every down-fragment step seen by the checker is tallied here.
namespace stats {
inline std::atomic<long> down_steps_checked{0};
inline std::atomic<long> affinity_violations{0};
}  // namespace stats

namespace detail {

using Rebuild = std::function<Structure(const Structure&)>;
using Emit = std::function<void(const Structure&, const Path&)>;

// Where a rule application may sit, derived from a diff of conclusion and premise.
struct Focus {
  Path path;
  std::vector<int> required;  // par/copar: child indices that must be in the redex
  bool all = false;           // redex covers every child
  int lo = 0, hi = 0;         // seq: interval that must be covered
};

struct Guide {
  std::vector<Focus> foci;
};

inline std::vector<int> bits(unsigned long long m) {
  std::vector<int> v;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) v.push_back(i);
  return v;
}

inline std::vector<Structure> pick(const std::vector<Structure>& kids, unsigned long long mask, bool inside) {
  std::vector<Structure> v;
  for (std::size_t i = 0; i < kids.size(); ++i)
    if (((mask >> i) & 1ULL) == (inside ? 1ULL : 0ULL)) v.push_back(kids[i]);
  return v;
}

// Walk down par/copar nodes while exactly one child mentions any of `names`.
struct Trail {
  std::vector<std::pair<Structure, int>> steps;
  Structure node;
};

inline Trail descend(const Structure& body, const std::vector<AtomName>& names) {
  Trail t;
  t.node = body;
  for (;;) {
    const auto& n = t.node;
    if (n->kind != Kind::par && n->kind != Kind::copar) break;
    int hit = -1, hits = 0;
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      bool any = false;
      for (const auto& nm : names) any = any || occurs_free(n->kids[i], nm);
      if (any) {
        ++hits;
        hit = static_cast<int>(i);
      }
    }
    if (hits != 1) break;
    t.steps.emplace_back(n, hit);
    t.node = n->kids[hit];
  }
  return t;
}

inline Structure rebuild_trail(const Trail& t, const Structure& replacement) {
  Structure cur = replacement;
  for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) {
    auto kids = it->first->kids;
    kids[it->second] = cur;
    cur = raw(it->first->kind, std::move(kids));
  }
  return cur;
}

class Enumerator {
 public:
  Enumerator(RuleName rule, const Guide* guide, std::vector<AtomName> alphabet, const Emit& emit)
      : rule_(rule), guide_(guide), alphabet_(std::move(alphabet)), emit_(emit) {}

  void run(const Structure& root, std::set<AtomName> used) {
    used_ = std::move(used);
    std::vector<AtomName> scope;
    Path path;
    walk(root, path, [](const Structure& s) { return s; }, scope, true);
  }

  // Upper bound on candidates generated; exceeding it aborts enumeration.
  std::size_t budget = 5'000'000;
  bool aborted = false;
  // Only instances that bring dual atoms together (proof search heuristic).
  bool interaction_only = false;

 private:
  RuleName rule_;
  const Guide* guide_;
  std::vector<AtomName> alphabet_;
  const Emit& emit_;
  std::set<AtomName> used_;
  std::size_t produced_ = 0;
  // Binders of the enclosing block; they float over par/copar down to any node
  // reached without crossing a seq.
  std::vector<AtomName> block_names_;
  Structure block_body_;

  static int free_count(const Structure& s, const AtomName& n) {
    if (s->kind == Kind::atom) return s->name == n;
    if (s->kind == Kind::ren && s->name == n) return 0;
    int c = 0;
    for (const auto& k : s->kids) c += free_count(k, n);
    return c;
  }

  static void literals(const Structure& s, std::set<std::pair<AtomName, bool>>& out) {
    if (s->kind == Kind::atom) out.insert({s->name, s->negative});
    for (const auto& k : s->kids) literals(k, out);
  }
  static bool interacts(const Structure& x, const Structure& y) {
    std::set<std::pair<AtomName, bool>> a, b;
    literals(x, a);
    literals(y, b);
    for (const auto& [n, neg] : a)
      if (b.count({n, !neg})) return true;
    return false;
  }

  void out(const Structure& s, const Path& p) {
    if (aborted) return;
    if (++produced_ > budget) {
      aborted = true;
      return;
    }
    emit_(s, p);
  }

  void walk(const Structure& n, Path& path, const Rebuild& rebuild, std::vector<AtomName>& scope, bool head) {
    if (aborted) return;
    if (rule_ == RuleName::ai_up) insert_pairs(n, path, rebuild, scope);
    if (n->kind == Kind::ren) {
      auto saved_names = block_names_;
      auto saved_body = block_body_;
      if (head) {
        binder_rules(n, path, rebuild);
        block_names_.clear();
        Structure b = n;
        for (; b->kind == Kind::ren; b = b->kids[0]) block_names_.push_back(b->name);
        block_body_ = b;
      }
      scope.push_back(n->name);
      path.push_back(0);
      const AtomName b = n->name;
      walk(n->kids[0], path, [&](const Structure& x) { return rebuild(ren(b, x)); }, scope, false);
      path.pop_back();
      scope.pop_back();
      block_names_ = std::move(saved_names);
      block_body_ = std::move(saved_body);
      return;
    }
    auto saved_names = block_names_;
    if (head && n->kind != Kind::ren) block_names_.clear();
    if (n->kind == Kind::par) {
      if (rule_ == RuleName::ai_down) ai_down(n, path, rebuild);
      if (rule_ == RuleName::switch_ || rule_ == RuleName::q_down) par_rules(n, path, rebuild);
    }
    if (n->kind == Kind::seq && rule_ == RuleName::q_up) q_up(n, path, rebuild);
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      path.push_back(static_cast<int>(i));
      walk(
          n->kids[i], path,
          [&, i](const Structure& x) {
            auto kids = n->kids;
            kids[i] = x;
            return rebuild(raw(n->kind, std::move(kids)));
          },
          scope, n->kind == Kind::seq);
      path.pop_back();
    }
    block_names_ = std::move(saved_names);
  }

  // Extra ⟨R;T⟩ readings of a group that re-attach block binders used only
  // inside it: ⟨{a}g;1⟩ differs from {a}⟨g;1⟩ once the seq gains a partner.
  void add_bound_views(const std::vector<Structure>& group, std::vector<std::pair<Structure, Structure>>& views) {
    if (block_names_.empty()) return;
    auto g = par(group);
    std::vector<AtomName> movable;
    for (const auto& b : block_names_) {
      int inside = free_count(g, b);
      if (inside > 0 && inside == free_count(block_body_, b)) movable.push_back(b);
    }
    if (movable.size() > 6) movable.resize(6);
    for (unsigned long long w = 1; w < (1ULL << movable.size()); ++w) {
      Structure x = g;
      for (int i : bits(w)) x = ren(movable[i], x);
      views.emplace_back(x, unit());
      views.emplace_back(unit(), x);
    }
  }

  // ---- ai_up ----
  void insert_pairs(const Structure& n, const Path& path, const Rebuild& rebuild, const std::vector<AtomName>& scope) {
    std::vector<Structure> pairs;
    std::set<AtomName> names(alphabet_.begin(), alphabet_.end());
    names.insert(scope.begin(), scope.end());
    for (const auto& a : names) pairs.push_back(raw(Kind::copar, {atom(a), atom(a, true)}));
    AtomName c = fresh_name(used_, "c");
    pairs.push_back(ren(c, raw(Kind::copar, {atom(c), atom(c, true)})));
    for (const auto& pr : pairs) {
      out(rebuild(raw(Kind::par, {n, pr})), path);
      out(rebuild(raw(Kind::copar, {n, pr})), path);
      out(rebuild(raw(Kind::seq, {n, pr})), path);
      out(rebuild(raw(Kind::seq, {pr, n})), path);
    }
  }

  // ---- ai_down ----
  void ai_down(const Structure& n, const Path& path, const Rebuild& rebuild) {
    const auto& k = n->kids;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i]->kind != Kind::atom) continue;
      for (std::size_t j = i + 1; j < k.size(); ++j) {
        if (k[j]->kind != Kind::atom || k[j]->name != k[i]->name || k[j]->negative == k[i]->negative) continue;
        std::vector<Structure> rest;
        for (std::size_t t = 0; t < k.size(); ++t)
          if (t != i && t != j) rest.push_back(k[t]);
        out(rebuild(par(rest)), path);
      }
    }
  }

  // Candidate redex child-sets at a par node.
  std::vector<unsigned long long> par_masks(const Structure& n, const Path& path) {
    const std::size_t m = n->kids.size();
    const unsigned long long full = (m >= 64) ? ~0ULL : ((1ULL << m) - 1);
    std::vector<unsigned long long> masks;
    if (!guide_) {
      for (unsigned long long a = full;; a = (a - 1) & full) {
        if (__builtin_popcountll(a) >= 2) masks.push_back(a);
        if (a == 0) break;
      }
      return masks;
    }
    std::set<unsigned long long> seen;
    for (const auto& f : guide_->foci) {
      if (f.path != path) continue;
      if (f.all) {
        seen.insert(full);
        continue;
      }
      unsigned long long req = 0;
      for (int i : f.required) req |= 1ULL << i;
      seen.insert(req);
      for (std::size_t i = 0; i < m; ++i)
        if (!((req >> i) & 1ULL)) seen.insert(req | (1ULL << i));
    }
    for (auto a : seen)
      if (__builtin_popcountll(a) >= 2) masks.push_back(a);
    return masks;
  }

  void par_rules(const Structure& n, const Path& path, const Rebuild& rebuild) {
    const auto& k = n->kids;
    if (k.size() > 62) return;
    for (auto a : par_masks(n, path)) {
      if (aborted) return;
      auto rest = pick(k, a, false);
      auto idx = bits(a);
      if (rule_ == RuleName::switch_) {
        // R = 1: a sub-group X reads as (1;X), so [X;U] has premise (U;X).
        if (!interaction_only) {
          const unsigned long long low = a & (~a + 1);
          const unsigned long long others = a & ~low;
          for (unsigned long long s = others;; s = (s - 1) & others) {
            unsigned long long a1 = low | s, a2 = a & ~a1;
            if (a2) {
              auto rs = rest;
              rs.push_back(copar({par(pick(k, a1, true)), par(pick(k, a2, true))}));
              out(rebuild(par(rs)), path);
            }
            if (s == 0) break;
          }
        }
        for (int x : idx) {
          const auto& X = k[x];
          std::vector<Structure> U;
          for (int i : idx)
            if (i != x) U.push_back(k[i]);
          if (X->kind != Kind::copar || X->kids.size() > 20) continue;
          const std::size_t xm = X->kids.size();
          const unsigned long long xfull = (1ULL << xm) - 1;
          for (unsigned long long r = 1; r < xfull; ++r) {
            auto Rg = pick(X->kids, r, true);
            auto Tg = pick(X->kids, r, false);
            if (interaction_only && !interacts(copar(Rg), par(U))) continue;
            std::vector<Structure> ru{copar(Rg)};
            ru.insert(ru.end(), U.begin(), U.end());
            auto rs = rest;
            rs.push_back(copar({par(ru), copar(Tg)}));
            out(rebuild(par(rs)), path);
          }
        }
      } else {
        // q_down: split a into A1 (holding the lowest index) and A2.
        const unsigned long long low = a & (~a + 1);
        const unsigned long long others = a & ~low;
        for (unsigned long long s = others;; s = (s - 1) & others) {
          unsigned long long a1 = low | s, a2 = a & ~a1;
          if (a2) {
            auto g1 = pick(k, a1, true), g2 = pick(k, a2, true);
            auto o1 = seq_views(g1);
            auto o2 = seq_views(g2);
            add_bound_views(g1, o1);
            add_bound_views(g2, o2);
            for (const auto& [R, T] : o1)
              for (const auto& [U, V] : o2) {
                // both halves of one side empty: the premise is the conclusion
                if ((is_unit(R) && is_unit(U)) || (is_unit(T) && is_unit(V))) continue;
                if (interaction_only) {
                  bool ru = interacts(R, U), tv = interacts(T, V);
                  if (!(ru || tv)) continue;
                  if (!ru && !is_unit(R) && !is_unit(U)) continue;
                  if (!tv && !is_unit(T) && !is_unit(V)) continue;
                }
                auto rs = rest;
                rs.push_back(seq({par({R, U}), par({T, V})}));
                out(rebuild(par(rs)), path);
              }
          }
          if (s == 0) break;
        }
      }
    }
  }

  // Ways to read a par-group as ⟨R;T⟩.
  static std::vector<std::pair<Structure, Structure>> seq_views(const std::vector<Structure>& group) {
    std::vector<std::pair<Structure, Structure>> v;
    if (group.size() == 1 && group[0]->kind == Kind::seq) {
      const auto& s = group[0]->kids;
      for (std::size_t k = 0; k <= s.size(); ++k)
        v.emplace_back(seq({s.begin(), s.begin() + k}), seq({s.begin() + k, s.end()}));
    } else {
      auto g = par(group);
      v.emplace_back(g, unit());
      v.emplace_back(unit(), g);
    }
    return v;
  }

  // Ways to read a seq-interval as (R;U).
  static std::vector<std::pair<Structure, Structure>> copar_views(const std::vector<Structure>& interval) {
    std::vector<std::pair<Structure, Structure>> v;
    if (interval.size() == 1) {
      Structure c = interval[0];
      std::vector<AtomName> bs;
      while (c->kind == Kind::ren) {
        bs.push_back(c->name);
        c = c->kids[0];
      }
      if (c->kind == Kind::copar && c->kids.size() <= 20) {
        const std::size_t m = c->kids.size();
        for (unsigned long long r = 0; r < (1ULL << m); ++r) {
          auto Rg = pick(c->kids, r, true), Ug = pick(c->kids, r, false);
          Structure R = copar(Rg), U = copar(Ug);
          bool ok = true;
          for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
            bool inR = occurs_free(R, *it), inU = occurs_free(U, *it);
            if (inR && inU) {
              ok = false;
              break;
            }
            if (inR) R = ren(*it, R);
            if (inU) U = ren(*it, U);
          }
          if (ok) v.emplace_back(R, U);
        }
        return v;
      }
      v.emplace_back(interval[0], unit());
      v.emplace_back(unit(), interval[0]);
      return v;
    }
    auto s = seq(interval);
    v.emplace_back(s, unit());
    v.emplace_back(unit(), s);
    return v;
  }

  void q_up(const Structure& n, const Path& path, const Rebuild& rebuild) {
    const auto& k = n->kids;
    const int m = static_cast<int>(k.size());
    std::set<std::pair<int, int>> intervals;
    if (!guide_) {
      for (int i = 0; i < m; ++i)
        for (int j = i + 2; j <= m; ++j) intervals.insert({i, j});
    } else {
      for (const auto& f : guide_->foci) {
        if (f.path != path) continue;
        int lo = f.all ? 0 : f.lo, hi = f.all ? m : f.hi;
        for (int i = std::max(0, lo - 1); i <= lo; ++i)
          for (int j = hi; j <= std::min(m, hi + 1); ++j)
            if (j - i >= 2) intervals.insert({i, j});
      }
    }
    for (auto [i, j] : intervals) {
      for (int s = i + 1; s < j; ++s) {
        auto xs = copar_views({k.begin() + i, k.begin() + s});
        auto ys = copar_views({k.begin() + s, k.begin() + j});
        for (const auto& [R, U] : xs)
          for (const auto& [T, V] : ys) {
            std::vector<Structure> kids(k.begin(), k.begin() + i);
            kids.push_back(copar({seq({R, T}), seq({U, V})}));
            kids.insert(kids.end(), k.begin() + j, k.end());
            out(rebuild(seq(kids)), path);
          }
      }
    }
  }

  // ---- r_down / r_up at a binder block ----
  void binder_rules(const Structure& head, const Path& path, const Rebuild& rebuild) {
    if (rule_ != RuleName::r_down && rule_ != RuleName::r_up) return;
    std::vector<AtomName> bs;
    Structure body = head;
    while (body->kind == Kind::ren) {
      bs.push_back(body->name);
      body = body->kids[0];
    }
    auto wrap = [&](const std::vector<AtomName>& names, Structure b) {
      for (auto it = names.rbegin(); it != names.rend(); ++it) b = ren(*it, b);
      return b;
    };
    if (rule_ == RuleName::r_down) {
      for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = i + 1; j < bs.size(); ++j) {
          auto t = descend(body, {bs[i], bs[j]});
          const auto& n = t.node;
          if (n->kind != Kind::par) continue;
          bool ok = true;
          for (const auto& c : n->kids)
            if (occurs_free(c, bs[i]) && occurs_free(c, bs[j])) ok = false;
          if (!ok) continue;
          if (interaction_only) {
            std::set<std::pair<AtomName, bool>> lits;
            literals(body, lits);
            if (!lits.count({bs[i], false}) && !lits.count({bs[i], true})) continue;
            if (!(lits.count({bs[i], false}) && lits.count({bs[j], true})) &&
                !(lits.count({bs[i], true}) && lits.count({bs[j], false})))
              continue;
          }
          std::vector<AtomName> keep;
          for (std::size_t t2 = 0; t2 < bs.size(); ++t2)
            if (t2 != j) keep.push_back(bs[t2]);
          out(rebuild(wrap(keep, subst_atom(body, bs[j], bs[i]))), path);
        }
      return;
    }
    for (std::size_t i = 0; i < bs.size(); ++i) {
      auto t = descend(body, {bs[i]});
      const auto& n = t.node;
      if (n->kind != Kind::copar) continue;
      std::vector<int> holders;
      for (std::size_t c = 0; c < n->kids.size(); ++c)
        if (occurs_free(n->kids[c], bs[i])) holders.push_back(static_cast<int>(c));
      if (holders.size() < 2 || holders.size() > 20) continue;
      AtomName fresh = fresh_name(used_, bs[i].text);
      const std::size_t h = holders.size();
      // Second group never holds holders[0].
      for (unsigned long long g2 = 2; g2 < (1ULL << h); g2 += 2) {
        auto kids = n->kids;
        for (std::size_t q = 0; q < h; ++q)
          if ((g2 >> q) & 1ULL) kids[holders[q]] = subst_atom(kids[holders[q]], bs[i], fresh);
        auto nb = rebuild_trail(t, raw(Kind::copar, std::move(kids)));
        auto names = bs;
        names.push_back(fresh);
        out(rebuild(wrap(names, nb)), path);
      }
    }
  }
};

// ---- guide: localise the difference between canonical conclusion and premise ----

inline void guide_walk(const Structure& c0, const Structure& p0, Path& path, Guide& g) {
  Structure c = c0, p = p0;
  std::size_t depth = 0;
  while (c->kind == Kind::ren) {
    c = c->kids[0];
    path.push_back(0);
    ++depth;
  }
  while (p->kind == Kind::ren) p = p->kids[0];
  auto done = [&] { path.resize(path.size() - depth); };
  if (anon_key(c) == anon_key(p)) return done();

  auto add = [&](Focus f) {
    f.path = path;
    g.foci.push_back(std::move(f));
  };
  auto add_child_all = [&](int i) {
    Focus f;
    f.path = path;
    f.path.push_back(i);
    // The child may be a renaming block; point at its body.
    Structure ch = c->kids[i];
    while (ch->kind == Kind::ren) {
      ch = ch->kids[0];
      f.path.push_back(0);
    }
    f.all = true;
    g.foci.push_back(std::move(f));
  };

  if (c->kind == p->kind && (c->kind == Kind::par || c->kind == Kind::copar)) {
    std::multiset<std::string> pk;
    for (const auto& x : p->kids) pk.insert(anon_key(x));
    std::vector<int> req;
    for (std::size_t i = 0; i < c->kids.size(); ++i) {
      auto key = anon_key(c->kids[i]);
      auto it = pk.find(key);
      if (it != pk.end())
        pk.erase(it);
      else
        req.push_back(static_cast<int>(i));
    }
    Focus f;
    f.required = req;
    if (!req.empty()) add(f);
    if (req.size() == 1) {
      add_child_all(req[0]);
      if (pk.size() == 1) {
        std::multiset<std::string> want = pk;
        for (const auto& x : p->kids)
          if (want.count(anon_key(x))) {
            path.push_back(req[0]);
            guide_walk(c->kids[req[0]], x, path, g);
            path.pop_back();
            break;
          }
      }
    }
    return done();
  }
  if (c->kind == Kind::seq && p->kind == Kind::seq) {
    const auto& a = c->kids;
    const auto& b = p->kids;
    std::size_t pre = 0;
    while (pre < a.size() && pre < b.size() && anon_key(a[pre]) == anon_key(b[pre])) ++pre;
    std::size_t suf = 0;
    while (suf < a.size() - pre && suf < b.size() - pre &&
           anon_key(a[a.size() - 1 - suf]) == anon_key(b[b.size() - 1 - suf]))
      ++suf;
    Focus f;
    f.lo = static_cast<int>(pre);
    f.hi = static_cast<int>(a.size() - suf);
    if (f.hi <= f.lo) f.hi = std::min<int>(static_cast<int>(a.size()), f.lo + 1);
    add(f);
    if (f.hi - f.lo == 1) {
      add_child_all(f.lo);
      if (b.size() - suf - pre == 1) {
        path.push_back(f.lo);
        guide_walk(a[f.lo], b[pre], path, g);
        path.pop_back();
      }
    }
    return done();
  }
  Focus f;
  f.all = true;
  add(f);
  done();
}

inline Guide make_guide(const Structure& c, const Structure& p) {
  Guide g;
  Path path;
  guide_walk(c, p, path, g);
  return g;
}

inline void enumerate_raw(RuleName rule, const Structure& canon, const std::vector<AtomName>& alphabet,
                          const Guide* guide, const Emit& emit, std::size_t budget = 5'000'000,
                          bool* aborted = nullptr, bool interaction_only = false) {
  std::set<AtomName> used;
  all_names(canon, used);
  used.insert(alphabet.begin(), alphabet.end());
  Enumerator e(rule, guide, alphabet, emit);
  e.budget = budget;
  e.interaction_only = interaction_only;
  e.run(canon, used);
  if (aborted) *aborted = e.aborted;
}

}  // namespace detail

inline std::vector<AtomName> default_alphabet(const Structure& r) {
  auto fn = free_names(r);
  std::set<AtomName> used;
  all_names(r, used);
  std::vector<AtomName> v(fn.begin(), fn.end());
  v.push_back(fresh_name(used, "a"));
  return v;
}

// Every ≈-distinct premise obtainable by one application of `rule` (identity steps excluded).
inline std::vector<RuleInstance> enumerate_applications(RuleName rule, const Structure& conclusion,
                                                        std::optional<std::vector<AtomName>> alphabet = {}) {
  auto c = canonical(conclusion);
  std::vector<AtomName> alpha = alphabet ? *alphabet : default_alphabet(c.form);
  std::map<std::string, RuleInstance> found;
  detail::enumerate_raw(rule, c.form, alpha, nullptr, [&](const Structure& prem, const Path& where) {
    auto pc = canonical(prem);
    if (pc.key == c.key || found.count(pc.key)) return;
    found.emplace(pc.key, RuleInstance{rule, c.form, pc.form, where});
  });
  std::vector<RuleInstance> out;
  for (auto& [k, v] : found) out.push_back(std::move(v));
  return out;
}

namespace detail {

// ai_up checked backwards: drop a complementary pair from some copar of the premise.
inline bool ai_up_matches(const Structure& premise, const std::string& conclusion_key) {
  bool hit = false;
  std::function<void(const Structure&, const Rebuild&)> walk = [&](const Structure& n, const Rebuild& rebuild) {
    if (hit) return;
    if (n->kind == Kind::copar) {
      const auto& k = n->kids;
      for (std::size_t i = 0; i < k.size() && !hit; ++i) {
        if (k[i]->kind != Kind::atom) continue;
        for (std::size_t j = i + 1; j < k.size() && !hit; ++j) {
          if (k[j]->kind != Kind::atom || k[j]->name != k[i]->name || k[j]->negative == k[i]->negative) continue;
          std::vector<Structure> rest;
          for (std::size_t t = 0; t < k.size(); ++t)
            if (t != i && t != j) rest.push_back(k[t]);
          if (canonical_key(rebuild(copar(rest))) == conclusion_key) hit = true;
        }
      }
    }
    for (std::size_t i = 0; i < n->kids.size() && !hit; ++i) {
      walk(n->kids[i], [&, i](const Structure& x) {
        if (n->kind == Kind::ren) return rebuild(ren(n->name, x));
        auto kids = n->kids;
        kids[i] = x;
        return rebuild(raw(n->kind, std::move(kids)));
      });
    }
  };
  walk(premise, [](const Structure& s) { return s; });
  return hit;
}

}  // namespace detail

// One-step check: the instance's conclusion matches and its premise is reachable by the rule.
inline bool check_step(const Structure& conclusion, const RuleInstance& inst, std::string* why = nullptr) {
  auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  auto c = canonical(conclusion);
  if (canonical_key(inst.conclusion) != c.key) return fail("step conclusion does not match");
  auto p = canonical(inst.premise);
  if (p.key == c.key) return fail("identity step");

  if (inst.rule == RuleName::ai_up) {
    if (detail::ai_up_matches(p.form, c.key)) return true;
    return fail("premise is not the conclusion plus an interaction pair");
  }

  bool hit = false;
  const std::string shape = shape_key(p.form);
  auto probe = [&](const Structure& prem, const Path&) {
    if (!hit && shape_key(prem) == shape && canonical_key(prem) == p.key) hit = true;
  };
  const bool localisable =
      inst.rule == RuleName::switch_ || inst.rule == RuleName::q_down || inst.rule == RuleName::q_up;
  if (localisable) {
    auto g = detail::make_guide(c.form, p.form);
    detail::enumerate_raw(inst.rule, c.form, {}, &g, probe);
    if (hit) return true;
  }
  bool aborted = false;
  detail::enumerate_raw(inst.rule, c.form, {}, nullptr, probe, 2'000'000, &aborted);
  if (hit) return true;
  return fail(aborted ? "search budget exhausted" : "premise not produced by the rule");
}

struct CheckReport {
  bool ok = true;
  std::size_t failed_step = 0;
  std::string reason;
};

inline CheckReport check_derivation_report(const Derivation& d, const RuleSet& allowed) {
  CheckReport rep;
  Structure cur = d.conclusion;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& s = d.steps[i];
    auto bad = [&](const std::string& w) {
      rep.ok = false;
      rep.failed_step = i;
      rep.reason = w;
      return rep;
    };
    if (!allowed.count(s.rule)) return bad(std::string("rule ") + to_string(s.rule) + " not allowed");
    std::string why;
    RuleInstance inst = s;
    if (!equiv(cur, s.conclusion)) return bad("chain broken: step conclusion differs from previous premise");
    if (!check_step(cur, inst, &why)) return bad(why);
    if (in_down_fragment(s.rule)) {
      ++stats::down_steps_checked;
      if (size(s.premise) > size(s.conclusion)) {
        ++stats::affinity_violations;
        return bad("size increased on a down-fragment step");
      }
    }
    cur = s.premise;
  }
  return rep;
}

inline bool check_derivation(const Derivation& d, const RuleSet& allowed) {
  return check_derivation_report(d, allowed).ok;
}

inline std::map<RuleName, std::size_t> rule_census(const Derivation& d) {
  std::map<RuleName, std::size_t> m;
  for (const auto& s : d.steps) ++m[s.rule];
  return m;
}

}  // namespace seqren
