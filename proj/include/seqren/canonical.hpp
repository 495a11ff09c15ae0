#pragma once

// Decision procedure for structure equivalence.
//
// Renamings float upward through par and copar (scope extrusion) until they
// reach a seq component or the root; the renamings collected at such a point
// form an unordered binder set (binder commutation). Vacuous binders vanish.
// Binders of each set get canonical labels: a colour-refinement signature
// orders them, and remaining ties are broken by trying every permutation and
// keeping the smallest key.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structure.hpp"

namespace seqren {

namespace detail {

class Lifter {
 public:
  using Env = std::map<AtomName, AtomName>;

  Structure block(const Structure& s, const Env& env) {
    env_ = env;
    return block(s);
  }

 private:
  std::size_t counter_ = 0;
  Env env_;  // bound name -> fresh name, restored on the way out

  Structure block(const Structure& s) {
    std::vector<AtomName> bs;
    Structure body = region(s, bs);
    for (auto it = bs.rbegin(); it != bs.rend(); ++it) body = ren(*it, body);
    return body;
  }

  Structure region(const Structure& s, std::vector<AtomName>& bs) {
    switch (s->kind) {
      case Kind::unit: return s;
      case Kind::atom: {
        auto it = env_.find(s->name);
        return it == env_.end() ? s : atom(it->second, s->negative);
      }
      case Kind::ren: {
        AtomName fresh(std::string("\x01") + std::to_string(counter_++));
        std::optional<AtomName> saved;
        if (auto it = env_.find(s->name); it != env_.end()) saved = it->second;
        env_[s->name] = fresh;
        Structure b = region(s->kids[0], bs);
        if (saved)
          env_[s->name] = *saved;
        else
          env_.erase(s->name);
        if (occurs_free(b, fresh)) bs.push_back(fresh);
        return b;
      }
      case Kind::seq: {
        std::vector<Structure> kids;
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < s->kids.size(); ++i) {
          kids.push_back(block(s->kids[i]));
          if (!is_unit(kids.back())) live.push_back(i);
        }
        // A seq that collapses to one component is not a block boundary.
        if (live.size() <= 1) return live.empty() ? unit() : region(s->kids[live[0]], bs);
        return seq(kids);
      }
      default: {
        std::vector<Structure> kids;
        kids.reserve(s->kids.size());
        for (const auto& c : s->kids) kids.push_back(region(c, bs));
        return connective(s->kind, kids);
      }
    }
  }
};

class Labeller {
 public:
  struct Out {
    Structure s;
    std::string key;
  };
  struct Label {
    std::string token;
    AtomName out;
  };
  using Env = std::map<AtomName, Label>;

  explicit Labeller(std::string prefix) : prefix_(std::move(prefix)) {}

  Out block(const Structure& b, int depth, const Env& env, bool build) {
    std::vector<AtomName> bs;
    Structure body = b;
    while (body->kind == Kind::ren) {
      bs.push_back(body->name);
      body = body->kids[0];
    }
    if (bs.empty()) return region(body, depth, env, build);

    const std::size_t k = bs.size();
    std::vector<int> cls(k, 0);
    if (k > 1) refine(bs, body, depth, env, cls);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return cls[x] < cls[y]; });

    // Tie groups: consecutive runs of equal class in `order`.
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    double perms = 1;
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i;
      while (j < k && cls[order[j]] == cls[order[i]]) ++j;
      if (j - i > 1) groups.emplace_back(i, j);
      for (std::size_t f = 2; f <= j - i; ++f) perms *= static_cast<double>(f);
      i = j;
    }

    Env e = env;
    auto labelled = [&](const std::vector<std::size_t>& ord, bool b2) {
      for (std::size_t j = 0; j < k; ++j)
        e[bs[ord[j]]] = Label{"#" + std::to_string(depth) + "." + std::to_string(j),
                              AtomName(prefix_ + std::to_string(depth) + "_" + std::to_string(j))};
      return region(body, depth, e, b2);
    };

    std::vector<std::size_t> best = order;
    if (!groups.empty() && perms <= 720) {
      std::string best_key = labelled(order, false).key;
      std::vector<std::size_t> cur = order;
      permute_groups(groups, 0, cur, [&](const std::vector<std::size_t>& ord) {
        auto key = labelled(ord, false).key;
        if (key < best_key) {
          best_key = std::move(key);
          best = ord;
        }
      });
    }

    Out o = labelled(best, build);
    o.key = "{" + std::to_string(k) + "}" + o.key;
    if (build)
      for (std::size_t j = k; j-- > 0;)
        o.s = ren(AtomName(prefix_ + std::to_string(depth) + "_" + std::to_string(j)), o.s);
    return o;
  }

 private:
  std::string prefix_;

  template <class F>
  static void permute_groups(const std::vector<std::pair<std::size_t, std::size_t>>& groups, std::size_t g,
                             std::vector<std::size_t>& cur, F&& f) {
    if (g == groups.size()) {
      f(cur);
      return;
    }
    auto [b, e] = groups[g];
    std::sort(cur.begin() + b, cur.begin() + e);
    do {
      permute_groups(groups, g + 1, cur, f);
    } while (std::next_permutation(cur.begin() + b, cur.begin() + e));
  }

  void refine(const std::vector<AtomName>& bs, const Structure& body, int depth, const Env& env,
              std::vector<int>& cls) {
    const std::size_t k = bs.size();
    std::size_t classes = 1;
    Env e = env;
    for (std::size_t round = 0; round < k; ++round) {
      std::vector<std::string> sig(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
          e[bs[j]] = Label{i == j ? std::string("!") : "?" + std::to_string(cls[j]), bs[j]};
        sig[i] = std::to_string(cls[i]) + "|" + region(body, depth, e, false).key;
      }
      std::vector<std::string> uniq = sig;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      for (std::size_t i = 0; i < k; ++i)
        cls[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
      if (uniq.size() == classes) break;
      classes = uniq.size();
    }
  }

  Out region(const Structure& n, int depth, const Env& env, bool build) {
    switch (n->kind) {
      case Kind::unit: return {n, "1"};
      case Kind::atom: {
        auto it = env.find(n->name);
        std::string key = n->negative ? "-" : "+";
        if (it == env.end()) {
          key += "f:" + n->name.text;
          return {build ? n : nullptr, key};
        }
        key += it->second.token;
        return {build ? atom(it->second.out, n->negative) : nullptr, key};
      }
      case Kind::seq: {
        std::vector<Out> kids;
        kids.reserve(n->kids.size());
        for (const auto& c : n->kids) kids.push_back(block(c, depth + 1, env, build));
        return assemble(Kind::seq, kids, build);
      }
      default: {
        std::vector<Out> kids;
        kids.reserve(n->kids.size());
        for (const auto& c : n->kids) kids.push_back(region(c, depth, env, build));
        std::sort(kids.begin(), kids.end(), [](const Out& a, const Out& b) { return a.key < b.key; });
        return assemble(n->kind, kids, build);
      }
    }
  }

  static Out assemble(Kind k, const std::vector<Out>& kids, bool build) {
    std::size_t len = kids.size() + 2;
    for (const auto& o : kids) len += o.key.size();
    std::string key;
    key.reserve(len);
    key += k == Kind::par ? '[' : k == Kind::copar ? '(' : '<';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) key += ';';
      key += kids[i].key;
    }
    key += k == Kind::par ? ']' : k == Kind::copar ? ')' : '>';
    Structure s;
    if (build) {
      std::vector<Structure> v;
      v.reserve(kids.size());
      for (const auto& o : kids) v.push_back(o.s);
      s = raw(k, std::move(v));
    }
    return {s, key};
  }
};

inline std::string bound_prefix(const std::set<AtomName>& free) {
  std::string prefix = "_";
  for (;;) {
    bool clash = false;
    for (const auto& n : free)
      if (n.text.rfind(prefix, 0) == 0) {
        clash = true;
        break;
      }
    if (!clash) return prefix;
    prefix += '_';
  }
}

}  // namespace detail

struct Canonical {
  Structure form;
  std::string key;
};

inline Canonical canonical(const Structure& r) {
  detail::Lifter lifter;
  Structure lifted = lifter.block(r, {});
  detail::Labeller lab(detail::bound_prefix(free_names(r)));
  auto out = lab.block(lifted, 0, {}, true);
  return {out.s, std::move(out.key)};
}

inline std::string canonical_key(const Structure& r) {
  detail::Lifter lifter;
  Structure lifted = lifter.block(r, {});
  detail::Labeller lab("_");
  return lab.block(lifted, 0, {}, false).key;
}

inline Structure canonicalize(const Structure& r) { return canonical(r).form; }

inline bool equiv(const Structure& r, const Structure& t) { return canonical_key(r) == canonical_key(t); }

// Key of a canonical structure with every bound occurrence anonymised. Stable
// under relabelling of binders, used to localise differences between two
// canonical structures.
namespace detail {
inline std::string anon_key(const Structure& s, std::set<AtomName>& bound) {
  switch (s->kind) {
    case Kind::unit: return "1";
    case Kind::atom:
      return std::string(s->negative ? "-" : "+") + (bound.count(s->name) ? "?" : "f:" + s->name.text);
    case Kind::ren: {
      std::vector<AtomName> added;
      Structure b = s;
      while (b->kind == Kind::ren) {
        if (bound.insert(b->name).second) added.push_back(b->name);
        b = b->kids[0];
      }
      std::size_t k = 0;
      for (Structure t = s; t->kind == Kind::ren; t = t->kids[0]) ++k;
      std::string key = "{" + std::to_string(k) + "}" + anon_key(b, bound);
      for (const auto& n : added) bound.erase(n);
      return key;
    }
    default: {
      std::vector<std::string> keys;
      for (const auto& c : s->kids) keys.push_back(anon_key(c, bound));
      if (s->kind != Kind::seq) std::sort(keys.begin(), keys.end());
      std::string key(1, s->kind == Kind::par ? '[' : s->kind == Kind::copar ? '(' : '<');
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i) key += ';';
        key += keys[i];
      }
      key += s->kind == Kind::par ? ']' : s->kind == Kind::copar ? ')' : '>';
      return key;
    }
  }
}
}  // namespace detail

inline std::string anon_key(const Structure& s) {
  std::set<AtomName> bound;
  return detail::anon_key(s, bound);
}

// Binder-blind invariant of the ≈-class: equal for equivalent structures and
// cheap to compute, so it filters candidates before full canonicalization.
inline std::string shape_key(const Structure& r) {
  detail::Lifter lifter;
  return anon_key(lifter.block(r, {}));
}

}  // namespace seqren
