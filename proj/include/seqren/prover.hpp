#pragma once

#include <chrono>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rules.hpp"
#include "translate.hpp"

namespace seqren {

struct SearchBudget {
  int max_depth = 16;
  std::size_t max_states = 2'000'000;
  double wall_clock = 60.0;  // seconds
};

enum class SearchStatus { proved, exhausted_complete, budget_hit };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::proved: return "proved";
    case SearchStatus::exhausted_complete: return "exhausted_complete";
    case SearchStatus::budget_hit: return "budget_hit";
  }
  return "?";
}

struct SearchStats {
  std::size_t states_expanded = 0;
  std::size_t memo_hits = 0;
  int depth_reached = 0;
  double wall_seconds = 0;
  bool closure_run = false;
};

inline nlohmann::json to_json(const SearchStats& s) {
  return {{"states_expanded", s.states_expanded},
          {"memo_hits", s.memo_hits},
          {"depth_reached", s.depth_reached},
          {"wall_seconds", s.wall_seconds},
          {"closure_run", s.closure_run}};
}

struct SearchOutcome {
  SearchStatus status;
  std::optional<Derivation> proof;
  SearchStats stats;
};

namespace detail {

struct Successor {
  RuleName rule;
  Structure form;
  std::string key;
};

// Free names must occur as many times positively as negatively: ai_down is
// the only rule that removes atoms and free names are never renamed.
inline bool free_balance(const Structure& r) {
  std::map<AtomName, int> bal;
  auto go = [&](auto&& self, const Structure& s, std::multiset<AtomName>& bound) -> void {
    if (s->kind == Kind::atom) {
      if (!bound.count(s->name)) bal[s->name] += s->negative ? -1 : 1;
      return;
    }
    if (s->kind == Kind::ren) {
      auto it = bound.insert(s->name);
      self(self, s->kids[0], bound);
      bound.erase(it);
      return;
    }
    for (const auto& k : s->kids) self(self, k, bound);
  };
  std::multiset<AtomName> bound;
  go(go, r, bound);
  for (auto& [n, v] : bal)
    if (v != 0) return false;
  return true;
}

// Bottom-up, down-fragment rules only move the connective joining two atoms
// from par towards seq and copar, never back. Every atom must still meet a
// dual partner under a par: same name, or two bound names that r_down may
// identify later. A perfect matching of such partners must exist.
inline bool partners_available(const Structure& r) {
  struct Occ {
    AtomName name;
    bool negative, bound;
    std::vector<std::pair<const Node*, int>> path;
  };
  std::vector<Occ> occ;
  std::vector<std::pair<const Node*, int>> path;
  auto go = [&](auto&& self, const Structure& s, std::multiset<AtomName>& bound) -> void {
    if (s->kind == Kind::atom) {
      occ.push_back({s->name, s->negative, bound.count(s->name) > 0, path});
      return;
    }
    if (s->kind == Kind::ren) {
      auto it = bound.insert(s->name);
      self(self, s->kids[0], bound);
      bound.erase(it);
      return;
    }
    for (std::size_t i = 0; i < s->kids.size(); ++i) {
      path.emplace_back(s.get(), static_cast<int>(i));
      self(self, s->kids[i], bound);
      path.pop_back();
    }
  };
  std::multiset<AtomName> bound;
  go(go, r, bound);
  auto under_par = [](const Occ& a, const Occ& b) {
    std::size_t i = 0;
    while (i < a.path.size() && i < b.path.size() && a.path[i] == b.path[i]) ++i;
    return i < a.path.size() && i < b.path.size() && a.path[i].first->kind == Kind::par;
  };
  std::vector<int> pos, neg;
  for (int i = 0; i < static_cast<int>(occ.size()); ++i) (occ[i].negative ? neg : pos).push_back(i);
  if (pos.size() != neg.size()) return false;
  std::vector<std::vector<int>> adj(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const Occ& a = occ[pos[i]];
    for (std::size_t j = 0; j < neg.size(); ++j) {
      const Occ& b = occ[neg[j]];
      bool names_ok = a.bound && b.bound ? true : (!a.bound && !b.bound && a.name == b.name);
      if (names_ok && under_par(a, b)) adj[i].push_back(static_cast<int>(j));
    }
    if (adj[i].empty()) return false;
  }
  std::vector<int> match(neg.size(), -1);
  auto augment = [&](auto&& self, int u, std::vector<char>& seen) -> bool {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match[v] < 0 || self(self, match[v], seen)) {
        match[v] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < pos.size(); ++u) {
    std::vector<char> seen(neg.size(), 0);
    if (!augment(augment, static_cast<int>(u), seen)) return false;
  }
  return true;
}

// ≈-distinct premises one down-fragment step above `c`.
inline std::vector<Successor> down_successors(const Canonical& c, bool interaction_only) {
  std::vector<Successor> out;
  std::unordered_set<std::string> seen{c.key}, raw_seen;
  for (RuleName r : {RuleName::ai_down, RuleName::r_down, RuleName::q_down, RuleName::switch_}) {
    enumerate_raw(
        r, c.form, {}, nullptr,
        [&](const Structure& prem, const Path&) {
          // syntactic duplicates are common and far cheaper to spot than ≈
          if (!raw_seen.insert(print_structure(prem)).second) return;
          auto pc = canonical(prem);
          if (!seen.insert(pc.key).second) return;
          if (!partners_available(pc.form)) return;
          out.push_back({r, pc.form, pc.key});
        },
        5'000'000, nullptr, interaction_only);
  }
  std::stable_sort(out.begin(), out.end(), [](const Successor& a, const Successor& b) {
    return atom_count(a.form) < atom_count(b.form);
  });
  return out;
}

struct OutOfBudget {};

class Search {
 public:
  Search(const SearchBudget& b) : budget_(b), start_(std::chrono::steady_clock::now()) {}

  SearchOutcome run(const Structure& goal) {
    SearchOutcome res{SearchStatus::budget_hit, std::nullopt, {}};
    auto root = canonical(goal);
    try {
      if (!free_balance(root.form) || !partners_available(root.form)) {
        res.status = SearchStatus::exhausted_complete;
      } else if (auto steps = deepen(root)) {
        res.status = SearchStatus::proved;
        res.proof = assemble(goal, *steps);
      } else {
        res.stats.closure_run = true;
        closure_only_ = true;
        auto found = closure(root);
        if (found) {
          res.status = SearchStatus::proved;
          res.proof = assemble(goal, *found);
        } else {
          res.status = SearchStatus::exhausted_complete;
        }
      }
    } catch (const OutOfBudget&) {
      res.status = SearchStatus::budget_hit;
    }
    stats_.wall_seconds = elapsed();
    stats_.closure_run = res.stats.closure_run;
    res.stats = stats_;
    return res;
  }

 private:
  using Steps = std::vector<std::pair<RuleName, Structure>>;

  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  SearchStats stats_;
  bool closure_only_ = false;
  std::unordered_map<std::string, std::vector<Successor>> cache_[2];
  std::unordered_map<std::string, int> failed_;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void tick() {
    ++stats_.states_expanded;
    if (stats_.states_expanded > budget_.max_states || elapsed() > budget_.wall_clock) throw OutOfBudget{};
  }

  const std::vector<Successor>& successors(const std::string& key, const Structure& form, bool restricted) {
    auto& cache = cache_[restricted ? 1 : 0];
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, down_successors(Canonical{form, key}, restricted)).first->second;
  }

  std::optional<Steps> deepen(const Canonical& root) {
    for (int d = 0; d <= budget_.max_depth; ++d) {
      stats_.depth_reached = d;
      Steps path;
      if (dfs(root.key, root.form, d, path)) return path;
    }
    return std::nullopt;
  }

  bool dfs(const std::string& key, const Structure& form, int remaining, Steps& path) {
    if (is_unit(form)) return true;
    if (static_cast<int>(atom_count(form) / 2) > remaining) return false;
    if (auto it = failed_.find(key); it != failed_.end() && it->second >= remaining) {
      ++stats_.memo_hits;
      return false;
    }
    tick();
    for (const auto& s : successors(key, form, true)) {
      path.emplace_back(s.rule, s.form);
      if (dfs(s.key, s.form, remaining - 1, path)) return true;
      path.pop_back();
    }
    auto& f = failed_[key];
    f = std::max(f, remaining);
    return false;
  }

  // Breadth-first closure over unrestricted successors; complete because the
  // down fragment never increases size, so the reachable space is finite.
  std::optional<Steps> closure(const Canonical& root) {
    struct Parent {
      std::string from;
      RuleName rule;
      Structure form;
    };
    std::unordered_map<std::string, Parent> parent;
    std::deque<std::pair<std::string, Structure>> queue{{root.key, root.form}};
    parent.emplace(root.key, Parent{"", RuleName::ai_down, root.form});
    while (!queue.empty()) {
      auto [key, form] = queue.front();
      queue.pop_front();
      if (is_unit(form)) {
        Steps steps;
        for (std::string k = key; k != root.key; k = parent.at(k).from)
          steps.emplace_back(parent.at(k).rule, parent.at(k).form);
        std::reverse(steps.begin(), steps.end());
        return steps;
      }
      tick();
      for (const auto& s : successors(key, form, false)) {
        if (parent.count(s.key)) continue;
        parent.emplace(s.key, Parent{key, s.rule, s.form});
        queue.emplace_back(s.key, s.form);
      }
    }
    return std::nullopt;
  }

  static Derivation assemble(const Structure& goal, const Steps& steps) {
    Derivation d;
    d.conclusion = goal;
    Structure cur = goal;
    for (const auto& [r, f] : steps) {
      d.steps.push_back({r, cur, f, std::nullopt});
      cur = f;
    }
    return d;
  }
};

}  // namespace detail

// Bottom-up search in the down fragment for a proof of `goal` (premise 1).
inline SearchOutcome prove(const Structure& goal, const SearchBudget& budget = {}) {
  return detail::Search(budget).run(goal);
}

inline Structure reduction_goal(const Lam& m, const Lam& n, const AtomName& o) {
  return par({translate(m, o), negate(translate(n, o))});
}

inline SearchOutcome prove_reduction(const Lam& m, const Lam& n, const AtomName& o, const SearchBudget& budget = {}) {
  return prove(reduction_goal(m, n, o), budget);
}

// Unpruned breadth-first reachability of 1; the ground truth for small goals.
inline bool exhaustive_oracle(const Structure& goal) {
  if (size(goal) > 8) throw std::invalid_argument("exhaustive_oracle: goal larger than 8");
  auto root = canonical(goal);
  std::unordered_set<std::string> seen{root.key};
  std::deque<Canonical> queue{root};
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    if (is_unit(c.form)) return true;
    for (RuleName r : {RuleName::ai_down, RuleName::r_down, RuleName::q_down, RuleName::switch_})
      detail::enumerate_raw(r, c.form, {}, nullptr, [&](const Structure& prem, const Path&) {
        auto pc = canonical(prem);
        if (seen.insert(pc.key).second) queue.push_back(pc);
      });
  }
  return false;
}

}  // namespace seqren
