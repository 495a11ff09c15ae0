#pragma once

// Seeded random structures and linear terms for property tests.

#include <random>

#include "lambda.hpp"
#include "structure.hpp"

namespace seqren {

struct StructureGenOptions {
  int max_atoms = 20;
  int max_binders = 4;
  std::vector<std::string> names{"a", "b", "c", "d"};
  double unit_rate = 0.05;
};

namespace detail {

inline Structure random_tree(std::mt19937_64& rng, int atoms, const StructureGenOptions& o) {
  std::uniform_real_distribution<double> u(0, 1);
  if (atoms <= 1) {
    if (atoms == 0 || u(rng) < o.unit_rate) return unit();
    const auto& n = o.names[std::uniform_int_distribution<std::size_t>(0, o.names.size() - 1)(rng)];
    return atom(AtomName(n), u(rng) < 0.5);
  }
  int parts = std::min(atoms, std::uniform_int_distribution<int>(2, 3)(rng));
  std::vector<int> cut(atoms - 1);
  std::iota(cut.begin(), cut.end(), 1);
  std::shuffle(cut.begin(), cut.end(), rng);
  cut.resize(parts - 1);
  std::sort(cut.begin(), cut.end());
  cut.push_back(atoms);
  std::vector<Structure> kids;
  int prev = 0;
  for (int c : cut) {
    kids.push_back(random_tree(rng, c - prev, o));
    prev = c;
  }
  static const Kind kinds[] = {Kind::par, Kind::copar, Kind::seq};
  return raw(kinds[std::uniform_int_distribution<int>(0, 2)(rng)], std::move(kids));
}

inline Structure wrap_at(const Structure& s, std::size_t& countdown, const AtomName& a) {
  if (countdown == 0) {
    countdown = static_cast<std::size_t>(-1);
    return ren(a, s);
  }
  --countdown;
  if (s->kids.empty()) return s;
  auto kids = s->kids;
  for (auto& k : kids) k = wrap_at(k, countdown, a);
  if (s->kind == Kind::ren) return ren(s->name, kids[0]);
  return raw(s->kind, std::move(kids));
}

inline std::size_t node_count(const Structure& s) {
  std::size_t n = 1;
  for (const auto& k : s->kids) n += node_count(k);
  return n;
}

}  // namespace detail

// Between 1 and max_atoms atoms, up to max_binders renamings on random subtrees.
inline Structure random_structure(std::mt19937_64& rng, const StructureGenOptions& o = {}) {
  int atoms = std::uniform_int_distribution<int>(1, o.max_atoms)(rng);
  Structure s = detail::random_tree(rng, atoms, o);
  int binders = std::uniform_int_distribution<int>(0, o.max_binders)(rng);
  for (int i = 0; i < binders; ++i) {
    std::size_t at = std::uniform_int_distribution<std::size_t>(0, detail::node_count(s) - 1)(rng);
    const auto& n = o.names[std::uniform_int_distribution<std::size_t>(0, o.names.size() - 1)(rng)];
    s = detail::wrap_at(s, at, AtomName(n));
  }
  return s;
}

struct TermGenOptions {
  int max_size = 12;         // approximate number of constructors
  double free_var_rate = 0.3;  // chance of a free variable where a closed subterm is needed
};

namespace detail {

class TermGen {
 public:
  TermGen(std::mt19937_64& rng, const TermGenOptions& o) : rng_(rng), o_(o) {}

  // A linear term using each variable of `vars` exactly once.
  Lam gen(std::vector<std::string> vars, int budget) {
    std::uniform_real_distribution<double> u(0, 1);
    if (vars.empty() && (budget <= 1 || u(rng_) < o_.free_var_rate)) return lvar("f" + std::to_string(free_++));
    if (vars.size() == 1 && (budget <= 1 || u(rng_) < 0.3)) return lvar(vars[0]);
    if (budget <= 1) return app_split(vars, 2);
    double r = u(rng_);
    if (r < 0.35) {
      std::string x = fresh();
      vars.push_back(x);
      return labs(x, gen(vars, budget - 1));
    }
    if (r < 0.7) return app_split(vars, budget - 1);
    std::string x = fresh();
    auto [l, rr] = split(vars);
    l.push_back(x);
    int b1 = std::uniform_int_distribution<int>(1, std::max(1, budget - 2))(rng_);
    return lesub(gen(l, b1), x, gen(rr, std::max(1, budget - 1 - b1)));
  }

 private:
  std::mt19937_64& rng_;
  TermGenOptions o_;
  int bound_ = 0, free_ = 0;

  std::string fresh() {
    static const char* base[] = {"x", "y", "z", "u", "v", "w"};
    int i = bound_++;
    return std::string(base[i % 6]) + (i >= 6 ? std::to_string(i / 6) : "");
  }

  std::pair<std::vector<std::string>, std::vector<std::string>> split(std::vector<std::string> vars) {
    std::shuffle(vars.begin(), vars.end(), rng_);
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, vars.size())(rng_);
    return {std::vector<std::string>(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(k)),
            std::vector<std::string>(vars.begin() + static_cast<std::ptrdiff_t>(k), vars.end())};
  }

  Lam app_split(const std::vector<std::string>& vars, int budget) {
    auto [l, r] = split(vars);
    int b1 = std::uniform_int_distribution<int>(1, std::max(1, budget - 1))(rng_);
    return lapp(gen(l, b1), gen(r, std::max(1, budget - b1)));
  }
};

}  // namespace detail

inline Lam random_linear_term(std::mt19937_64& rng, const TermGenOptions& o = {}) {
  detail::TermGen g(rng, o);
  return g.gen({}, std::uniform_int_distribution<int>(1, o.max_size)(rng));
}

}  // namespace seqren
