// Cross-check of enumerate_applications against a naive matcher: generate every
// raw binary tree over a literal multiset (plus one optional unit and one
// optional binder), match rule shapes syntactically at every node, and compare
// the premise classes with what the enumerator finds on the canonical form.

#include <functional>
#include <map>

#include "support.hpp"

using namespace seqren;

namespace {

using Rebuild = std::function<Structure(const Structure&)>;
using Premises = std::map<RuleName, std::set<std::string>>;

// Ways to read x as a binary k-node, including the unit readings.
std::vector<std::pair<Structure, Structure>> readings(const Structure& x, Kind k) {
  std::vector<std::pair<Structure, Structure>> v{{x, unit()}, {unit(), x}};
  if (x->kind == k && x->kids.size() == 2) {
    v.emplace_back(x->kids[0], x->kids[1]);
    if (k != Kind::seq) v.emplace_back(x->kids[1], x->kids[0]);
  }
  return v;
}

void visit(const Structure& n, const Rebuild& rb, const std::function<void(const Structure&, const Rebuild&)>& f) {
  f(n, rb);
  for (std::size_t i = 0; i < n->kids.size(); ++i)
    visit(
        n->kids[i],
        [&, i](const Structure& x) {
          auto kids = n->kids;
          kids[i] = x;
          return rb(n->kind == Kind::ren ? ren(n->name, kids[0]) : raw(n->kind, std::move(kids)));
        },
        f);
}

void naive_premises(const Structure& t, Premises& out) {
  auto b = [](Kind k, Structure x, Structure y) { return raw(k, {std::move(x), std::move(y)}); };
  visit(t, [](const Structure& x) { return x; }, [&](const Structure& n, const Rebuild& rb) {
    if (n->kind == Kind::par) {
      for (int o = 0; o < 2; ++o) {
        auto X = n->kids[o], Y = n->kids[1 - o];
        if (X->kind == Kind::atom && Y->kind == Kind::atom && X->name == Y->name && X->negative != Y->negative)
          out[RuleName::ai_down].insert(canonical_key(rb(unit())));
        for (auto [R, T] : readings(X, Kind::copar))
          out[RuleName::switch_].insert(canonical_key(rb(b(Kind::copar, b(Kind::par, R, Y), T))));
        for (auto [R, T] : readings(X, Kind::seq))
          for (auto [U, V] : readings(Y, Kind::seq))
            out[RuleName::q_down].insert(canonical_key(rb(b(Kind::seq, b(Kind::par, R, U), b(Kind::par, T, V)))));
      }
    }
    if (n->kind == Kind::seq)
      for (auto [R, U] : readings(n->kids[0], Kind::copar))
        for (auto [T, V] : readings(n->kids[1], Kind::copar))
          out[RuleName::q_up].insert(canonical_key(rb(b(Kind::copar, b(Kind::seq, R, T), b(Kind::seq, U, V)))));
  });
}

std::vector<Structure> trees(const std::vector<Structure>& l, std::size_t i, std::size_t j) {
  if (j - i == 1) return {l[i]};
  std::vector<Structure> out;
  for (std::size_t k = i + 1; k < j; ++k)
    for (const auto& x : trees(l, i, k))
      for (const auto& y : trees(l, k, j))
        for (Kind c : {Kind::par, Kind::copar, Kind::seq}) out.push_back(raw(c, {x, y}));
  return out;
}

int bound_leaves(const Structure& s) {
  int c = s->kind == Kind::atom && s->name.text == "z";
  for (const auto& k : s->kids) c += bound_leaves(k);
  return c;
}

// Put {z} on every node that holds all `zs` occurrences of z.
void place_binder(const Structure& s, int zs, const Rebuild& rb, std::vector<Structure>& out) {
  if (bound_leaves(s) != zs) return;
  out.push_back(rb(ren(AtomName("z"), s)));
  for (std::size_t i = 0; i < s->kids.size(); ++i)
    place_binder(
        s->kids[i], zs,
        [&, i](const Structure& x) {
          auto k = s->kids;
          k[i] = x;
          return rb(raw(s->kind, std::move(k)));
        },
        out);
}

std::string base_name(const std::string& lit) { return lit[0] == '~' ? lit.substr(1) : lit; }

// Goal class -> (canonical form, naive premises).
std::map<std::string, std::pair<Structure, Premises>> naive_table(const std::vector<std::string>& lits) {
  std::map<std::string, std::pair<Structure, Premises>> table;
  // Some occurrences of one name may be bound instead, under the name z.
  std::vector<std::vector<std::string>> variants{lits};
  const std::size_t n = lits.size();
  for (unsigned m = 1; m < (1u << n); ++m) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) names.insert(base_name(lits[i]));
    if (names.size() != 1) continue;
    auto v = lits;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) v[i] = lits[i][0] == '~' ? "~z" : "z";
    variants.push_back(v);
  }
  for (const auto& base : variants) {
    int zs = 0;
    for (const auto& x : base) zs += base_name(x) == "z";
    for (int units = 0; units <= 1; ++units) {
      auto leaves = base;
      if (units) leaves.push_back("1");
      std::sort(leaves.begin(), leaves.end());
      do {
        std::vector<Structure> ls;
        for (const auto& x : leaves) ls.push_back(parse_structure(x));
        for (const auto& t : trees(ls, 0, ls.size())) {
          std::vector<Structure> reps;
          if (zs)
            place_binder(t, zs, [](const Structure& x) { return x; }, reps);
          else
            reps.push_back(t);
          for (const auto& r : reps) {
            auto c = canonical(r);
            auto& entry = table[c.key];
            entry.first = c.form;
            naive_premises(r, entry.second);
          }
        }
      } while (std::next_permutation(leaves.begin(), leaves.end()));
    }
  }
  return table;
}

void cross_check(const std::vector<std::string>& lits) {
  for (auto& [key, entry] : naive_table(lits)) {
    for (RuleName rule : {RuleName::ai_down, RuleName::switch_, RuleName::q_down, RuleName::q_up}) {
      auto naive = entry.second[rule];
      naive.erase(key);  // identity steps are never instances
      std::set<std::string> found;
      for (const auto& i : enumerate_applications(rule, entry.first)) found.insert(canonical_key(i.premise));
      for (const auto& p : naive)
        EXPECT_TRUE(found.count(p)) << to_string(rule) << " misses a premise of " << print_structure(entry.first);
      for (const auto& p : found)
        EXPECT_TRUE(naive.count(p)) << to_string(rule) << " has an unmatched premise of "
                                    << print_structure(entry.first);
    }
  }
}

}  // namespace

TEST(EnumeratorOracle, DualPairAndThirdName) { cross_check({"a", "~a", "b"}); }
TEST(EnumeratorOracle, RepeatedName) { cross_check({"a", "~a", "a"}); }
TEST(EnumeratorOracle, NoDualPair) { cross_check({"a", "b", "c"}); }
