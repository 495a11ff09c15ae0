#include "support.hpp"

using namespace seqren;
using namespace seqren::testing;

namespace {

SearchOutcome proves(const char* s) { return prove(S(s)); }

}  // namespace

TEST(Prover, SmallVerdicts) {
  auto p = proves("[a;~a]");
  EXPECT_EQ(p.status, SearchStatus::proved);
  ASSERT_TRUE(p.proof);
  EXPECT_TRUE(is_unit(canonicalize(p.proof->premise())));
  EXPECT_TRUE(Checks(*p.proof, down_fragment()));

  EXPECT_EQ(proves("a").status, SearchStatus::exhausted_complete);
  EXPECT_EQ(proves("(a;~a)").status, SearchStatus::exhausted_complete);
  EXPECT_EQ(proves("[<a;b>;<~a;~b>]").status, SearchStatus::proved);
  EXPECT_EQ(proves("[<a;b>;<~b;~a>]").status, SearchStatus::exhausted_complete);
  EXPECT_EQ(proves("{x}[x;~x]").status, SearchStatus::proved);
  EXPECT_EQ(proves("[{x}<x;a>;{y}<~y;~a>]").status, SearchStatus::proved);
  EXPECT_TRUE(is_unit(canonicalize(proves("1").proof->conclusion)));
}

TEST(Prover, ReductionGoal) {
  auto r = prove_reduction(L("x[x:=y]"), L("y"), AtomName("ch_o"));
  ASSERT_EQ(r.status, SearchStatus::proved);
  EXPECT_TRUE(Checks(*r.proof, down_fragment()));
  auto n = prove_reduction(L("y"), L("z"), AtomName("ch_o"));
  EXPECT_EQ(n.status, SearchStatus::exhausted_complete);
}

TEST(Prover, BudgetIsReported) {
  SearchBudget b;
  b.max_states = 1;
  auto r = prove(reduction_goal(L("(\\x.x) y"), L("y"), AtomName("ch_o")), b);
  EXPECT_EQ(r.status, SearchStatus::budget_hit);
  EXPECT_FALSE(r.proof);
  auto j = to_json(r.stats);
  for (const char* k : {"states_expanded", "memo_hits", "depth_reached", "wall_seconds"}) EXPECT_TRUE(j.contains(k));
}

TEST(Oracle, RejectsLargeGoals) {
  EXPECT_THROW(exhaustive_oracle(S("[a;b;c;d;e;f;g;h;i]")), std::invalid_argument);
  EXPECT_TRUE(exhaustive_oracle(S("[a;~a]")));
  EXPECT_FALSE(exhaustive_oracle(S("[<a;b>;<~b;~a>]")));
}

// Desk-scale derivability: ⟨R;T⟩ and (R;T) are provable iff both parts are;
// ⌊a⌋R iff R{b/a} for a fresh b.
TEST(Prover, DerivabilityOfStructures) {
  std::mt19937_64 rng(71);
  StructureGenOptions o;
  o.max_atoms = 4;
  o.max_binders = 1;
  o.names = {"a", "b"};
  int checked = 0;
  for (int i = 0; i < 120 && checked < 40; ++i) {
    auto r = random_structure(rng, o);
    auto t = random_structure(rng, o);
    if (atom_count(r) + atom_count(t) > 8) continue;
    bool pr = exhaustive_oracle(r), pt = exhaustive_oracle(t);
    bool both = pr && pt;
    EXPECT_EQ(prove(seq({r, t})).status == SearchStatus::proved, both) << print_structure(r) << " / " << print_structure(t);
    EXPECT_EQ(prove(copar({r, t})).status == SearchStatus::proved, both);
    auto bound = ren("a", r);
    EXPECT_EQ(prove(bound).status == SearchStatus::proved, exhaustive_oracle(subst_atom(r, "a", "fresh_b")));
    ++checked;
  }
  EXPECT_GE(checked, 30);
}
