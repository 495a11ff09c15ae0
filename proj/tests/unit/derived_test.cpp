#include "support.hpp"

using namespace seqren;
using namespace seqren::testing;

namespace {

const RuleSet kInteractionDown{RuleName::ai_down, RuleName::switch_, RuleName::q_down, RuleName::r_down};
const RuleSet kInteractionUp{RuleName::ai_up, RuleName::switch_, RuleName::q_up, RuleName::r_up};
const RuleSet kDefDown{RuleName::ai_down, RuleName::switch_, RuleName::q_down};
const RuleSet kDefUp{RuleName::ai_up, RuleName::switch_, RuleName::q_up};
const RuleSet kExtrusion{RuleName::q_down, RuleName::switch_, RuleName::r_down};

StructureGenOptions small() {
  StructureGenOptions o;
  o.max_atoms = 8;
  o.max_binders = 2;
  return o;
}

}  // namespace

TEST(GeneralInteraction, DownExamples) {
  auto d = gen_interaction_down(S("a"));
  ASSERT_EQ(d.steps.size(), 1u);
  EXPECT_EQ(d.steps[0].rule, RuleName::ai_down);

  auto s = gen_interaction_down(S("<a;b>"));
  EXPECT_TRUE(Equiv(s.conclusion, S("[<a;b>;<~a;~b>]")));
  EXPECT_TRUE(is_unit(canonicalize(s.premise())));
  EXPECT_TRUE(Checks(s, kInteractionDown));
  auto census = rule_census(s);
  EXPECT_EQ(census[RuleName::q_down], 1u);
  EXPECT_EQ(census[RuleName::ai_down], 2u);

  auto r = gen_interaction_down(S("{a}b"));
  EXPECT_TRUE(Checks(r, kInteractionDown));
  auto rb = gen_interaction_down(S("{a}<a;b>"));
  EXPECT_TRUE(Checks(rb, kInteractionDown));
  EXPECT_EQ(rule_census(rb)[RuleName::r_down], 1u);
}

TEST(GeneralInteraction, UpExamples) {
  auto d = gen_interaction_up(S("a"));
  ASSERT_EQ(d.steps.size(), 1u);
  EXPECT_EQ(d.steps[0].rule, RuleName::ai_up);
  EXPECT_TRUE(is_unit(d.conclusion));

  auto r = gen_interaction_up(S("{a}<a;c>"));
  EXPECT_TRUE(Equiv(r.premise(), S("({a}<a;c>;{a}<~a;~c>)")));
  EXPECT_TRUE(Checks(r, kInteractionUp));
  EXPECT_EQ(rule_census(r)[RuleName::r_up], 1u);

  auto p = gen_interaction_up(S("[a;b]"));
  EXPECT_TRUE(Checks(p, kInteractionUp));
  EXPECT_TRUE(rules_used(p).count(RuleName::switch_));
}

TEST(Def, DownExamples) {
  auto d = def_down(S("x"), S("~ch_o"), AtomName("ch_p"));
  EXPECT_TRUE(Equiv(d.conclusion, S("[<x;ch_p>;(~ch_p;~ch_o)]")));
  EXPECT_TRUE(Equiv(d.premise(), S("<x;~ch_o>")));
  EXPECT_TRUE(Checks(d, kDefDown));

  auto u = def_down(unit(), S("t"), AtomName("a"));
  EXPECT_TRUE(Equiv(u.conclusion, S("[a;(~a;t)]")));
  EXPECT_TRUE(Checks(u, kDefDown));

  auto uu = def_down(unit(), unit(), AtomName("a"));
  EXPECT_TRUE(Equiv(uu.conclusion, S("[a;~a]")));
  EXPECT_TRUE(is_unit(canonicalize(uu.premise())));
  EXPECT_TRUE(Checks(uu, kDefDown));

  EXPECT_THROW(def_down(S("a"), S("b"), AtomName("a")), std::invalid_argument);
}

TEST(Def, UpExamples) {
  auto d = def_up(S("x"), S("~ch_o"), AtomName("ch_p"));
  EXPECT_TRUE(Equiv(d.conclusion, S("<x;~ch_o>")));
  EXPECT_TRUE(Checks(d, kDefUp));
  auto uu = def_up(unit(), unit(), AtomName("a"));
  EXPECT_TRUE(is_unit(canonicalize(uu.conclusion)));
  EXPECT_TRUE(Equiv(uu.premise(), S("(a;~a)")));
  EXPECT_TRUE(Checks(uu, kDefUp));
}

TEST(Mix, Examples) {
  auto m = mixp(S("a"), S("b"));
  ASSERT_EQ(m.steps.size(), 1u);
  EXPECT_EQ(m.steps[0].rule, RuleName::q_up);
  EXPECT_TRUE(Equiv(m.premise(), S("(a;b)")));
  auto p = pmix(S("a"), S("b"));
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0].rule, RuleName::q_down);
  EXPECT_TRUE(Equiv(p.conclusion, S("[a;b]")));
  EXPECT_TRUE(mixp(unit(), S("t")).steps.empty());
}

TEST(Extrusion, Examples) {
  EXPECT_TRUE(context_extrusion(parse_context("#"), S("r"), S("t")).steps.empty());

  auto q = context_extrusion(parse_context("<#;u>"), S("r"), S("t"));
  ASSERT_EQ(q.steps.size(), 1u);
  EXPECT_EQ(q.steps[0].rule, RuleName::q_down);
  EXPECT_TRUE(Equiv(q.conclusion, S("[<r;u>;t]")));
  EXPECT_TRUE(Equiv(q.premise(), S("<[r;t];u>")));

  auto b = context_extrusion(parse_context("{a}<#;a>"), S("r"), S("a"));
  EXPECT_TRUE(Equiv(b.conclusion, S("[{a}<r;a>;a]")));
  EXPECT_TRUE(Checks(b, kExtrusion));
  EXPECT_TRUE(Equiv(b.premise(), plug(parse_context("{c}<#;c>"), S("[r;a]"))));
}

TEST(DerivedRules, RandomStructuresCheckWithDeclaredRules) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 60; ++i) {
    auto r = random_structure(rng, small());
    auto t = random_structure(rng, small());
    std::set<AtomName> used;
    all_names(r, used);
    all_names(t, used);
    AtomName a = fresh_name(used, "p");
    EXPECT_TRUE(Checks(gen_interaction_down(r), kInteractionDown)) << print_structure(r);
    EXPECT_TRUE(Checks(gen_interaction_up(r), kInteractionUp)) << print_structure(r);
    auto dd = def_down(r, t, a);
    EXPECT_TRUE(Checks(dd, kDefDown)) << print_structure(r) << " / " << print_structure(t);
    auto fn = free_names(r);
    for (const auto& n : free_names(t)) fn.insert(n);
    fn.insert(a);
    EXPECT_EQ(free_names(dd.conclusion), fn);
    EXPECT_TRUE(Checks(def_up(r, t, a), kDefUp));
    EXPECT_TRUE(Checks(mixp(r, t), {RuleName::q_up}));
    EXPECT_TRUE(Checks(pmix(r, t), {RuleName::q_down}));
  }
}

TEST(DerivedRules, ExtrusionInRandomContexts) {
  std::mt19937_64 rng(42);
  const char* shapes[] = {"<#;u>", "(#;u)", "{a}#", "{a}<a;#>", "<v;{a}(#;~a)>", "[w;<#;{b}b>]", "{c}(<#;c>;~c)"};
  for (int i = 0; i < 40; ++i) {
    auto r = random_structure(rng, small());
    auto t = random_structure(rng, small());
    auto c = parse_context(shapes[i % 7]);
    auto d = context_extrusion(c, r, t);
    EXPECT_TRUE(Equiv(d.conclusion, par({plug(c, r), t})));
    EXPECT_TRUE(Checks(d, kExtrusion)) << shapes[i % 7] << " " << print_structure(r) << " " << print_structure(t);
  }
}
