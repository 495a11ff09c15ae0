#include "support.hpp"

using namespace seqren;
using namespace seqren::testing;

namespace {
ImllFormula F(const char* s) { return parse_formula(s); }
}  // namespace

TEST(ImllEmbed, Formulas) {
  EXPECT_EQ(print_structure(embed_formula(F("a -o b"))), "[~a; b]");
  EXPECT_EQ(print_structure(embed_formula(F("a * b"))), "(a; b)");
  EXPECT_EQ(print_structure(embed_formula(F("a"))), "a");
}

TEST(ImllEmbed, Sequents) {
  auto a = F("a * b");
  EXPECT_TRUE(Equiv(embed_sequent({a}, a), seq({negate(embed_formula(a)), embed_formula(a)})));
  EXPECT_EQ(print_structure(embed_sequent({}, F("a -o a"))), "[~a; a]");
  EXPECT_EQ(print_structure(embed_sequent({F("a"), F("b")}, F("a * b"))), "<(~a; ~b); (a; b)>");
}

TEST(ImllParse, Precedence) {
  auto f = F("a -o b -o c");
  ASSERT_EQ(f->kind, ImllKind::lolli);
  EXPECT_EQ(f->right->kind, ImllKind::lolli);
  auto g = F("a * b -o c");
  ASSERT_EQ(g->kind, ImllKind::lolli);
  EXPECT_EQ(g->left->kind, ImllKind::tensor);
  EXPECT_TRUE(formula_equal(F(print_formula(F("(a -o b) -o c * (d * e)")).c_str()), F("(a -o b) -o c * (d * e)")));
  EXPECT_THROW(F("a -o"), ImllParseError);
}

TEST(ImllCompile, Axiom) {
  auto d = compile_proof(imll_ax(F("a -o b")));
  EXPECT_TRUE(d.steps.empty());
  EXPECT_EQ(print_structure(d.conclusion), "<(a; ~b); [~a; b]>");
  EXPECT_EQ(print_structure(d.premise()), print_structure(d.conclusion));
}

TEST(ImllCompile, LolliOverAxiom) {
  auto p = imll_lolli(imll_ax(F("a")), 0);
  auto d = compile_proof(p);
  EXPECT_EQ(print_structure(d.conclusion), "[~a; a]");
  EXPECT_EQ(print_structure(d.premise()), "<~a; a>");
  EXPECT_TRUE(Checks(d, all_rules()));
}

TEST(ImllCompile, TensorOfAxioms) {
  auto d = compile_proof(imll_tensor(imll_ax(F("a")), imll_ax(F("b"))));
  EXPECT_EQ(print_structure(d.conclusion), "<(~a; ~b); (a; b)>");
  EXPECT_EQ(print_structure(d.premise()), "(<~a; a>; <~b; b>)");
  ASSERT_EQ(d.steps.size(), 1u);
  EXPECT_TRUE(Checks(d, all_rules()));
}

TEST(ImllCompile, Cut) {
  auto p = imll_cut(imll_tensor(imll_ax(F("a")), imll_ax(F("b"))), imll_ax(F("a * b")));
  auto d = compile_proof(p);
  EXPECT_TRUE(Equiv(d.conclusion, embed_sequent(p->sequent)));
  EXPECT_EQ(print_structure(d.premise()), print_structure(free_axioms(p)));
  EXPECT_TRUE(Checks(d, all_rules()));
  EXPECT_TRUE(rules_used(d).count(RuleName::ai_up));
}

TEST(ImllCompile, NestedCutFreeProofsAvoidInteractionUp) {
  auto curry = imll_lolli(imll_lolli(imll_tensor(imll_ax(F("a")), imll_ax(F("b -o c"))), 1), 0);
  auto d = compile_proof(curry);
  EXPECT_TRUE(Equiv(d.conclusion, S("[~a; (b; ~c); (a; [~b; c])]")));
  EXPECT_TRUE(Checks(d, all_rules()));
  EXPECT_FALSE(rules_used(d).count(RuleName::ai_up));
}

TEST(ImllProofs, Validation) {
  auto bad = std::make_shared<ImllProofNode>();
  bad->rule = ImllRule::ax;
  bad->sequent = {{F("a")}, F("b")};
  EXPECT_THROW(compile_proof(bad), InvalidProof);
  auto t = std::make_shared<ImllProofNode>(*imll_tensor(imll_ax(F("a")), imll_ax(F("b"))));
  t->sequent.context = {F("a")};
  EXPECT_THROW(compile_proof(t), InvalidProof);
}

TEST(ImllProofs, JsonRoundTrip) {
  auto p = imll_cut(imll_ax(F("a")), imll_lolli(imll_tensor(imll_ax(F("a")), imll_ax(F("b"))), 1));
  auto j = to_json(p);
  auto q = imll_proof_from_json(j);
  EXPECT_EQ(to_json(q).dump(), j.dump());
  EXPECT_TRUE(Checks(compile_proof(q), all_rules()));
  EXPECT_THROW(imll_proof_from_json(nlohmann::json::parse(R"({"rule":"weaken"})")), InvalidProof);
}
