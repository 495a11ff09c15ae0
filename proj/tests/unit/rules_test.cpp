#include "support.hpp"

using namespace seqren;
using namespace seqren::testing;

namespace {

std::vector<std::string> premises(RuleName r, const Structure& c) {
  std::vector<std::string> out;
  for (const auto& i : enumerate_applications(r, c)) out.push_back(canonical_key(i.premise));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> keys(std::initializer_list<const char*> ss) {
  std::vector<std::string> out;
  for (auto s : ss) out.push_back(canonical_key(S(s)));
  std::sort(out.begin(), out.end());
  return out;
}

bool step_ok(const char* concl, RuleName r, const char* prem) {
  return check_step(S(concl), RuleInstance{r, S(concl), S(prem), std::nullopt});
}

}  // namespace

TEST(Rules, Fragments) {
  EXPECT_EQ(down_fragment(), (RuleSet{RuleName::ai_down, RuleName::switch_, RuleName::q_down, RuleName::r_down}));
  EXPECT_EQ(up_fragment(), (RuleSet{RuleName::ai_up, RuleName::switch_, RuleName::q_up, RuleName::r_up}));
  for (RuleName r : all_rules()) EXPECT_EQ(rule_from_string(to_string(r)), r);
  EXPECT_EQ(std::string(to_string(RuleName::switch_)), "switch");
}

TEST(Enumerate, InteractionDownOnWholeStructure) {
  EXPECT_EQ(premises(RuleName::ai_down, S("[a;~a]")), keys({"1"}));
}

TEST(Enumerate, SwitchAssignments) {
  EXPECT_EQ(premises(RuleName::switch_, S("[(a;b);c]")), keys({"([a;c];b)", "([b;c];a)", "(a;b;c)"}));
}

TEST(Enumerate, RenamingDownAlignsBinders) {
  // vacuous binders vanish under ≈, so only binders that bind something align
  EXPECT_TRUE(premises(RuleName::r_down, S("[{a}b;{a}~b]")).empty());
  EXPECT_EQ(premises(RuleName::r_down, S("[{a}<a;b>;{a}<~a;~b>]")), keys({"{a}[<a;b>;<~a;~b>]"}));
  EXPECT_EQ(premises(RuleName::r_down, S("[{a}<a;b>;{c}<~c;~b>]")), keys({"{a}[<a;b>;<~a;~b>]"}));
}

TEST(Enumerate, SwitchWithUnitRedex) {
  // [X;U] reads as [(1;X);U]; X may be any group of par children.
  auto ps = premises(RuleName::switch_, S("[a;b;c]"));
  for (const char* w : {"(a;[b;c])", "(b;[a;c])", "(c;[a;b])", "[(a;b);c]", "[(a;c);b]", "[(b;c);a]"})
    EXPECT_TRUE(std::binary_search(ps.begin(), ps.end(), canonical_key(S(w)))) << w;
  EXPECT_TRUE(step_ok("[{d}1;a;~b]", RuleName::switch_, "(a;~b)"));
}

TEST(Enumerate, SeqMedialReattachesBinders) {
  // ⟨{a}⟨a;b⟩;c⟩ keeps the binder inside the seq.
  auto ps = premises(RuleName::q_down, S("[{a}<a;b>;c]"));
  EXPECT_TRUE(std::binary_search(ps.begin(), ps.end(), canonical_key(S("<{a}<a;b>;c>"))));
  EXPECT_TRUE(std::binary_search(ps.begin(), ps.end(), canonical_key(S("{a}<a;b;c>"))));
}

TEST(Enumerate, SeqMedialOnSubIntervals) {
  auto ps = premises(RuleName::q_down, S("[<a;b>;<c;d>]"));
  EXPECT_EQ(ps, keys({"<[a;c];[b;d]>", "<a;b;c;d>", "<c;d;a;b>", "<a;[b;<c;d>]>", "<c;[d;<a;b>]>",
                      "<[a;<c;d>];b>", "<[c;<a;b>];d>"}));
  // an inner interval of a longer seq
  auto ls = premises(RuleName::q_down, S("[<a;b;e>;<c;d>]"));
  EXPECT_TRUE(std::binary_search(ls.begin(), ls.end(), canonical_key(S("<a;[<b;e>;<c;d>]>"))));
  EXPECT_FALSE(std::binary_search(ls.begin(), ls.end(), canonical_key(S("<a;[b;c];d>"))));
}

TEST(Enumerate, EveryInstanceChecks) {
  std::mt19937_64 rng(31);
  StructureGenOptions o;
  o.max_atoms = 6;
  o.max_binders = 2;
  for (int i = 0; i < 40; ++i) {
    auto c = canonicalize(random_structure(rng, o));
    for (RuleName r : all_rules()) {
      auto inst = enumerate_applications(r, c);
      for (std::size_t k = 0; k < inst.size() && k < 10; ++k) {
        std::string why;
        EXPECT_TRUE(check_step(c, inst[k], &why)) << to_string(r) << " on " << print_structure(c) << ": " << why;
      }
    }
  }
}

TEST(Enumerate, DownStepsAreAffineAndNameMonotone) {
  std::mt19937_64 rng(32);
  StructureGenOptions o;
  o.max_atoms = 7;
  o.max_binders = 2;
  for (int i = 0; i < 40; ++i) {
    auto c = canonicalize(random_structure(rng, o));
    auto fn = free_names(c);
    for (RuleName r : down_fragment())
      for (const auto& inst : enumerate_applications(r, c)) {
        EXPECT_LE(size(inst.premise), size(c));
        for (const auto& n : free_names(inst.premise)) EXPECT_TRUE(fn.count(n)) << print_structure(inst.premise);
      }
  }
}

TEST(Enumerate, InteractionUpUsesAlphabet) {
  auto inst = enumerate_applications(RuleName::ai_up, S("b"), std::vector<AtomName>{"a"});
  std::vector<std::string> got;
  for (const auto& i : inst) got.push_back(canonical_key(i.premise));
  EXPECT_TRUE(std::find(got.begin(), got.end(), canonical_key(S("(b; [a;~a])"))) == got.end());
  EXPECT_TRUE(std::find(got.begin(), got.end(), canonical_key(S("(b; (a;~a))"))) != got.end());
}

TEST(CheckStep, Examples) {
  EXPECT_TRUE(step_ok("[a;~a]", RuleName::ai_down, "1"));
  EXPECT_FALSE(step_ok("[a;~a]", RuleName::ai_down, "a"));
  // renaming down where the redex is the whole par
  EXPECT_TRUE(step_ok("[{a}<r;a>;{a}~a]", RuleName::r_down, "{a}[<r;a>;~a]"));
  EXPECT_FALSE(step_ok("[{a}<r;t>;{a}p]", RuleName::r_down, "{a}[<r;t>;p]"));  // identity modulo ≈
  EXPECT_TRUE(step_ok("[{a}<a;t>;{a}~a]", RuleName::r_down, "{a}[<a;t>;~a]"));
}

TEST(CheckStep, RuleShapes) {
  EXPECT_TRUE(step_ok("[(r;t);u]", RuleName::switch_, "([r;u];t)"));
  EXPECT_TRUE(step_ok("[<r;t>;<u;v>]", RuleName::q_down, "<[r;u];[t;v]>"));
  EXPECT_TRUE(step_ok("<(r;u);(t;v)>", RuleName::q_up, "(<r;t>;<u;v>)"));
  EXPECT_TRUE(step_ok("{a}(a;~a)", RuleName::r_up, "({a}a;{a}~a)"));
  EXPECT_TRUE(step_ok("{a}(<a;r>;<t;~a>)", RuleName::r_up, "({a}<a;r>;{a}<t;~a>)"));
  EXPECT_TRUE(step_ok("b", RuleName::ai_up, "(b;(a;~a))"));
  EXPECT_TRUE(step_ok("<b;c>", RuleName::ai_up, "<(b;~x;x);c>"));
  // wrong rule for the shape
  EXPECT_FALSE(step_ok("[(r;t);u]", RuleName::q_down, "([r;u];t)"));
  EXPECT_TRUE(step_ok("<(r;u);(t;v)>", RuleName::q_up, "(<r;v>;<u;t>)"));  // copar commutes
  EXPECT_FALSE(step_ok("<(r;u);(t;v)>", RuleName::q_up, "(<v;r>;<u;t>)"));
  EXPECT_TRUE(step_ok("b", RuleName::ai_up, "[b;(a;~a)]"));  // b ≈ [b;1]
  EXPECT_FALSE(step_ok("b", RuleName::ai_up, "[b;[a;~a]]"));
  EXPECT_FALSE(step_ok("[a;~a]", RuleName::ai_down, "[a;~a]"));
}

TEST(CheckStep, DeepContext) {
  EXPECT_FALSE(step_ok("<x;{a}[c;([a;~b];d)];y>", RuleName::switch_, "<x;{a}[c;([a;~b];d)];y>"));
  EXPECT_TRUE(step_ok("<x;{a}([(a;b);c];d);y>", RuleName::switch_, "<x;{a}(([a;c];b);d);y>"));
}

TEST(Derivation, ComposeAndPlug) {
  Derivation empty;
  empty.conclusion = S("a");
  auto e2 = compose(empty, empty);
  EXPECT_TRUE(e2.steps.empty());

  Derivation d;
  d.conclusion = S("[a;~a]");
  d.steps.push_back({RuleName::ai_down, S("[a;~a]"), unit(), std::nullopt});
  auto p = plug_in_context(d, parse_context("<#;b>"));
  EXPECT_TRUE(Equiv(p.conclusion, S("<[a;~a];b>")));
  EXPECT_TRUE(Equiv(p.premise(), S("b")));
  EXPECT_TRUE(Checks(p, {RuleName::ai_down}));

  Derivation other;
  other.conclusion = S("c");
  EXPECT_THROW(compose(d, other), CompositionError);
}

TEST(Derivation, CheckerRejectsBrokenChainsAndForeignRules) {
  Derivation d;
  d.conclusion = S("[a;~a]");
  d.steps.push_back({RuleName::ai_down, S("[b;~b]"), unit(), std::nullopt});
  EXPECT_FALSE(check_derivation(d, all_rules()));
  d.steps[0].conclusion = S("[a;~a]");
  EXPECT_TRUE(check_derivation(d, all_rules()));
  EXPECT_FALSE(check_derivation(d, up_fragment()));
}

TEST(Certificate, RoundTrip) {
  auto d = gen_interaction_down(S("<a;{b}(b;c)>"));
  auto text = certificate_text(d);
  auto back = parse_certificate(text);
  EXPECT_EQ(certificate_text(back), text);
  EXPECT_TRUE(Checks(back, down_fragment()));
  EXPECT_THROW(parse_certificate("{"), CertificateError);
  EXPECT_THROW(parse_certificate(R"({"conclusion":"a","steps":[{"rule":"cut","premise":"1"}]})"), CertificateError);
}
