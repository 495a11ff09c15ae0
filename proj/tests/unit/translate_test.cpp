#include "support.hpp"

#include "../corpus.hpp"

using namespace seqren;
using namespace seqren::testing;

namespace {
const AtomName o("ch_o");

std::map<AtomName, int> channel_occurrences(const Structure& s) {
  std::map<AtomName, int> out;
  auto go = [&](auto&& self, const Structure& n) -> void {
    if (n->kind == Kind::atom && n->name.ns == Namespace::channel) ++out[n->name];
    for (const auto& k : n->kids) self(self, k);
  };
  go(go, s);
  return out;
}
}  // namespace

TEST(Translate, Clauses) {
  EXPECT_EQ(print_structure(translate(L("x"), o)), "<x; ~ch_o>");
  auto id = translate(L("\\x.x"), o);
  EXPECT_TRUE(Equiv(id, S("{x}{ch_p}[<x;~ch_p>;(ch_p;~ch_o)]")));
  EXPECT_EQ(free_names(id), (std::set<AtomName>{o}));
  auto sub = translate(L("x[x:=y]"), o);
  EXPECT_TRUE(Equiv(sub, S("{x}[<x;~ch_o>;<y;~x>]")));
  auto app = translate(L("f a"), o);
  EXPECT_TRUE(Equiv(app, S("{ch_p}[<f;~ch_p>;{ch_q}<a;~ch_q>;(ch_p;~ch_o)]")));
}

TEST(Translate, SupplyIsDeterministic) {
  ChannelSupply s1, s2;
  auto m = L("(\\x.x) (\\y.y)");
  EXPECT_EQ(print_structure(translate(m, o, s1)), print_structure(translate(m, o, s2)));
  EXPECT_EQ(s1.counter, s2.counter);
  EXPECT_EQ(s1.next(), s2.next());
}

TEST(Readback, Examples) {
  auto v = readback(S("<x;~ch_o>"));
  ASSERT_TRUE(v);
  EXPECT_TRUE(alpha_equal(*v, L("x")));
  auto canon = canonicalize(translate(L("(\\x.x) y"), o));
  auto r = readback(canon);
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(*r, L("(\\x.x) y"))) << print_lam(*r);
  EXPECT_FALSE(readback(S("[a;b]")));
}

TEST(Readback, CanonicalImagesReadBackToPreimages) {
  for (const auto& t : corpus::terms()) {
    auto img = canonicalize(translate(L(t), o));
    auto r = readback(img);
    ASSERT_TRUE(r) << t;
    EXPECT_TRUE(Equiv(translate(*r, o), img)) << t << " read back as " << print_lam(*r);
  }
}

TEST(OutputChannel, Examples) {
  EXPECT_EQ(output_channel(S("<x;~ch_o>")), o);
  EXPECT_EQ(output_channel(translate(L("\\x.x"), o)), o);
  EXPECT_FALSE(output_channel(unit()));
}

TEST(Translate, RandomTermProperties) {
  std::mt19937_64 rng(61);
  TermGenOptions opt;
  opt.max_size = 18;
  for (int i = 0; i < 100; ++i) {
    Lam m = random_linear_term(rng, opt);
    auto img = translate(m, o);
    EXPECT_EQ(output_channel(img), o) << print_lam(m);
    auto fn = free_names(img);
    std::set<AtomName> want{o};
    for (const auto& x : free_vars(m)) want.insert(AtomName(x));
    EXPECT_EQ(fn, want) << print_lam(m);
    for (const auto& [name, n] : channel_occurrences(img)) EXPECT_LE(n, name == o ? 1 : 2) << name.text;
    EXPECT_EQ(channel_occurrences(img)[o], 1);
    auto r = readback(img);
    ASSERT_TRUE(r) << print_lam(m);
    EXPECT_TRUE(alpha_equal(*r, m)) << print_lam(m) << " vs " << print_lam(*r);
  }
}

TEST(Translate, OutputNamedLikeAVariableIsNotCaptured) {
  auto m = L("(\\x.x) y");
  auto img = translate(m, AtomName("x"));
  EXPECT_EQ(free_names(img), (std::set<AtomName>{"x", "y"}));
}
