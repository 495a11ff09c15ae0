#pragma once

// Intuitionistic multiplicative linear logic: formulas, sequent proofs with
// ax/cut/⊗/⊸, their embedding into structures and compilation of proofs into
// derivations whose premise is the copar of one forwarder per axiom leaf.

#include <json.hpp>

#include "derived.hpp"

namespace seqren {

enum class ImllKind : unsigned char { var, tensor, lolli };

struct ImllNode;
using ImllFormula = std::shared_ptr<const ImllNode>;

struct ImllNode {
  ImllKind kind = ImllKind::var;
  std::string name;
  ImllFormula left, right;
};

inline ImllFormula ivar(std::string name) {
  auto n = std::make_shared<ImllNode>();
  n->name = std::move(name);
  return n;
}

inline ImllFormula ibin(ImllKind k, ImllFormula l, ImllFormula r) {
  auto n = std::make_shared<ImllNode>();
  n->kind = k;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

inline ImllFormula tensor(ImllFormula l, ImllFormula r) { return ibin(ImllKind::tensor, std::move(l), std::move(r)); }
inline ImllFormula lolli(ImllFormula l, ImllFormula r) { return ibin(ImllKind::lolli, std::move(l), std::move(r)); }

inline bool formula_equal(const ImllFormula& a, const ImllFormula& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == ImllKind::var) return a->name == b->name;
  return formula_equal(a->left, b->left) && formula_equal(a->right, b->right);
}

inline std::string print_formula(const ImllFormula& f) {
  switch (f->kind) {
    case ImllKind::var: return f->name;
    case ImllKind::tensor: {
      auto side = [](const ImllFormula& g) {
        return g->kind == ImllKind::lolli ? "(" + print_formula(g) + ")" : print_formula(g);
      };
      std::string r = f->right->kind == ImllKind::var ? print_formula(f->right) : "(" + print_formula(f->right) + ")";
      return side(f->left) + " * " + r;
    }
    case ImllKind::lolli: {
      std::string l = f->left->kind == ImllKind::lolli ? "(" + print_formula(f->left) + ")" : print_formula(f->left);
      return l + " -o " + print_formula(f->right);
    }
  }
  return "?";
}

struct ImllParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// F ::= T ("-o" F)?   T ::= A ("*" A)*   A ::= NAME | "(" F ")"
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : s_(s) {}

  ImllFormula parse() {
    auto f = lolli_level();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ImllParseError("formula: " + what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) != tok) return false;
    i_ += tok.size();
    return true;
  }
  ImllFormula lolli_level() {
    auto l = tensor_level();
    if (eat("-o")) return lolli(l, lolli_level());
    return l;
  }
  ImllFormula tensor_level() {
    auto l = atom_level();
    while (eat("*")) l = tensor(l, atom_level());
    return l;
  }
  ImllFormula atom_level() {
    if (eat("(")) {
      auto f = lolli_level();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
      ++i_;
    if (b == i_) fail("expected a name");
    return ivar(std::string(s_.substr(b, i_ - b)));
  }
};

}  // namespace detail

inline ImllFormula parse_formula(std::string_view s) { return detail::FormulaParser(s).parse(); }

struct Sequent {
  std::vector<ImllFormula> context;
  ImllFormula goal;
};

enum class ImllRule : unsigned char { ax, cut, tensor, lolli };

inline const char* to_string(ImllRule r) {
  switch (r) {
    case ImllRule::ax: return "ax";
    case ImllRule::cut: return "cut";
    case ImllRule::tensor: return "tensor";
    case ImllRule::lolli: return "lolli";
  }
  return "?";
}

struct ImllProofNode;
using ImllProof = std::shared_ptr<const ImllProofNode>;

struct ImllProofNode {
  ImllRule rule = ImllRule::ax;
  Sequent sequent;
  std::vector<ImllProof> premises;
  // tensor/cut: positions in `sequent.context` that go to the first premise.
  std::optional<std::vector<std::size_t>> left_context;
  // lolli: position of the discharged hypothesis in the premise's context.
  std::optional<std::size_t> discharged;
};

struct InvalidProof : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool same_multiset(std::vector<ImllFormula> a, std::vector<ImllFormula> b) {
  if (a.size() != b.size()) return false;
  for (const auto& f : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const ImllFormula& g) { return formula_equal(f, g); });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

// Remove one occurrence of f, preferring position `at` when given.
inline std::optional<std::vector<ImllFormula>> remove_one(std::vector<ImllFormula> ctx, const ImllFormula& f,
                                                          std::optional<std::size_t> at) {
  if (at) {
    if (*at >= ctx.size() || !formula_equal(ctx[*at], f)) return std::nullopt;
    ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(*at));
    return ctx;
  }
  auto it = std::find_if(ctx.begin(), ctx.end(), [&](const ImllFormula& g) { return formula_equal(f, g); });
  if (it == ctx.end()) return std::nullopt;
  ctx.erase(it);
  return ctx;
}

// Context split for a two-premise node; without explicit indices only the
// multiset union is checked.
inline bool split_ok(const ImllProofNode& n, const std::vector<ImllFormula>& left,
                     const std::vector<ImllFormula>& right) {
  const auto& ctx = n.sequent.context;
  if (!n.left_context) {
    auto all = left;
    all.insert(all.end(), right.begin(), right.end());
    return same_multiset(ctx, all);
  }
  std::vector<ImllFormula> l, r;
  std::vector<char> used(ctx.size(), 0);
  for (std::size_t i : *n.left_context) {
    if (i >= ctx.size() || used[i]) return false;
    used[i] = 1;
    l.push_back(ctx[i]);
  }
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (!used[i]) r.push_back(ctx[i]);
  return same_multiset(l, left) && same_multiset(r, right);
}

}  // namespace detail

inline void validate_proof(const ImllProof& p) {
  auto bad = [&](const std::string& why) {
    return InvalidProof(std::string(to_string(p->rule)) + " node: " + why);
  };
  const auto& s = p->sequent;
  if (!s.goal) throw bad("missing goal");
  const std::size_t want = p->rule == ImllRule::ax ? 0 : p->rule == ImllRule::lolli ? 1 : 2;
  if (p->premises.size() != want) throw bad("expected " + std::to_string(want) + " premises");
  for (const auto& q : p->premises) validate_proof(q);
  switch (p->rule) {
    case ImllRule::ax:
      if (s.context.size() != 1 || !formula_equal(s.context[0], s.goal)) throw bad("sequent is not A ⊢ A");
      break;
    case ImllRule::tensor: {
      const auto& l = p->premises[0]->sequent;
      const auto& r = p->premises[1]->sequent;
      if (s.goal->kind != ImllKind::tensor || !formula_equal(s.goal->left, l.goal) ||
          !formula_equal(s.goal->right, r.goal))
        throw bad("goal is not the tensor of the premise goals");
      if (!detail::split_ok(*p, l.context, r.context)) throw bad("context is not the union of the premise contexts");
      break;
    }
    case ImllRule::cut: {
      const auto& l = p->premises[0]->sequent;
      const auto& r = p->premises[1]->sequent;
      if (!formula_equal(s.goal, r.goal)) throw bad("goal differs from the second premise");
      auto rest = detail::remove_one(r.context, l.goal, std::nullopt);
      if (!rest) throw bad("cut formula missing from the second premise");
      if (!detail::split_ok(*p, l.context, *rest)) throw bad("context is not the union of the premise contexts");
      break;
    }
    case ImllRule::lolli: {
      const auto& q = p->premises[0]->sequent;
      if (s.goal->kind != ImllKind::lolli || !formula_equal(s.goal->right, q.goal))
        throw bad("goal is not A -o B over the premise goal");
      auto rest = detail::remove_one(q.context, s.goal->left, p->discharged);
      if (!rest) throw bad("discharged hypothesis missing");
      if (!detail::same_multiset(*rest, s.context)) throw bad("context differs from the premise context");
      break;
    }
  }
}

// ---- embedding ------------------------------------------------------------

inline Structure embed_formula(const ImllFormula& f) {
  switch (f->kind) {
    case ImllKind::var: return atom(AtomName(f->name));
    case ImllKind::tensor: return copar({embed_formula(f->left), embed_formula(f->right)});
    case ImllKind::lolli: return par({negate(embed_formula(f->left)), embed_formula(f->right)});
  }
  return unit();
}

namespace detail {
inline Structure negated_context(const std::vector<ImllFormula>& gamma) {
  std::vector<Structure> ks;
  for (const auto& a : gamma) ks.push_back(negate(embed_formula(a)));
  return copar(ks);
}
}  // namespace detail

inline Structure embed_sequent(const std::vector<ImllFormula>& gamma, const ImllFormula& a) {
  return seq({detail::negated_context(gamma), embed_formula(a)});
}

inline Structure embed_sequent(const Sequent& s) { return embed_sequent(s.context, s.goal); }

inline Structure forwarder(const ImllFormula& a) { return seq({negate(embed_formula(a)), embed_formula(a)}); }

// Copar of one forwarder per axiom leaf, left to right.
inline Structure free_axioms(const ImllProof& p) {
  if (p->rule == ImllRule::ax) return forwarder(p->sequent.goal);
  std::vector<Structure> ks;
  for (const auto& q : p->premises) ks.push_back(free_axioms(q));
  return copar(ks);
}

namespace detail {

inline Derivation compile(const ImllProof& p) {
  const auto& s = p->sequent;
  Builder b(embed_sequent(s));
  switch (p->rule) {
    case ImllRule::ax: break;
    case ImllRule::tensor: {
      const auto& l = p->premises[0]->sequent;
      const auto& r = p->premises[1]->sequent;
      Structure lc = embed_sequent(l), rc = embed_sequent(r);
      b.step(RuleName::q_up, copar({lc, rc}));
      b.then(compile(p->premises[0]), Context{raw(Kind::copar, {hole(), rc})});
      b.then(compile(p->premises[1]), Context{raw(Kind::copar, {free_axioms(p->premises[0]), hole()})});
      break;
    }
    case ImllRule::lolli: {
      // ⟨Γ̄;[Ā;B]⟩ ← pmix ← ⟨Γ̄;⟨Ā;B⟩⟩ ≈ ⟨⟨Γ̄;Ā⟩;B⟩ ← mixp ← ⟨(Γ̄;Ā);B⟩
      Structure g = negated_context(s.context);
      Structure na = negate(embed_formula(s.goal->left));
      Structure bb = embed_formula(s.goal->right);
      b.then(pmix(na, bb), Context{raw(Kind::seq, {g, hole()})});
      b.then(mixp(g, na), Context{raw(Kind::seq, {hole(), bb})});
      b.then(compile(p->premises[0]));
      break;
    }
    case ImllRule::cut: {
      // Γ ⊢ A and Δ, A ⊢ C give Γ, Δ ⊢ C.
      const auto& l = p->premises[0]->sequent;
      const auto& r = p->premises[1]->sequent;
      Structure a = embed_formula(l.goal);
      Structure na = negate(a);
      Structure g = negated_context(l.context);
      Structure d = negated_context(*remove_one(r.context, l.goal, std::nullopt));
      Structure c = embed_formula(r.goal);
      Structure lc = embed_sequent(l);
      b.then(gen_interaction_up(a), Context{seq({copar({raw(Kind::seq, {g, hole()}), d}), c})});
      b.step(RuleName::q_up, seq({copar({lc, na, d}), c}));
      b.step(RuleName::q_up, copar({lc, seq({copar({na, d}), c})}));
      b.same(raw(Kind::copar, {lc, embed_sequent(r)}));
      b.then(compile(p->premises[0]), Context{raw(Kind::copar, {hole(), embed_sequent(r)})});
      b.then(compile(p->premises[1]), Context{raw(Kind::copar, {free_axioms(p->premises[0]), hole()})});
      break;
    }
  }
  b.same(free_axioms(p));
  return b.build();
}

}  // namespace detail

// Conclusion embed_sequent(root), premise free_axioms(p).
inline Derivation compile_proof(const ImllProof& p) {
  validate_proof(p);
  return detail::compile(p);
}

// ---- JSON -----------------------------------------------------------------

inline nlohmann::json to_json(const ImllProof& p) {
  nlohmann::json ctx = nlohmann::json::array();
  for (const auto& f : p->sequent.context) ctx.push_back(print_formula(f));
  nlohmann::json j = {{"rule", to_string(p->rule)},
                      {"sequent", {{"context", ctx}, {"goal", print_formula(p->sequent.goal)}}}};
  if (!p->premises.empty()) {
    j["premises"] = nlohmann::json::array();
    for (const auto& q : p->premises) j["premises"].push_back(to_json(q));
  }
  if (p->left_context) j["left_context"] = *p->left_context;
  if (p->discharged) j["discharged"] = *p->discharged;
  return j;
}

inline ImllProof imll_proof_from_json(const nlohmann::json& j) {
  try {
    auto n = std::make_shared<ImllProofNode>();
    const std::string rule = j.at("rule").get<std::string>();
    if (rule == "ax")
      n->rule = ImllRule::ax;
    else if (rule == "cut")
      n->rule = ImllRule::cut;
    else if (rule == "tensor")
      n->rule = ImllRule::tensor;
    else if (rule == "lolli")
      n->rule = ImllRule::lolli;
    else
      throw InvalidProof("unknown rule '" + rule + "'");
    const auto& sq = j.at("sequent");
    for (const auto& f : sq.value("context", nlohmann::json::array()))
      n->sequent.context.push_back(parse_formula(f.get<std::string>()));
    n->sequent.goal = parse_formula(sq.at("goal").get<std::string>());
    if (j.contains("premises"))
      for (const auto& q : j.at("premises")) n->premises.push_back(imll_proof_from_json(q));
    if (j.contains("left_context")) n->left_context = j.at("left_context").get<std::vector<std::size_t>>();
    if (j.contains("discharged")) n->discharged = j.at("discharged").get<std::size_t>();
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidProof(std::string("malformed proof JSON: ") + e.what());
  } catch (const ImllParseError& e) {
    throw InvalidProof(e.what());
  }
}

// Convenience constructors; contexts are computed from the premises.
inline ImllProof imll_ax(const ImllFormula& a) {
  auto n = std::make_shared<ImllProofNode>();
  n->sequent = {{a}, a};
  return n;
}

inline ImllProof imll_tensor(const ImllProof& l, const ImllProof& r) {
  auto n = std::make_shared<ImllProofNode>();
  n->rule = ImllRule::tensor;
  n->sequent.context = l->sequent.context;
  n->sequent.context.insert(n->sequent.context.end(), r->sequent.context.begin(), r->sequent.context.end());
  n->sequent.goal = tensor(l->sequent.goal, r->sequent.goal);
  n->premises = {l, r};
  return n;
}

inline ImllProof imll_lolli(const ImllProof& sub, std::size_t discharged) {
  const auto& ctx = sub->sequent.context;
  if (discharged >= ctx.size()) throw InvalidProof("lolli: no hypothesis at that position");
  auto n = std::make_shared<ImllProofNode>();
  n->rule = ImllRule::lolli;
  n->sequent.context = ctx;
  n->sequent.context.erase(n->sequent.context.begin() + static_cast<std::ptrdiff_t>(discharged));
  n->sequent.goal = lolli(ctx[discharged], sub->sequent.goal);
  n->premises = {sub};
  n->discharged = discharged;
  return n;
}

inline ImllProof imll_cut(const ImllProof& l, const ImllProof& r) {
  auto rest = detail::remove_one(r->sequent.context, l->sequent.goal, std::nullopt);
  if (!rest) throw InvalidProof("cut: formula not among the hypotheses of the second proof");
  auto n = std::make_shared<ImllProofNode>();
  n->rule = ImllRule::cut;
  n->sequent.context = l->sequent.context;
  n->sequent.context.insert(n->sequent.context.end(), rest->begin(), rest->end());
  n->sequent.goal = r->sequent.goal;
  n->premises = {l, r};
  return n;
}

}  // namespace seqren
