#pragma once

#include <algorithm>
#include <stdexcept>

#include "rules.hpp"

namespace seqren {

// Grows a derivation upward from its conclusion. Steps whose premise is
// equivalent to the current structure are dropped, not emitted.
class Builder {
 public:
  explicit Builder(Structure conclusion) : cur_(conclusion) { d_.conclusion = std::move(conclusion); }

  const Structure& current() const { return cur_; }

  Builder& step(RuleName r, Structure premise) {
    if (!equiv(cur_, premise)) d_.steps.push_back({r, cur_, premise, std::nullopt});
    cur_ = std::move(premise);
    return *this;
  }

  // Switch to another literal form of the current structure.
  Builder& same(Structure s) {
    if (!equiv(cur_, s))
      throw std::logic_error("not equivalent: " + print_structure(cur_) + " vs " + print_structure(s));
    if (!d_.steps.empty()) d_.steps.back().premise = s;
    cur_ = std::move(s);
    return *this;
  }

  Builder& then(const Derivation& sub, const Context& ctx = {}) {
    auto p = plug_in_context(sub, ctx);
    same(p.conclusion);
    for (auto& s : p.steps) d_.steps.push_back(std::move(s));
    if (!sub.steps.empty()) cur_ = d_.steps.back().premise;
    return *this;
  }

  Derivation build() const { return d_; }

 private:
  Derivation d_;
  Structure cur_;
};

namespace detail {

inline std::vector<Structure> ordered_kids(const Structure& r) {
  auto kids = r->kids;
  if (r->kind != Kind::seq)
    std::stable_sort(kids.begin(), kids.end(),
                     [](const Structure& a, const Structure& b) { return canonical_key(a) < canonical_key(b); });
  return kids;
}

// Split an n-ary node into its last child and the rest (right-to-left fold).
inline std::pair<Structure, Structure> split_last(const Structure& r) {
  auto kids = ordered_kids(r);
  Structure last = kids.back();
  kids.pop_back();
  return {connective(r->kind, kids), last};
}

inline Context ctx(Structure shape) { return Context{std::move(shape)}; }

}  // namespace detail

// Premise 1, conclusion [r; ¬r]; rules {ai_down, switch, q_down, r_down}.
inline Derivation gen_interaction_down(const Structure& r0) {
  Structure r = tidy(r0);
  Builder b(par({r, negate(r)}));
  switch (r->kind) {
    case Kind::unit: b.same(unit()); break;
    case Kind::atom: b.step(RuleName::ai_down, unit()); break;
    case Kind::ren: {
      const AtomName& a = r->name;
      Structure t = r->kids[0];
      b.step(RuleName::r_down, ren(a, par({t, negate(t)})));
      b.then(gen_interaction_down(t), detail::ctx(ren(a, hole())));
      b.same(unit());
      break;
    }
    case Kind::seq: {
      auto kids = r->kids;
      Structure r1 = kids.front();
      Structure rest = seq({kids.begin() + 1, kids.end()});
      b.same(par({seq({r1, rest}), seq({negate(r1), negate(rest)})}));
      b.step(RuleName::q_down, seq({par({r1, negate(r1)}), par({rest, negate(rest)})}));
      b.then(gen_interaction_down(r1), detail::ctx(raw(Kind::seq, {hole(), par({rest, negate(rest)})})));
      b.then(gen_interaction_down(rest));
      break;
    }
    default: {
      // par and copar: [x;y] against (¬x;¬y), or the dual.
      auto [rest, r1] = detail::split_last(r);
      Structure x = r->kind == Kind::par ? r1 : negate(r1);
      Structure y = r->kind == Kind::par ? rest : negate(rest);
      b.same(par({x, y, copar({negate(x), negate(y)})}));
      b.step(RuleName::switch_, par({x, copar({par({y, negate(y)}), negate(x)})}));
      b.step(RuleName::switch_, copar({par({x, negate(x)}), par({y, negate(y)})}));
      b.then(gen_interaction_down(x), detail::ctx(raw(Kind::copar, {hole(), par({y, negate(y)})})));
      b.then(gen_interaction_down(y));
      break;
    }
  }
  return b.build();
}

// Conclusion 1, premise (r; ¬r); rules {ai_up, switch, q_up, r_up}.
inline Derivation gen_interaction_up(const Structure& r0) {
  Structure r = tidy(r0);
  Builder b(unit());
  switch (r->kind) {
    case Kind::unit: break;
    case Kind::atom: b.step(RuleName::ai_up, copar({r, negate(r)})); break;
    case Kind::ren: {
      const AtomName& a = r->name;
      Structure t = r->kids[0];
      b.same(ren(a, unit()));
      b.then(gen_interaction_up(t), detail::ctx(ren(a, hole())));
      b.step(RuleName::r_up, copar({ren(a, t), ren(a, negate(t))}));
      break;
    }
    case Kind::seq: {
      auto kids = r->kids;
      Structure r1 = kids.front();
      Structure rest = seq({kids.begin() + 1, kids.end()});
      b.then(gen_interaction_up(r1), detail::ctx(raw(Kind::seq, {hole(), unit()})));
      b.then(gen_interaction_up(rest), detail::ctx(raw(Kind::seq, {copar({r1, negate(r1)}), hole()})));
      b.step(RuleName::q_up, copar({seq({r1, rest}), seq({negate(r1), negate(rest)})}));
      break;
    }
    default: {
      // Build ([x;y]; ¬x; ¬y); for a copar r, x and y are the negated parts.
      auto [rest, r1] = detail::split_last(r);
      Structure x = r->kind == Kind::par ? r1 : negate(r1);
      Structure y = r->kind == Kind::par ? rest : negate(rest);
      Structure px = copar({x, negate(x)});
      b.then(gen_interaction_up(x), detail::ctx(raw(Kind::par, {hole(), unit()})));
      b.then(gen_interaction_up(y), detail::ctx(raw(Kind::par, {px, hole()})));
      b.step(RuleName::switch_, copar({par({y, px}), negate(y)}));
      b.step(RuleName::switch_, copar({par({x, y}), negate(x), negate(y)}));
      break;
    }
  }
  return b.build();
}

// Conclusion [⟨r;a⟩; (ā;t)], premise ⟨r;t⟩; rules {ai_down, switch, q_down}.
inline Derivation def_down(const Structure& r, const Structure& t, const Atom& a) {
  if (occurs_free(r, a.name) || occurs_free(t, a.name))
    throw std::invalid_argument("def_down: placeholder " + a.name.text + " occurs in r or t");
  Structure pa = atom(a), na = atom(a.flipped());
  Builder b(par({seq({r, pa}), copar({na, t})}));
  b.step(RuleName::q_down, seq({r, par({pa, copar({na, t})})}));
  b.step(RuleName::switch_, seq({r, copar({par({pa, na}), t})}));
  b.step(RuleName::ai_down, seq({r, t}));
  return b.build();
}

inline Derivation def_down(const Structure& r, const Structure& t, const AtomName& a) {
  return def_down(r, t, Atom{a, false});
}

// Conclusion ⟨r;t⟩, premise (⟨r;a⟩; [ā;t]); rules {ai_up, switch, q_up}.
inline Derivation def_up(const Structure& r, const Structure& t, const Atom& a) {
  if (occurs_free(r, a.name) || occurs_free(t, a.name))
    throw std::invalid_argument("def_up: placeholder " + a.name.text + " occurs in r or t");
  Structure pa = atom(a), na = atom(a.flipped());
  Builder b(seq({r, t}));
  b.step(RuleName::ai_up, seq({r, par({copar({pa, na}), t})}));
  b.step(RuleName::switch_, seq({r, copar({par({na, t}), pa})}));
  b.step(RuleName::q_up, copar({seq({r, pa}), par({na, t})}));
  return b.build();
}

inline Derivation def_up(const Structure& r, const Structure& t, const AtomName& a) {
  return def_up(r, t, Atom{a, false});
}

// Conclusion ⟨r;t⟩, premise (r;t); rules {q_up}.
inline Derivation mixp(const Structure& r, const Structure& t) {
  Builder b(seq({r, t}));
  b.step(RuleName::q_up, copar({r, t}));
  return b.build();
}

// Conclusion [r;t], premise ⟨r;t⟩; rules {q_down}.
inline Derivation pmix(const Structure& r, const Structure& t) {
  Builder b(par({r, t}));
  b.step(RuleName::q_down, seq({r, t}));
  return b.build();
}

// Conclusion [S{R}; T], premise S{[R;T]}; rules {q_down, switch, r_down}.
// Binders of S that would capture names of T are renamed first.
inline Derivation context_extrusion(const Context& s, const Structure& r, const Structure& t) {
  const Structure& sh = s.shape;
  Builder b(par({plug(sh, r), t}));
  if (is_hole(sh)) return b.build();
  if (sh->kind == Kind::ren) {
    AtomName a = sh->name;
    Structure inner = sh->kids[0];
    Structure rr = r;
    if (occurs_free(t, a)) {
      std::set<AtomName> used;
      all_names(sh, used);
      all_names(r, used);
      all_names(t, used);
      AtomName fresh = fresh_name(used, a.text);
      inner = subst_atom(inner, a, fresh);
      rr = subst_atom(r, a, fresh);
      a = fresh;
      b.same(par({ren(a, plug(inner, rr)), t}));
    }
    b.same(ren(a, par({plug(inner, rr), t})));
    b.then(context_extrusion({inner}, rr, t), detail::ctx(ren(a, hole())));
    return b.build();
  }
  std::size_t at = 0;
  while (!occurs_free(sh->kids[at], hole_name())) ++at;
  Structure sub = sh->kids[at];
  Structure subR = plug(sub, r);
  std::vector<Structure> others;
  for (std::size_t i = 0; i < sh->kids.size(); ++i)
    if (i != at) others.push_back(sh->kids[i]);
  Context next;
  switch (sh->kind) {
    case Kind::par: {
      auto v = others;
      v.push_back(hole());
      next = detail::ctx(raw(Kind::par, v));
      break;
    }
    case Kind::copar: {
      Structure u = copar(others);
      b.same(par({copar({subR, u}), t}));
      b.step(RuleName::switch_, copar({par({subR, t}), u}));
      next = detail::ctx(raw(Kind::copar, {hole(), u}));
      break;
    }
    case Kind::seq: {
      Structure A = seq({sh->kids.begin(), sh->kids.begin() + at});
      Structure B = seq({sh->kids.begin() + at + 1, sh->kids.end()});
      b.same(par({seq({A, seq({subR, B})}), t}));
      b.step(RuleName::q_down, seq({A, par({seq({subR, B}), t})}));
      b.step(RuleName::q_down, seq({A, par({subR, t}), B}));
      next = detail::ctx(raw(Kind::seq, {A, hole(), B}));
      break;
    }
    default: throw std::logic_error("context_extrusion: malformed context");
  }
  b.then(context_extrusion({sub}, r, t), next);
  return b.build();
}

}  // namespace seqren
