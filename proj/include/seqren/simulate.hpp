#pragma once

#include "derived.hpp"
#include "translate.hpp"

namespace seqren {

enum class SimRule : unsigned char { s_intro, s_var, s_abs, s_app_l, s_app_r };

inline const char* to_string(SimRule r) {
  switch (r) {
    case SimRule::s_intro: return "s_intro";
    case SimRule::s_var: return "s_var";
    case SimRule::s_abs: return "s_abs";
    case SimRule::s_app_l: return "s_app_l";
    case SimRule::s_app_r: return "s_app_r";
  }
  return "?";
}

inline SimRule sim_rule_for(RedexRule r) {
  switch (r) {
    case RedexRule::beta_intro: return SimRule::s_intro;
    case RedexRule::sub_var: return SimRule::s_var;
    case RedexRule::sub_abs: return SimRule::s_abs;
    case RedexRule::sub_app_left: return SimRule::s_app_l;
    case RedexRule::sub_app_right: return SimRule::s_app_r;
  }
  return SimRule::s_intro;
}

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const Structure& link_of(const Structure& par_node) { return par_node->kids.back(); }

// Replace the node at `path` without re-flattening, keeping literal image shape.
inline Structure replace_literal(const Structure& s, const Path& path, std::size_t depth, const Structure& r) {
  if (depth == path.size()) return r;
  auto kids = s->kids;
  kids[path[depth]] = replace_literal(s->kids[path[depth]], path, depth + 1, r);
  if (s->kind == Kind::ren) return ren(s->name, kids[0]);
  return raw(s->kind, std::move(kids));
}

inline Structure node_at(const Structure& s, const Path& path) {
  Structure cur = s;
  for (int i : path) cur = cur->kids.at(i);
  return cur;
}

}  // namespace detail

// On a literal image s with output c: conclusion [s; (c;ō)], premise s{o/c}.
inline Derivation o_ren_image(const Structure& s, const AtomName& c, const AtomName& o) {
  Structure conclusion = raw(Kind::par, {s, raw(Kind::copar, {atom(c), atom(o, true)})});
  Builder b(conclusion);
  if (s->kind == Kind::seq) {
    b.then(def_down(s->kids[0], atom(o, true), Atom{c, true}));
  } else if (s->kind == Kind::ren && s->kids[0]->kind == Kind::par && s->kids[0]->kids.size() == 2) {
    // explicit substitution {x}[M_c; P_x]: rename inside M
    const auto& k = s->kids[0]->kids;
    Context ctx{ren(s->name, raw(Kind::par, {hole(), k[1]}))};
    b.then(o_ren_image(k[0], c, o), ctx);
  } else if (s->kind == Kind::ren) {
    // abstraction {x}{p}[M_p; (p;c̄)] or application {p}[M_p; {q}N_q; (p;c̄)]
    std::vector<AtomName> chain;
    Structure body = s;
    while (body->kind == Kind::ren) {
      chain.push_back(body->name);
      body = body->kids[0];
    }
    if (body->kind != Kind::par) throw SimulationError("o_ren: not a translation image");
    const Structure& link = detail::link_of(body);
    if (link->kind != Kind::copar || link->kids.size() != 2) throw SimulationError("o_ren: missing output link");
    Structure p1 = link->kids[0];
    std::vector<Structure> q(body->kids.begin(), body->kids.end() - 1);
    q.push_back(hole());
    Structure shape = raw(Kind::par, q);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) shape = ren(*it, shape);
    Structure pc = atom(c), no = atom(o, true), nc = atom(c, true);
    Builder sub(raw(Kind::par, {link, raw(Kind::copar, {pc, no})}));
    sub.step(RuleName::switch_, copar({par({pc, link}), no}));
    sub.step(RuleName::switch_, copar({par({nc, pc}), p1, no}));
    sub.step(RuleName::ai_down, copar({p1, no}));
    b.then(sub.build(), Context{shape});
  } else {
    throw SimulationError("o_ren: not a translation image");
  }
  b.same(subst_atom(s, c, o));
  return b.build();
}

// Conclusion [⟦m⟧_p; (p;ō)], premise ⟦m⟧_o.
inline Derivation o_ren(const Lam& m, const AtomName& o, const AtomName& p) {
  ChannelSupply supply;
  supply.avoid = {o, p};
  return o_ren_image(translate(m, p, supply), p, o);
}

struct SimResult {
  Derivation derivation;
  Structure image;  // literal image of the reduct
};

// One simulation step on the literal image s (output o) of a redex of the given kind.
inline SimResult sim_step_image(RedexRule rule, const Structure& s, const AtomName& o) {
  auto fail = [] { return SimulationError("sim_step: structure does not match the redex shape"); };
  if (s->kind != Kind::ren) throw fail();
  Builder b(s);
  Structure image;
  switch (rule) {
    case RedexRule::beta_intro: {
      // {p}[{x}{p'}[M_p'; (p';p̄)]; {q}N_q; (p;ō)]
      const AtomName p = s->name;
      const auto& k = s->kids[0]->kids;
      if (s->kids[0]->kind != Kind::par || k.size() != 3) throw fail();
      Structure fun = k[0], arg = k[1], link = k[2];
      AtomName x = fun->name;
      Structure inner = fun->kids[0];
      AtomName p2 = inner->name;
      Structure m = inner->kids[0]->kids[0];
      Structure n = arg->kids[0];
      if (occurs_free(n, x)) {
        std::set<AtomName> used;
        all_names(s, used);
        AtomName y = fresh_name(used, x.text);
        m = subst_atom(m, x, y);
        x = y;
        inner = ren(p2, raw(Kind::par, {m, inner->kids[0]->kids[1]}));
        b.same(ren(p, raw(Kind::par, {ren(x, inner), arg, link})));
      }
      Structure nx = subst_atom(n, arg->name, x);
      b.same(ren(p, raw(Kind::par, {ren(x, inner), ren(x, nx), link})));
      b.step(RuleName::r_down, ren(p, raw(Kind::par, {ren(x, raw(Kind::par, {inner, nx})), link})));
      Context c1{ren(p, raw(Kind::par, {ren(x, raw(Kind::par, {ren(p2, hole()), nx})), link}))};
      b.then(o_ren_image(m, p2, p), c1);
      Structure esub = ren(x, raw(Kind::par, {subst_atom(m, p2, p), nx}));
      b.same(ren(p, raw(Kind::par, {esub, raw(Kind::copar, {atom(p), atom(o, true)})})));
      b.then(o_ren_image(esub, p, o), Context{ren(p, hole())});
      image = subst_atom(esub, p, o);
      break;
    }
    case RedexRule::sub_var: {
      // {x}[<x;ō>; P_x]
      const auto& k = s->kids[0]->kids;
      if (s->kids[0]->kind != Kind::par || k.size() != 2) throw fail();
      const AtomName x = s->name;
      Structure sp = k[1];
      b.then(mixp(atom(x), atom(o, true)), Context{ren(x, raw(Kind::par, {hole(), sp}))});
      b.same(ren(x, raw(Kind::par, {sp, raw(Kind::copar, {atom(x), atom(o, true)})})));
      b.then(o_ren_image(sp, x, o), Context{ren(x, hole())});
      image = subst_atom(sp, x, o);
      break;
    }
    case RedexRule::sub_abs: {
      // {x}[{y}{p}[M_p; (p;ō)]; P_x]  ≈  {y}{p}[{x}[M_p; P_x]; (p;ō)]
      const auto& k = s->kids[0]->kids;
      Structure abs = k[0], sp = k[1];
      AtomName y = abs->name;
      Structure inner = abs->kids[0];
      const AtomName p = inner->name;
      Structure m = inner->kids[0]->kids[0];
      Structure link = inner->kids[0]->kids[1];
      if (occurs_free(sp, y)) {
        std::set<AtomName> used;
        all_names(s, used);
        AtomName z = fresh_name(used, y.text);
        m = subst_atom(m, y, z);
        y = z;
      }
      image = ren(y, ren(p, raw(Kind::par, {ren(s->name, raw(Kind::par, {m, sp})), link})));
      break;
    }
    case RedexRule::sub_app_left:
    case RedexRule::sub_app_right: {
      // {x}[{p}[M_p; {q}N_q; (p;ō)]; P_x]
      const auto& k = s->kids[0]->kids;
      Structure app = k[0], sp = k[1];
      const AtomName p = app->name;
      auto ak = app->kids[0]->kids;
      if (rule == RedexRule::sub_app_left)
        ak[0] = ren(s->name, raw(Kind::par, {ak[0], sp}));
      else
        ak[1] = ren(ak[1]->name, ren(s->name, raw(Kind::par, {ak[1]->kids[0], sp})));
      image = ren(p, raw(Kind::par, ak));
      break;
    }
  }
  b.same(image);
  return {b.build(), image};
}

// Simulation of the redex m at the root: conclusion ⟦m⟧_o, premise ⟦reduct⟧_o.
inline SimResult sim_step(RedexRule rule, const Lam& m, const AtomName& o) {
  ChannelSupply supply;
  supply.avoid.insert(o);
  return sim_step_image(rule, translate(m, o, supply), o);
}

// Structure path of the image of the subterm at a term path.
inline Path image_path(const Lam& m, const std::vector<int>& term_path) {
  Path out;
  Lam cur = m;
  for (int i : term_path) {
    switch (cur->kind) {
      case LamKind::abs: out.insert(out.end(), {0, 0, 0}); break;
      case LamKind::app:
        if (i == 0)
          out.insert(out.end(), {0, 0});
        else
          out.insert(out.end(), {0, 1, 0});
        break;
      case LamKind::esub: out.insert(out.end(), {0, i}); break;
      case LamKind::var: throw SimulationError("term path leaves the term");
    }
    cur = cur->kids.at(i);
  }
  return out;
}

struct TraceSimulation {
  Derivation derivation;
  Structure final_image;
};

// Conclusion ⟦start⟧_o, premise ⟦end⟧_o (up to ≈).
inline TraceSimulation simulate_trace_images(const ReductionTrace& trace, const AtomName& o) {
  ChannelSupply supply;
  supply.avoid.insert(o);
  Structure image = translate(trace.start, o, supply);
  Builder b(image);
  Lam term = trace.start;
  for (const auto& [site, next] : trace.steps) {
    Path sp = image_path(term, site.path);
    Structure sub = detail::node_at(image, sp);
    auto out = output_channel(sub);
    if (!out) throw SimulationError("no output channel at redex image");
    auto res = sim_step_image(site.rule, sub, *out);
    b.then(res.derivation, Context{detail::replace_literal(image, sp, 0, hole())});
    image = detail::replace_literal(image, sp, 0, res.image);
    b.same(image);
    term = next;
  }
  return {b.build(), image};
}

inline Derivation simulate_trace(const ReductionTrace& trace, const AtomName& o) {
  return simulate_trace_images(trace, o).derivation;
}

struct RecognizedStep {
  SimRule rule;
  Structure premise;
  Lam reduct;
};

struct NotAnImage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The simulation rules applicable to an image, with their premises and λ-level reducts.
inline std::vector<RecognizedStep> recognize_step(const Structure& r) {
  auto o = output_channel(r);
  auto m = readback(r);
  if (!o || !m) throw NotAnImage("structure is not the image of a linear term");
  std::vector<RecognizedStep> out;
  for (const auto& site : find_redexes(*m)) {
    Lam n = step(*m, site);
    out.push_back({sim_rule_for(site.rule), translate(n, *o), n});
  }
  return out;
}

}  // namespace seqren
