#pragma once

#include <optional>

#include "canonical.hpp"
#include "lambda.hpp"

namespace seqren {

// Fresh channel names ch_p0, ch_p1, ...; names in `avoid` are skipped.
struct ChannelSupply {
  std::size_t counter = 0;
  std::set<AtomName> avoid;

  AtomName next() {
    for (;;) {
      AtomName n("ch_p" + std::to_string(counter++));
      if (!avoid.count(n)) return n;
    }
  }
};

inline AtomName var_name(const std::string& x) { return AtomName(x); }

namespace detail {

// `outputs` holds variable-named outputs in scope; a binder reusing one would
// capture it and is renamed.
inline Structure translate(const Lam& m, const AtomName& o, ChannelSupply& supply, std::set<std::string>& outputs,
                           const std::set<std::string>& names) {
  const Structure out = atom(o, true);
  auto binder = [&](std::string x, Lam body) -> std::pair<std::string, Lam> {
    if (!outputs.count(x)) return {x, body};
    std::set<std::string> used = names;
    used.insert(outputs.begin(), outputs.end());
    std::string y = fresh_var(used, x);
    return {y, rename_free(body, x, y)};
  };
  switch (m->kind) {
    case LamKind::var: return raw(Kind::seq, {atom(var_name(m->name)), out});
    case LamKind::abs: {
      auto [x, b] = binder(m->name, m->kids[0]);
      AtomName p = supply.next();
      Structure body = translate(b, p, supply, outputs, names);
      return ren(var_name(x), ren(p, raw(Kind::par, {body, raw(Kind::copar, {atom(p), out})})));
    }
    case LamKind::app: {
      AtomName p = supply.next();
      AtomName q = supply.next();
      Structure f = translate(m->kids[0], p, supply, outputs, names);
      Structure a = translate(m->kids[1], q, supply, outputs, names);
      return ren(p, raw(Kind::par, {f, ren(q, a), raw(Kind::copar, {atom(p), out})}));
    }
    case LamKind::esub: {
      auto [x, b] = binder(m->name, m->kids[0]);
      Structure body = translate(b, o, supply, outputs, names);
      bool added = outputs.insert(x).second;
      Structure sub = translate(m->kids[1], var_name(x), supply, outputs, names);
      if (added) outputs.erase(x);
      return ren(var_name(x), raw(Kind::par, {body, sub}));
    }
  }
  return unit();
}

}  // namespace detail

inline Structure translate(const Lam& m, const AtomName& o, ChannelSupply& supply) {
  std::set<std::string> outputs, names;
  if (o.ns == Namespace::variable) outputs.insert(o.text);
  lam_names(m, names);
  return detail::translate(m, o, supply, outputs, names);
}

inline Structure translate(const Lam& m, const AtomName& o) {
  ChannelSupply s;
  s.avoid.insert(o);
  return translate(m, o, s);
}

// The unique free name with a negative occurrence.
inline std::optional<AtomName> output_channel(const Structure& r) {
  std::set<AtomName> neg;
  auto go = [&](auto&& self, const Structure& s, std::multiset<AtomName>& bound) -> void {
    if (s->kind == Kind::atom) {
      if (s->negative && !bound.count(s->name)) neg.insert(s->name);
      return;
    }
    if (s->kind == Kind::ren) {
      auto it = bound.insert(s->name);
      self(self, s->kids[0], bound);
      bound.erase(it);
      return;
    }
    for (const auto& k : s->kids) self(self, k, bound);
  };
  std::multiset<AtomName> bound;
  go(go, r, bound);
  if (neg.size() != 1) return std::nullopt;
  return *neg.begin();
}

namespace detail {

// Match the literal translation shape; par children may come in any order.
inline std::optional<Lam> match_literal(const Structure& r, const AtomName& o) {
  auto is_out = [&](const Structure& s) { return s->kind == Kind::atom && s->negative && s->name == o; };
  auto is_link = [&](const Structure& s, const AtomName& p) {
    return s->kind == Kind::copar && s->kids.size() == 2 &&
           ((s->kids[0]->kind == Kind::atom && !s->kids[0]->negative && s->kids[0]->name == p && is_out(s->kids[1])) ||
            (s->kids[1]->kind == Kind::atom && !s->kids[1]->negative && s->kids[1]->name == p && is_out(s->kids[0])));
  };
  if (r->kind == Kind::seq && r->kids.size() == 2 && r->kids[0]->kind == Kind::atom && !r->kids[0]->negative &&
      is_out(r->kids[1]) && r->kids[0]->name.ns == Namespace::variable)
    return lvar(r->kids[0]->name.text);
  if (r->kind != Kind::ren) return std::nullopt;
  const AtomName& b = r->name;
  const Structure& body = r->kids[0];
  // abstraction: {x}{p}[M_p; (p;~o)]
  if (b.ns == Namespace::variable && body->kind == Kind::ren && body->kids[0]->kind == Kind::par &&
      body->kids[0]->kids.size() == 2) {
    const AtomName& p = body->name;
    const auto& k = body->kids[0]->kids;
    for (int i = 0; i < 2; ++i)
      if (is_link(k[1 - i], p))
        if (auto m = match_literal(k[i], p); m && occurrences(*m, b.text) == 1) return labs(b.text, *m);
  }
  if (body->kind != Kind::par) return std::nullopt;
  const auto& k = body->kids;
  // application: {p}[M_p; {q}N_q; (p;~o)]
  if (k.size() == 3) {
    for (int l = 0; l < 3; ++l) {
      if (!is_link(k[l], b)) continue;
      for (int f = 0; f < 3; ++f) {
        int a = 3 - l - f;
        if (f == l || a == l || a < 0 || a > 2 || k[a]->kind != Kind::ren) continue;
        auto m = match_literal(k[f], b);
        auto n = m ? match_literal(k[a]->kids[0], k[a]->name) : std::nullopt;
        if (m && n) return lapp(*m, *n);
      }
    }
  }
  // explicit substitution: {x}[M_o; P_x]
  if (k.size() == 2 && b.ns == Namespace::variable) {
    for (int i = 0; i < 2; ++i) {
      auto m = match_literal(k[i], o);
      auto p = m ? match_literal(k[1 - i], b) : std::nullopt;
      if (m && p) return lesub(*m, b.text, *p);
    }
  }
  return std::nullopt;
}

// Decode a canonical image as a soup of forwarders <x;~o> and links (p;~o).
class SoupReader {
 public:
  SoupReader(const Structure& canon, AtomName o) : o_(std::move(o)) {
    Structure body = canon;
    while (body->kind == Kind::ren) {
      bound_.insert(body->name);
      body = body->kids[0];
    }
    std::vector<Structure> items = body->kind == Kind::par ? body->kids : std::vector<Structure>{body};
    for (const auto& it : items) {
      const auto& k = it->kids;
      bool two_atoms = k.size() == 2 && k[0]->kind == Kind::atom && k[1]->kind == Kind::atom;
      if (!two_atoms || (it->kind != Kind::seq && it->kind != Kind::copar)) {
        ok_ = false;
        return;
      }
      Structure in = k[0], out = k[1];
      if (it->kind == Kind::copar && in->negative) std::swap(in, out);
      if (in->negative || !out->negative || producer_.count(out->name)) {
        ok_ = false;
        return;
      }
      producer_[out->name] = Item{it->kind == Kind::seq, in->name};
      positive_.insert(in->name);
    }
    for (const auto& b : bound_) {
      if (!producer_.count(b) && positive_.count(b)) lambda_vars_.insert(b);
      if (producer_.count(b) && !positive_.count(b)) floating_.insert(b);
    }
  }

  std::vector<Lam> candidates(std::size_t cap = 256) {
    std::vector<Lam> out;
    if (!ok_) return out;
    for (auto& [m, st] : decode(o_, State{}, cap))
      if (st.done.size() == producer_.size() && st.lambdas.size() == lambda_vars_.size() &&
          st.args.size() == floating_.size())
        out.push_back(m);
    return out;
  }

 private:
  struct Item {
    bool forwarder;
    AtomName in;
  };
  struct State {
    std::set<AtomName> done, lambdas, args;
  };

  AtomName o_;
  bool ok_ = true;
  std::set<AtomName> bound_, positive_, lambda_vars_, floating_;
  std::map<AtomName, Item> producer_;

  std::vector<std::pair<Lam, State>> decode(const AtomName& o, State st, std::size_t cap) {
    std::vector<std::pair<Lam, State>> res;
    auto it = producer_.find(o);
    if (it == producer_.end() || st.done.count(o)) return res;
    st.done.insert(o);
    const Item item = it->second;
    if (item.forwarder) {
      if (item.in.ns != Namespace::variable) return res;
      if (bound_.count(item.in) && producer_.count(item.in)) {
        for (auto& [p, s2] : decode(item.in, st, cap)) res.emplace_back(lesub(lvar(item.in.text), item.in.text, p), s2);
      } else {
        res.emplace_back(lvar(item.in.text), st);
      }
      return res;
    }
    if (!bound_.count(item.in)) return res;
    for (auto& [m, s2] : decode(item.in, st, cap)) {
      auto fv = free_vars(m);
      for (const auto& x : lambda_vars_) {
        if (s2.lambdas.count(x) || !fv.count(x.text)) continue;
        State s3 = s2;
        s3.lambdas.insert(x);
        res.emplace_back(labs(x.text, m), s3);
        if (res.size() >= cap) return res;
      }
      for (const auto& q : floating_) {
        if (s2.args.count(q)) continue;
        State s3 = s2;
        s3.args.insert(q);
        for (auto& [n, s4] : decode(q, s3, cap)) {
          res.emplace_back(lapp(m, n), s4);
          if (res.size() >= cap) return res;
        }
      }
    }
    return res;
  }
};

}  // namespace detail

// Some M with translate(M, o) ≈ r, where o is the output channel of r.
inline std::optional<Lam> readback(const Structure& r) {
  auto o = output_channel(r);
  if (!o) return std::nullopt;
  auto valid = [&](const Lam& m) { return is_linear(m) && !free_vars(m).count(o->text) && equiv(translate(m, *o), r); };
  if (auto m = detail::match_literal(r, *o); m && valid(*m)) return m;
  if (auto m = detail::match_literal(tidy(r), *o); m && valid(*m)) return m;
  detail::SoupReader soup(canonicalize(r), *o);
  for (const auto& m : soup.candidates())
    if (valid(m)) return m;
  return std::nullopt;
}

}  // namespace seqren
