#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqren {

enum class LamKind : unsigned char { var, abs, app, esub };

struct LamNode;
using Lam = std::shared_ptr<const LamNode>;

// abs: name = binder, kids = {body}; app: kids = {fun, arg};
// esub: M⟨x:=P⟩ has name = x, kids = {M, P}.
struct LamNode {
  LamKind kind;
  std::string name;
  std::vector<Lam> kids;
};

inline Lam lvar(std::string x) { return std::make_shared<const LamNode>(LamNode{LamKind::var, std::move(x), {}}); }
inline Lam labs(std::string x, Lam body) {
  return std::make_shared<const LamNode>(LamNode{LamKind::abs, std::move(x), {std::move(body)}});
}
inline Lam lapp(Lam f, Lam a) { return std::make_shared<const LamNode>(LamNode{LamKind::app, "", {std::move(f), std::move(a)}}); }
inline Lam lesub(Lam body, std::string x, Lam p) {
  return std::make_shared<const LamNode>(LamNode{LamKind::esub, std::move(x), {std::move(body), std::move(p)}});
}

inline bool lam_equal(const Lam& a, const Lam& b) {
  if (a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!lam_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace detail {
inline bool alpha_equal(const Lam& a, const Lam& b, std::map<std::string, int>& ea, std::map<std::string, int>& eb,
                        int depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case LamKind::var: {
      auto ia = ea.find(a->name), ib = eb.find(b->name);
      if (ia == ea.end() || ib == eb.end()) return ia == ea.end() && ib == eb.end() && a->name == b->name;
      return ia->second == ib->second;
    }
    case LamKind::app:
      return alpha_equal(a->kids[0], b->kids[0], ea, eb, depth) && alpha_equal(a->kids[1], b->kids[1], ea, eb, depth);
    case LamKind::abs:
    case LamKind::esub: {
      if (a->kind == LamKind::esub && !alpha_equal(a->kids[1], b->kids[1], ea, eb, depth)) return false;
      auto sa = ea, sb = eb;
      ea[a->name] = depth;
      eb[b->name] = depth;
      bool ok = alpha_equal(a->kids[0], b->kids[0], ea, eb, depth + 1);
      ea = std::move(sa);
      eb = std::move(sb);
      return ok;
    }
  }
  return false;
}
}  // namespace detail

inline bool alpha_equal(const Lam& a, const Lam& b) {
  std::map<std::string, int> ea, eb;
  return detail::alpha_equal(a, b, ea, eb, 0);
}

inline std::size_t lam_size(const Lam& m) {
  std::size_t n = 1;
  for (const auto& k : m->kids) n += lam_size(k);
  return n;
}

// Free occurrences, with multiplicity.
inline void free_occurrences(const Lam& m, std::map<std::string, int>& out) {
  switch (m->kind) {
    case LamKind::var: ++out[m->name]; return;
    case LamKind::abs: {
      std::map<std::string, int> in;
      free_occurrences(m->kids[0], in);
      in.erase(m->name);
      for (auto& [k, v] : in) out[k] += v;
      return;
    }
    case LamKind::app:
      free_occurrences(m->kids[0], out);
      free_occurrences(m->kids[1], out);
      return;
    case LamKind::esub: {
      std::map<std::string, int> in;
      free_occurrences(m->kids[0], in);
      in.erase(m->name);
      for (auto& [k, v] : in) out[k] += v;
      free_occurrences(m->kids[1], out);
      return;
    }
  }
}

inline std::set<std::string> free_vars(const Lam& m) {
  std::map<std::string, int> occ;
  free_occurrences(m, occ);
  std::set<std::string> s;
  for (auto& [k, v] : occ) s.insert(k);
  return s;
}

inline int occurrences(const Lam& m, const std::string& x) {
  std::map<std::string, int> occ;
  free_occurrences(m, occ);
  auto it = occ.find(x);
  return it == occ.end() ? 0 : it->second;
}

inline void lam_names(const Lam& m, std::set<std::string>& out) {
  if (!m->name.empty()) out.insert(m->name);
  for (const auto& k : m->kids) lam_names(k, out);
}

struct LinearityReport {
  bool ok = true;
  std::string message;
};

inline LinearityReport check_linear(const Lam& m) {
  auto bad = [](std::string msg) { return LinearityReport{false, std::move(msg)}; };
  for (const auto& k : m->kids) {
    auto r = check_linear(k);
    if (!r.ok) return r;
  }
  switch (m->kind) {
    case LamKind::var: break;
    case LamKind::abs: {
      int n = occurrences(m->kids[0], m->name);
      if (n != 1) return bad("binder " + m->name + " used " + std::to_string(n) + " times");
      break;
    }
    case LamKind::app: {
      auto a = free_vars(m->kids[0]), b = free_vars(m->kids[1]);
      for (const auto& x : a)
        if (b.count(x)) return bad("variable " + x + " shared between function and argument");
      break;
    }
    case LamKind::esub: {
      int n = occurrences(m->kids[0], m->name);
      if (n != 1) return bad("substituted variable " + m->name + " used " + std::to_string(n) + " times");
      auto a = free_vars(m->kids[0]), b = free_vars(m->kids[1]);
      a.erase(m->name);
      for (const auto& x : a)
        if (b.count(x)) return bad("variable " + x + " shared between body and substituted term");
      if (b.count(m->name)) return bad("substituted variable " + m->name + " free in substituted term");
      break;
    }
  }
  // Every free variable of a linear term occurs exactly once.
  std::map<std::string, int> occ;
  free_occurrences(m, occ);
  for (auto& [k, v] : occ)
    if (v != 1) return bad("free variable " + k + " used " + std::to_string(v) + " times");
  return {};
}

inline bool is_linear(const Lam& m) { return check_linear(m).ok; }

inline std::string fresh_var(const std::set<std::string>& used, const std::string& base) {
  for (std::size_t i = 0;; ++i) {
    std::string c = base + "_" + std::to_string(i);
    if (!used.count(c)) return c;
  }
}

// Rename free occurrences of x to y; y must not be bound on the way.
inline Lam rename_free(const Lam& m, const std::string& x, const std::string& y) {
  switch (m->kind) {
    case LamKind::var: return m->name == x ? lvar(y) : m;
    case LamKind::abs: return m->name == x ? m : labs(m->name, rename_free(m->kids[0], x, y));
    case LamKind::app: return lapp(rename_free(m->kids[0], x, y), rename_free(m->kids[1], x, y));
    case LamKind::esub:
      return lesub(m->name == x ? m->kids[0] : rename_free(m->kids[0], x, y), m->name,
                   rename_free(m->kids[1], x, y));
  }
  return m;
}

// ---- redexes ------------------------------------------------------------

enum class RedexRule : unsigned char { beta_intro, sub_var, sub_abs, sub_app_left, sub_app_right };

inline const char* to_string(RedexRule r) {
  switch (r) {
    case RedexRule::beta_intro: return "beta_intro";
    case RedexRule::sub_var: return "sub_var";
    case RedexRule::sub_abs: return "sub_abs";
    case RedexRule::sub_app_left: return "sub_app_left";
    case RedexRule::sub_app_right: return "sub_app_right";
  }
  return "?";
}

inline std::optional<RedexRule> redex_rule_from_string(std::string_view s) {
  for (auto r : {RedexRule::beta_intro, RedexRule::sub_var, RedexRule::sub_abs, RedexRule::sub_app_left,
                 RedexRule::sub_app_right})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

struct RedexSite {
  std::vector<int> path;
  RedexRule rule;
  bool operator==(const RedexSite&) const = default;
};

inline std::optional<RedexRule> redex_at(const Lam& m) {
  if (m->kind == LamKind::app && m->kids[0]->kind == LamKind::abs) return RedexRule::beta_intro;
  if (m->kind != LamKind::esub) return std::nullopt;
  const Lam& b = m->kids[0];
  switch (b->kind) {
    case LamKind::var: return b->name == m->name ? std::optional(RedexRule::sub_var) : std::nullopt;
    case LamKind::abs: return RedexRule::sub_abs;
    case LamKind::app:
      if (occurrences(b->kids[0], m->name) > 0) return RedexRule::sub_app_left;
      if (occurrences(b->kids[1], m->name) > 0) return RedexRule::sub_app_right;
      return std::nullopt;
    case LamKind::esub: return std::nullopt;
  }
  return std::nullopt;
}

// All redex sites in preorder.
inline std::vector<RedexSite> find_redexes(const Lam& m) {
  std::vector<RedexSite> out;
  std::vector<int> path;
  auto go = [&](auto&& self, const Lam& n) -> void {
    if (auto r = redex_at(n)) out.push_back({path, *r});
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      path.push_back(static_cast<int>(i));
      self(self, n->kids[i]);
      path.pop_back();
    }
  };
  go(go, m);
  return out;
}

struct InvalidRedex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Lam subterm(const Lam& m, const std::vector<int>& path) {
  Lam cur = m;
  for (int i : path) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->kids.size()) throw InvalidRedex("path leaves the term");
    cur = cur->kids[i];
  }
  return cur;
}

inline Lam replace_at(const Lam& m, const std::vector<int>& path, std::size_t depth, const Lam& r) {
  if (depth == path.size()) return r;
  auto node = *m;
  node.kids[path[depth]] = replace_at(m->kids[path[depth]], path, depth + 1, r);
  return std::make_shared<const LamNode>(std::move(node));
}

// Contract the redex itself. `avoid` holds names that fresh binders must dodge.
inline Lam contract(const Lam& n, RedexRule rule, const std::set<std::string>& avoid) {
  auto actual = redex_at(n);
  if (!actual || *actual != rule) throw InvalidRedex(std::string("no ") + to_string(rule) + " redex here");
  switch (rule) {
    case RedexRule::beta_intro: {
      std::string x = n->kids[0]->name;
      Lam body = n->kids[0]->kids[0];
      const Lam& arg = n->kids[1];
      if (occurrences(arg, x) > 0) {
        std::string y = fresh_var(avoid, x);
        body = rename_free(body, x, y);
        x = y;
      }
      return lesub(body, x, arg);
    }
    case RedexRule::sub_var: return n->kids[1];
    case RedexRule::sub_abs: {
      const Lam& a = n->kids[0];
      const Lam& p = n->kids[1];
      std::string y = a->name;
      Lam body = a->kids[0];
      if (occurrences(p, y) > 0 || y == n->name) {
        std::string z = fresh_var(avoid, y);
        body = rename_free(body, y, z);
        y = z;
      }
      return labs(y, lesub(body, n->name, p));
    }
    case RedexRule::sub_app_left: {
      const Lam& a = n->kids[0];
      return lapp(lesub(a->kids[0], n->name, n->kids[1]), a->kids[1]);
    }
    case RedexRule::sub_app_right: {
      const Lam& a = n->kids[0];
      return lapp(a->kids[0], lesub(a->kids[1], n->name, n->kids[1]));
    }
  }
  return n;
}

inline Lam step(const Lam& m, const RedexSite& site) {
  Lam n = subterm(m, site.path);
  std::set<std::string> avoid;
  lam_names(m, avoid);
  return replace_at(m, site.path, 0, contract(n, site.rule, avoid));
}

// ---- strategies ---------------------------------------------------------

struct Strategy {
  enum class Kind { leftmost_outermost, rightmost_innermost, scripted } kind = Kind::leftmost_outermost;
  std::vector<RedexSite> script;

  static Strategy leftmost_outermost() { return {Kind::leftmost_outermost, {}}; }
  static Strategy rightmost_innermost() { return {Kind::rightmost_innermost, {}}; }
  static Strategy scripted(std::vector<RedexSite> s) { return {Kind::scripted, std::move(s)}; }
};

struct ReductionTrace {
  Lam start;
  std::vector<std::pair<RedexSite, Lam>> steps;
  bool limit_hit = false;

  const Lam& result() const { return steps.empty() ? start : steps.back().second; }
};

inline std::size_t default_max_steps(const Lam& m) {
  auto n = lam_size(m);
  return 4 * n * n;
}

inline ReductionTrace reduce(const Lam& m, const Strategy& strategy, std::optional<std::size_t> max_steps = {}) {
  if (auto r = check_linear(m); !r.ok) throw std::invalid_argument("term is not linear: " + r.message);
  const std::size_t limit = max_steps ? *max_steps : default_max_steps(m);
  ReductionTrace t{m, {}, false};
  Lam cur = m;
  if (strategy.kind == Strategy::Kind::scripted) {
    for (const auto& s : strategy.script) {
      auto sites = find_redexes(cur);
      if (std::find(sites.begin(), sites.end(), s) == sites.end())
        throw InvalidRedex(std::string("scripted step ") + to_string(s.rule) + " does not apply");
      cur = step(cur, s);
      t.steps.emplace_back(s, cur);
    }
    return t;
  }
  for (;;) {
    auto sites = find_redexes(cur);
    if (sites.empty()) return t;
    if (t.steps.size() >= limit) {
      t.limit_hit = true;
      return t;
    }
    RedexSite s = sites.front();
    if (strategy.kind == Strategy::Kind::rightmost_innermost)
      s = *std::max_element(sites.begin(), sites.end(),
                            [](const RedexSite& a, const RedexSite& b) { return a.path < b.path; });
    cur = step(cur, s);
    t.steps.emplace_back(s, cur);
  }
}

// ---- text ---------------------------------------------------------------

struct LamParseError : std::runtime_error {
  std::size_t offset;
  LamParseError(const std::string& w, std::size_t off)
      : std::runtime_error(w + " at offset " + std::to_string(off)), offset(off) {}
};

namespace detail {

class LamParser {
 public:
  explicit LamParser(std::string_view t) : t_(t) {}

  Lam parse_all() {
    Lam m = term();
    skip();
    if (p_ < t_.size()) fail("unexpected trailing input");
    return m;
  }

 private:
  std::string_view t_;
  std::size_t p_ = 0;

  [[noreturn]] void fail(const std::string& w) const { throw LamParseError(w, p_); }

  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool lambda_ahead() {
    skip();
    if (p_ < t_.size() && t_[p_] == '\\') return true;
    return t_.substr(p_, 2) == "\xCE\xBB";  // λ
  }
  bool name_ahead() {
    skip();
    return p_ < t_.size() && (std::isalpha(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_');
  }
  std::string name() {
    if (!name_ahead()) fail("expected variable name");
    std::size_t b = p_;
    while (p_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_' || t_[p_] == '\''))
      ++p_;
    std::string n(t_.substr(b, p_ - b));
    if (n.rfind("ch_", 0) == 0) fail("names starting with ch_ are reserved for channels");
    return n;
  }
  void expect(char c) {
    skip();
    if (p_ >= t_.size() || t_[p_] != c) fail(std::string("expected '") + c + "'");
    ++p_;
  }

  Lam abstraction() {
    p_ += t_[p_] == '\\' ? 1 : 2;
    std::string x = name();
    expect('.');
    return labs(x, term());
  }

  Lam term() {
    Lam acc;
    for (;;) {
      skip();
      Lam next;
      if (lambda_ahead()) {
        next = abstraction();
      } else if (p_ < t_.size() && (t_[p_] == '(' || name_ahead())) {
        next = postfix();
      } else {
        break;
      }
      acc = acc ? lapp(acc, next) : next;
    }
    if (!acc) fail("expected term");
    return acc;
  }

  Lam postfix() {
    Lam m;
    skip();
    if (t_[p_] == '(') {
      ++p_;
      m = term();
      expect(')');
    } else {
      m = lvar(name());
    }
    for (;;) {
      skip();
      if (p_ >= t_.size() || t_[p_] != '[') return m;
      ++p_;
      std::string x = name();
      skip();
      if (t_.substr(p_, 2) != ":=") fail("expected ':='");
      p_ += 2;
      Lam p = term();
      expect(']');
      m = lesub(m, x, p);
    }
  }
};

inline void print_lam(const Lam& m, std::string& out) {
  auto wrapped = [&](const Lam& k, bool paren) {
    if (paren) out += '(';
    print_lam(k, out);
    if (paren) out += ')';
  };
  switch (m->kind) {
    case LamKind::var: out += m->name; return;
    case LamKind::abs:
      out += '\\' + m->name + ". ";
      print_lam(m->kids[0], out);
      return;
    case LamKind::app:
      wrapped(m->kids[0], m->kids[0]->kind == LamKind::abs);
      out += ' ';
      wrapped(m->kids[1], m->kids[1]->kind == LamKind::abs || m->kids[1]->kind == LamKind::app);
      return;
    case LamKind::esub:
      wrapped(m->kids[0], m->kids[0]->kind == LamKind::abs || m->kids[0]->kind == LamKind::app);
      out += '[' + m->name + " := ";
      print_lam(m->kids[1], out);
      out += ']';
      return;
  }
}

}  // namespace detail

inline Lam parse_lam(std::string_view text) { return detail::LamParser(text).parse_all(); }

inline std::string print_lam(const Lam& m) {
  std::string s;
  detail::print_lam(m, s);
  return s;
}

}  // namespace seqren
