#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqren {

enum class Namespace { variable, channel };

// Names starting with "ch_" live in the channel namespace; everything else is a variable.
struct AtomName {
  std::string text;
  Namespace ns = Namespace::variable;

  AtomName() = default;
  AtomName(std::string t)
      : text(std::move(t)),
        ns(text.rfind("ch_", 0) == 0 ? Namespace::channel : Namespace::variable) {}
  AtomName(const char* t) : AtomName(std::string(t)) {}

  bool operator==(const AtomName& o) const { return text == o.text && ns == o.ns; }
  auto operator<=>(const AtomName& o) const {
    if (auto c = text <=> o.text; c != 0) return c;
    return ns <=> o.ns;
  }
};

struct Atom {
  AtomName name;
  bool negative = false;
  Atom flipped() const { return {name, !negative}; }
  bool operator==(const Atom&) const = default;
};

enum class Kind : unsigned char { unit, atom, par, copar, seq, ren };

struct Node;
using Structure = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::unit;
  AtomName name;       // atom name, or the bound name of a renaming
  bool negative = false;
  std::vector<Structure> kids;
};

// ---- construction -------------------------------------------------------

inline Structure unit() {
  static const Structure u = std::make_shared<const Node>();
  return u;
}

inline Structure atom(AtomName n, bool negative = false) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::atom;
  p->name = std::move(n);
  p->negative = negative;
  return p;
}

inline Structure atom(const Atom& a) { return atom(a.name, a.negative); }

inline Structure ren(AtomName bound, Structure body) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::ren;
  p->name = std::move(bound);
  p->kids.push_back(std::move(body));
  return p;
}

// Raw n-ary node, children kept exactly as given.
inline Structure raw(Kind k, std::vector<Structure> kids) {
  auto p = std::make_shared<Node>();
  p->kind = k;
  p->kids = std::move(kids);
  return p;
}

// Smart constructors: flatten same-kind children, drop units, collapse 0/1 children.
inline Structure connective(Kind k, const std::vector<Structure>& kids) {
  std::vector<Structure> out;
  for (const auto& c : kids) {
    if (c->kind == Kind::unit) continue;
    if (c->kind == k) {
      out.insert(out.end(), c->kids.begin(), c->kids.end());
    } else {
      out.push_back(c);
    }
  }
  if (out.empty()) return unit();
  if (out.size() == 1) return out.front();
  return raw(k, std::move(out));
}

inline Structure par(const std::vector<Structure>& kids) { return connective(Kind::par, kids); }
inline Structure copar(const std::vector<Structure>& kids) { return connective(Kind::copar, kids); }
inline Structure seq(const std::vector<Structure>& kids) { return connective(Kind::seq, kids); }

inline bool is_unit(const Structure& s) { return s->kind == Kind::unit; }

// ---- negation, free names, size -----------------------------------------

inline Structure negate(const Structure& r) {
  switch (r->kind) {
    case Kind::unit: return r;
    case Kind::atom: return atom(r->name, !r->negative);
    case Kind::ren: return ren(r->name, negate(r->kids[0]));
    default: break;
  }
  std::vector<Structure> kids;
  kids.reserve(r->kids.size());
  for (const auto& c : r->kids) kids.push_back(negate(c));
  Kind k = r->kind == Kind::par ? Kind::copar : r->kind == Kind::copar ? Kind::par : Kind::seq;
  return raw(k, std::move(kids));
}

namespace detail {
inline void collect_free(const Structure& r, std::multiset<AtomName>& bound, std::set<AtomName>& out) {
  switch (r->kind) {
    case Kind::unit: return;
    case Kind::atom:
      if (!bound.count(r->name)) out.insert(r->name);
      return;
    case Kind::ren: {
      auto it = bound.insert(r->name);
      collect_free(r->kids[0], bound, out);
      bound.erase(it);
      return;
    }
    default:
      for (const auto& c : r->kids) collect_free(c, bound, out);
  }
}
}  // namespace detail

inline std::set<AtomName> free_names(const Structure& r) {
  std::set<AtomName> out;
  std::multiset<AtomName> bound;
  detail::collect_free(r, bound, out);
  return out;
}

// Does `n` occur free in r?
inline bool occurs_free(const Structure& r, const AtomName& n) {
  switch (r->kind) {
    case Kind::unit: return false;
    case Kind::atom: return r->name == n;
    case Kind::ren: return r->name != n && occurs_free(r->kids[0], n);
    default:
      for (const auto& c : r->kids)
        if (occurs_free(c, n)) return true;
      return false;
  }
}

inline std::size_t size(const Structure& r) {
  switch (r->kind) {
    case Kind::unit: return 0;
    case Kind::atom: return 1;
    case Kind::ren: return size(r->kids[0]) + (occurs_free(r->kids[0], r->name) ? 1 : 0);
    default: {
      std::size_t n = 0;
      for (const auto& c : r->kids) n += size(c);
      return n;
    }
  }
}

inline std::size_t atom_count(const Structure& r) {
  if (r->kind == Kind::atom) return 1;
  std::size_t n = 0;
  for (const auto& c : r->kids) n += atom_count(c);
  return n;
}

// Every name (free or bound, binders included).
inline void all_names(const Structure& r, std::set<AtomName>& out) {
  if (r->kind == Kind::atom || r->kind == Kind::ren) out.insert(r->name);
  for (const auto& c : r->kids) all_names(c, out);
}

inline AtomName fresh_name(const std::set<AtomName>& used, const std::string& base) {
  for (std::size_t i = 0;; ++i) {
    AtomName cand(base + "_" + std::to_string(i));
    if (!used.count(cand)) return cand;
  }
}

// ---- substitution -------------------------------------------------------

// R{replacement/target}: capture-avoiding rename of free occurrences of `target`.
inline Structure subst_atom(const Structure& r, const AtomName& target, const AtomName& replacement) {
  switch (r->kind) {
    case Kind::unit: return r;
    case Kind::atom: return r->name == target ? atom(replacement, r->negative) : r;
    case Kind::ren: {
      if (r->name == target) return r;
      const auto& body = r->kids[0];
      if (!occurs_free(body, target)) return r;
      if (r->name == replacement) {
        std::set<AtomName> used;
        all_names(r, used);
        used.insert(replacement);
        used.insert(target);
        AtomName c = fresh_name(used, r->name.text);
        return ren(c, subst_atom(subst_atom(body, r->name, c), target, replacement));
      }
      return ren(r->name, subst_atom(body, target, replacement));
    }
    default: {
      std::vector<Structure> kids;
      kids.reserve(r->kids.size());
      for (const auto& c : r->kids) kids.push_back(subst_atom(c, target, replacement));
      return raw(r->kind, std::move(kids));
    }
  }
}

// ---- legality -----------------------------------------------------------

namespace detail {
inline void count_occ(const Structure& r, std::map<AtomName, std::size_t*>& scope,
                      std::map<AtomName, std::size_t>& free_count, std::vector<std::size_t>& binder_counts,
                      std::vector<std::unique_ptr<std::size_t>>& store) {
  switch (r->kind) {
    case Kind::unit: return;
    case Kind::atom: {
      auto it = scope.find(r->name);
      if (it != scope.end())
        ++*it->second;
      else
        ++free_count[r->name];
      return;
    }
    case Kind::ren: {
      store.push_back(std::make_unique<std::size_t>(0));
      std::size_t* slot = store.back().get();
      auto saved = scope.find(r->name) != scope.end() ? scope[r->name] : nullptr;
      scope[r->name] = slot;
      count_occ(r->kids[0], scope, free_count, binder_counts, store);
      if (saved)
        scope[r->name] = saved;
      else
        scope.erase(r->name);
      binder_counts.push_back(*slot);
      return;
    }
    default:
      for (const auto& c : r->kids) count_occ(c, scope, free_count, binder_counts, store);
  }
}
}  // namespace detail

// Each name occurs at most twice; polarities pooled, each binder's class counted on its own.
inline bool is_legal(const Structure& r) {
  std::map<AtomName, std::size_t*> scope;
  std::map<AtomName, std::size_t> free_count;
  std::vector<std::size_t> binder_counts;
  std::vector<std::unique_ptr<std::size_t>> store;
  detail::count_occ(r, scope, free_count, binder_counts, store);
  for (auto& [n, c] : free_count)
    if (c > 2) return false;
  for (auto c : binder_counts)
    if (c > 2) return false;
  return true;
}

// ---- contexts -----------------------------------------------------------

// A one-hole context is a structure with exactly one hole atom.
inline const AtomName& hole_name() {
  static const AtomName h("#");
  return h;
}
inline Structure hole() { return atom(hole_name()); }
inline bool is_hole(const Structure& s) { return s->kind == Kind::atom && s->name == hole_name(); }

struct Context {
  Structure shape = hole();
};

inline Structure plug(const Structure& shape, const Structure& r) {
  if (is_hole(shape)) return r;
  if (shape->kids.empty()) return shape;
  std::vector<Structure> kids;
  kids.reserve(shape->kids.size());
  bool changed = false;
  for (const auto& c : shape->kids) {
    auto p = plug(c, r);
    changed |= p != c;
    kids.push_back(std::move(p));
  }
  if (!changed) return shape;
  if (shape->kind == Kind::ren) return ren(shape->name, kids[0]);
  return connective(shape->kind, kids);
}

inline Structure plug(const Context& c, const Structure& r) { return plug(c.shape, r); }

// Compose contexts: outer{inner{□}}.
inline Context compose(const Context& outer, const Context& inner) { return {plug(outer.shape, inner.shape)}; }

// ---- printing -----------------------------------------------------------

inline void print_to(const Structure& r, std::string& out) {
  switch (r->kind) {
    case Kind::unit: out += '1'; return;
    case Kind::atom:
      if (r->negative) out += '~';
      out += r->name.text;
      return;
    case Kind::ren:
      out += '{';
      out += r->name.text;
      out += '}';
      print_to(r->kids[0], out);
      return;
    default: break;
  }
  char open = r->kind == Kind::par ? '[' : r->kind == Kind::copar ? '(' : '<';
  char close = r->kind == Kind::par ? ']' : r->kind == Kind::copar ? ')' : '>';
  out += open;
  for (std::size_t i = 0; i < r->kids.size(); ++i) {
    if (i) out += "; ";
    print_to(r->kids[i], out);
  }
  out += close;
}

inline std::string print_structure(const Structure& r) {
  std::string out;
  print_to(r, out);
  return out;
}

// ---- parsing ------------------------------------------------------------

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& what, int l, int c)
      : std::runtime_error(what + " at " + std::to_string(l) + ":" + std::to_string(c)), line(l), column(c) {}
};

namespace detail {

class StructureParser {
 public:
  explicit StructureParser(std::string_view t, bool holes = false) : text_(t), holes_(holes) {}
  int holes_seen = 0;

  Structure parse_all() {
    auto s = parse();
    skip();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return s;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  bool holes_;

  [[noreturn]] void fail(const std::string& what) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what, line, col);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string name() {
    skip();
    if (pos_ >= text_.size() || !name_start(text_[pos_])) fail("expected name");
    std::size_t b = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  Structure parse() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '1') {
      ++pos_;
      return unit();
    }
    if (c == '~') {
      ++pos_;
      return atom(AtomName(name()), true);
    }
    if (c == '{') {
      ++pos_;
      skip();
      if (pos_ < text_.size() && text_[pos_] == '~') fail("renaming must bind a positive name");
      AtomName b(name());
      skip();
      if (pos_ >= text_.size() || text_[pos_] != '}') fail("expected '}'");
      ++pos_;
      return ren(b, parse());
    }
    if (c == '[' || c == '(' || c == '<') {
      char close = c == '[' ? ']' : c == '(' ? ')' : '>';
      Kind k = c == '[' ? Kind::par : c == '(' ? Kind::copar : Kind::seq;
      ++pos_;
      std::vector<Structure> kids{parse()};
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unterminated group");
        if (text_[pos_] == ';') {
          ++pos_;
          kids.push_back(parse());
          continue;
        }
        if (text_[pos_] == close) {
          ++pos_;
          break;
        }
        fail(std::string("expected ';' or '") + close + "'");
      }
      if (kids.size() < 2) fail("connective needs at least two components");
      return raw(k, std::move(kids));
    }
    if (name_start(c)) return atom(AtomName(name()));
    if (c == '#' && holes_) {
      ++pos_;
      ++holes_seen;
      return hole();
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace detail

inline Structure parse_structure(std::string_view text) { return detail::StructureParser(text).parse_all(); }

// A structure with exactly one '#' marking the hole.
inline Context parse_context(std::string_view text) {
  detail::StructureParser p(text, true);
  Context c{p.parse_all()};
  if (p.holes_seen != 1) throw ParseError("context needs exactly one '#'", 1, 1);
  return c;
}

// Flatten nested same-kind connectives and drop units; renamings are kept verbatim.
inline Structure tidy(const Structure& r) {
  if (r->kind == Kind::unit || r->kind == Kind::atom) return r;
  if (r->kind == Kind::ren) return ren(r->name, tidy(r->kids[0]));
  std::vector<Structure> kids;
  for (const auto& c : r->kids) kids.push_back(tidy(c));
  return connective(r->kind, kids);
}

}  // namespace seqren
