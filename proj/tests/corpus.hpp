#pragma once

// Shared λ-term corpus: every β-clause shape, open terms, congruence
// positions and nested substitutions.

#include <string>
#include <vector>

namespace seqren::corpus {

inline const std::vector<std::string>& terms() {
  static const std::vector<std::string> t = {
      "(\\x.x) y",
      "x[x:=y]",
      "(\\x.x) (\\y.y)",
      "(\\x.\\y.x y) z",
      "(\\f.\\a.f a) (\\z.z) w",
      "(\\y.x y)[x:=\\z.z]",
      "(x y)[x:=z]",
      "(y x)[x:=z]",
      "(x[x:=y])[y:=z]",
      "x[x:=y[y:=z]]",
      "\\z.(\\x.x) z",
      "w ((\\x.x) v)",
      "((\\x.x) w) v",
      "(\\x.x w) (\\y.y)",
      "(\\x.\\y.y x) a b",
      "((\\x.x) (\\y.y)) z",
      "(\\x.x) ((\\y.y) z)",
      "(\\f.f a) (\\x.x)",
      "\\a.\\b.(\\x.x a) (\\y.b y)",
      "((x y)[x:=\\z.z])[y:=w]",
      "(\\x.(\\y.x y) u) v",
      "\\x.(x y)[y:=z]",
      "(\\x.x) (\\y.y) (\\z.z)",
      "y[y:=\\x.x]",
  };
  return t;
}

}  // namespace seqren::corpus
