#pragma once

#include <gtest/gtest.h>

#include <seqren/seqren.hpp>

namespace seqren::testing {

inline Structure S(std::string_view text) { return parse_structure(text); }
inline Lam L(std::string_view text) { return parse_lam(text); }

inline ::testing::AssertionResult Equiv(const Structure& a, const Structure& b) {
  if (equiv(a, b)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << print_structure(a) << " is not equivalent to " << print_structure(b);
}

inline ::testing::AssertionResult Checks(const Derivation& d, const RuleSet& allowed) {
  auto rep = check_derivation_report(d, allowed);
  if (rep.ok) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "step " << rep.failed_step << ": " << rep.reason;
}

inline std::set<RuleName> rules_used(const Derivation& d) {
  std::set<RuleName> out;
  for (const auto& s : d.steps) out.insert(s.rule);
  return out;
}

}  // namespace seqren::testing
