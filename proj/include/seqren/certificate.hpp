#pragma once

#include <json.hpp>

#include "rules.hpp"

namespace seqren {

struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json to_json(const Derivation& d) {
  nlohmann::json j;
  j["conclusion"] = print_structure(d.conclusion);
  j["steps"] = nlohmann::json::array();
  for (const auto& s : d.steps) j["steps"].push_back({{"rule", to_string(s.rule)}, {"premise", print_structure(s.premise)}});
  return j;
}

// Step conclusions are implicit: each is the previous premise.
inline Derivation derivation_from_json(const nlohmann::json& j) {
  try {
    Derivation d;
    d.conclusion = parse_structure(j.at("conclusion").get<std::string>());
    Structure cur = d.conclusion;
    for (const auto& s : j.at("steps")) {
      auto name = s.at("rule").get<std::string>();
      auto rule = rule_from_string(name);
      if (!rule) throw CertificateError("unknown rule '" + name + "'");
      auto prem = parse_structure(s.at("premise").get<std::string>());
      d.steps.push_back({*rule, cur, prem, std::nullopt});
      cur = prem;
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  } catch (const ParseError& e) {
    throw CertificateError(std::string("bad structure in certificate: ") + e.what());
  }
}

inline std::string certificate_text(const Derivation& d) { return to_json(d).dump(2); }

inline Derivation parse_certificate(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("invalid JSON: ") + e.what());
  }
  return derivation_from_json(j);
}

}  // namespace seqren
