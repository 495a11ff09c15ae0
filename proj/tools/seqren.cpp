// Command-line front end. Exit codes: 0 success, 1 negative answer,
// 2 usage or input error, 3 internal self-check failure.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <seqren/seqren.hpp>

using namespace seqren;

namespace {

enum Exit { ok = 0, negative = 1, usage = 2, internal = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

Lam term_arg(const std::string& text) {
  Lam m = parse_lam(text);
  if (auto r = check_linear(m); !r.ok) throw InputError("term is not linear: " + r.message);
  return m;
}

std::string census_text(const Derivation& d) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, n] : rule_census(d)) {
    os << (first ? "" : " ") << to_string(r) << "=" << n;
    first = false;
  }
  return first ? "(no steps)" : os.str();
}

RuleSet allowed_rules(const std::string& spec) {
  if (spec == "down") return down_fragment();
  if (spec == "up") return up_fragment();
  if (spec == "sbvr") return all_rules();
  RuleSet out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto r = rule_from_string(item);
    if (!r) throw InputError("unknown rule '" + item + "' in --allow");
    out.insert(*r);
  }
  return out;
}

nlohmann::json trace_json(const ReductionTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& [site, term] : t.steps)
    steps.push_back({{"rule", to_string(site.rule)}, {"path", site.path}, {"term", print_lam(term)}});
  return {{"start", print_lam(t.start)}, {"steps", steps}, {"limit_hit", t.limit_hit}};
}

// Fresh-process style recheck: the certificate text must parse and check.
bool recheck(const Derivation& d, const RuleSet& allowed) {
  return check_derivation(parse_certificate(certificate_text(d)), allowed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep-inference kernel for SBVr/BVr with a linear lambda front end"};
  app.require_subcommand(1);
  int code = ok;

  std::string out_channel = "ch_o";

  auto* parse_term = app.add_subcommand("parse-term", "Parse a term, check linearity, print it");
  std::string term_source;
  parse_term->add_option("source", term_source, "File, or - for stdin")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a term");
  std::string term_text, strategy = "leftmost-outermost", trace_path;
  std::optional<std::size_t> max_steps;
  reduce_cmd->add_option("term", term_text)->required();
  reduce_cmd->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"leftmost-outermost", "rightmost-innermost"}));
  reduce_cmd->add_option("--max-steps", max_steps);
  reduce_cmd->add_option("--trace", trace_path, "Write the trace as JSON");

  auto* translate_cmd = app.add_subcommand("translate", "Print the structure image of a term");
  translate_cmd->add_option("term", term_text)->required();
  translate_cmd->add_option("--out-channel", out_channel);

  auto* simulate_cmd = app.add_subcommand("simulate", "Compile a reduction into a checked derivation");
  std::string to_text, cert_path;
  simulate_cmd->add_option("term", term_text)->required();
  simulate_cmd->add_option("--to", to_text, "Stop at this reduct");
  simulate_cmd->add_option("--cert", cert_path);
  simulate_cmd->add_option("--out-channel", out_channel);

  auto* prove_cmd = app.add_subcommand("prove", "Search a down-fragment proof");
  std::string structure_text;
  SearchBudget budget;
  prove_cmd->add_option("structure", structure_text)->required();
  prove_cmd->add_option("--max-depth", budget.max_depth);
  prove_cmd->add_option("--max-states", budget.max_states);
  prove_cmd->add_option("--timeout", budget.wall_clock, "Seconds");
  prove_cmd->add_option("--cert", cert_path);

  auto* prove_red = app.add_subcommand("prove-reduction", "Prove [⟦M⟧; ¬⟦N⟧] in the down fragment");
  std::string n_text;
  prove_red->add_option("M", term_text)->required();
  prove_red->add_option("N", n_text)->required();
  prove_red->add_option("--out-channel", out_channel);
  prove_red->add_option("--max-depth", budget.max_depth);
  prove_red->add_option("--max-states", budget.max_states);
  prove_red->add_option("--timeout", budget.wall_clock, "Seconds");
  prove_red->add_option("--cert", cert_path);

  auto* check_cmd = app.add_subcommand("check", "Check a derivation certificate");
  std::string allow = "sbvr";
  check_cmd->add_option("certificate", cert_path)->required();
  check_cmd->add_option("--allow", allow, "down, up, sbvr or a comma-separated rule list");

  auto* struct_cmd = app.add_subcommand("struct", "Structure utilities");
  struct_cmd->require_subcommand(1);
  std::string s2;
  auto* s_eq = struct_cmd->add_subcommand("eq", "Decide equivalence");
  s_eq->add_option("left", structure_text)->required();
  s_eq->add_option("right", s2)->required();
  auto* s_norm = struct_cmd->add_subcommand("normalize", "Print the canonical form");
  s_norm->add_option("structure", structure_text)->required();
  auto* s_size = struct_cmd->add_subcommand("size", "Print the size");
  s_size->add_option("structure", structure_text)->required();
  auto* s_legal = struct_cmd->add_subcommand("legal", "Decide legality");
  s_legal->add_option("structure", structure_text)->required();

  auto* imll_cmd = app.add_subcommand("imll", "IMLL proofs");
  imll_cmd->require_subcommand(1);
  std::string proof_path;
  auto* imll_compile = imll_cmd->add_subcommand("compile", "Compile a proof tree into a derivation");
  imll_compile->add_option("proof", proof_path)->required();
  imll_compile->add_option("--cert", cert_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? ok : usage;
  }

  auto emit_cert = [&](const Derivation& d) {
    std::string text = certificate_text(d) + "\n";
    if (cert_path.empty())
      std::cout << text;
    else
      write_file(cert_path, text);
  };

  try {
    if (*parse_term) {
      std::string text = read_source(term_source);
      Lam m = parse_lam(text);
      auto r = check_linear(m);
      std::cout << print_lam(m) << "\n";
      if (!r.ok) {
        std::cerr << "not linear: " << r.message << "\n";
        code = negative;
      }
    } else if (*reduce_cmd) {
      Lam m = term_arg(term_text);
      auto st = strategy == "rightmost-innermost" ? Strategy::rightmost_innermost() : Strategy::leftmost_outermost();
      auto t = reduce(m, st, max_steps);
      for (const auto& [site, term] : t.steps) std::cout << to_string(site.rule) << "  " << print_lam(term) << "\n";
      if (t.limit_hit) std::cerr << "step limit reached\n";
      std::cout << print_lam(t.result()) << "\n";
      if (!trace_path.empty()) write_file(trace_path, trace_json(t).dump(2) + "\n");
      if (t.limit_hit) code = negative;
    } else if (*translate_cmd) {
      std::cout << print_structure(translate(term_arg(term_text), AtomName(out_channel))) << "\n";
    } else if (*simulate_cmd) {
      Lam m = term_arg(term_text);
      auto t = reduce(m, Strategy::leftmost_outermost());
      if (!to_text.empty()) {
        Lam target = term_arg(to_text);
        std::size_t k = 0;
        bool found = alpha_equal(m, target);
        while (!found && k < t.steps.size()) found = alpha_equal(t.steps[k++].second, target);
        if (!found) {
          std::cerr << "the leftmost-outermost trace does not reach " << print_lam(target) << "\n";
          return negative;
        }
        t.steps.resize(k);
      }
      AtomName o(out_channel);
      auto d = simulate_trace(t, o);
      RuleSet allowed = down_fragment();
      allowed.insert(RuleName::q_up);
      if (!recheck(d, allowed) || !equiv(d.premise(), translate(t.result(), o))) {
        std::cerr << "internal: simulation did not check\n";
        return internal;
      }
      emit_cert(d);
      if (!cert_path.empty()) {
        nlohmann::json meta = {{"term", print_lam(m)}, {"reduct", print_lam(t.result())}, {"output", out_channel}};
        write_file(cert_path + ".meta.json", meta.dump(2) + "\n");
        std::cout << "premise " << print_structure(d.premise()) << "\n";
      }
      std::cerr << census_text(d) << "\n";
    } else if (*prove_cmd || *prove_red) {
      Structure goal = *prove_cmd ? parse_structure(structure_text)
                                  : reduction_goal(term_arg(term_text), term_arg(n_text), AtomName(out_channel));
      auto r = prove(goal, budget);
      std::cout << to_string(r.status) << "\n" << to_json(r.stats).dump() << "\n";
      if (r.proof) {
        if (!recheck(*r.proof, down_fragment())) {
          std::cerr << "internal: proof did not check\n";
          return internal;
        }
        if (!cert_path.empty()) write_file(cert_path, certificate_text(*r.proof) + "\n");
      } else {
        code = negative;
      }
    } else if (*check_cmd) {
      Derivation d = parse_certificate(read_source(cert_path));
      auto rep = check_derivation_report(d, allowed_rules(allow));
      if (rep.ok) {
        std::cout << "ok " << d.steps.size() << " steps\n";
      } else {
        std::cout << "rejected at step " << rep.failed_step << ": " << rep.reason << "\n";
        code = negative;
      }
      std::cout << "rules " << census_text(d) << "\n";
    } else if (*struct_cmd) {
      Structure r = parse_structure(structure_text);
      if (*s_eq) {
        bool e = equiv(r, parse_structure(s2));
        std::cout << (e ? "equivalent" : "not equivalent") << "\n";
        if (!e) code = negative;
      } else if (*s_norm) {
        std::cout << print_structure(canonicalize(r)) << "\n";
      } else if (*s_size) {
        std::cout << size(r) << "\n";
      } else if (*s_legal) {
        bool l = is_legal(r);
        std::cout << (l ? "legal" : "not legal") << "\n";
        if (!l) code = negative;
      }
    } else if (*imll_cmd) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_source(proof_path));
      } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
      }
      auto p = imll_proof_from_json(j);
      auto d = compile_proof(p);
      if (!recheck(d, all_rules()) || print_structure(d.premise()) != print_structure(free_axioms(p))) {
        std::cerr << "internal: compiled derivation did not check\n";
        return internal;
      }
      emit_cert(d);
    }
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return usage;
  } catch (const ParseError& e) {
    std::cerr << "structure: " << e.what() << "\n";
    return usage;
  } catch (const LamParseError& e) {
    std::cerr << "term: " << e.what() << "\n";
    return usage;
  } catch (const CertificateError& e) {
    std::cerr << e.what() << "\n";
    return usage;
  } catch (const InvalidProof& e) {
    std::cerr << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return internal;
  }
  return code;
}
