// lemmatab: run queries with the lemma table engine or plain SLD, compile
// grammars into programs, and export lemma tables as Graphviz.
//
//   lemmatab run --program P.lp --query "parse([kim,walks],T)" --rule builtin:grammar
//   lemmatab run --program P.lp --query "..." --engine sld --selection preference
//   lemmatab encode G.cfg -o G.lp
//   lemmatab dot --program P.lp --query "..." --rule builtin:grammar -o table.dot
//
// Exit status: 0 on success (even with no solutions), 1 on usage, I/O or
// syntax errors, 2 when the control rule tags a node illegally.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lemma/lemma.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitSyntax = 1;
constexpr int kExitRule = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string program_path;
  std::string query;
  std::string engine = "lemma";
  std::string rule = "builtin:leftmost-tabled";
  std::string selection = "leftmost";
  std::string abstraction = "identity";
  std::size_t max_steps = 100000;
  std::size_t max_depth = 100;
  bool no_answer_subsumption = false;
  bool no_occurs_check = false;
  bool json = false;
  std::string dot_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

lemma::AbstractionOp parse_abstraction(const std::string& s) {
  if (s == "identity") return lemma::AbstractionOp::identity();
  if (s.rfind("depth:", 0) == 0) {
    try {
      std::size_t used = 0;
      int d = std::stoi(s.substr(6), &used);
      if (used == s.size() - 6 && d > 0) return lemma::AbstractionOp::depth(d);
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--abstraction must be identity or depth:N with N > 0");
}

lemma::ControlRuleSpec load_rule(const std::string& rule) {
  if (lemma::is_builtin_rule_name(rule)) return lemma::parse_rule_spec(rule);
  if (rule.rfind("builtin:", 0) == 0) throw UsageError("unknown built-in rule " + rule);
  return lemma::parse_rule_spec(read_file(rule));
}

void add_run_options(CLI::App& cmd, RunConfig& cfg, bool sld_allowed) {
  cmd.add_option("--program", cfg.program_path, "program file (.lp)")->required();
  cmd.add_option("--query", cfg.query, "comma-separated literals")->required();
  if (sld_allowed) {
    cmd.add_option("--engine", cfg.engine, "lemma or sld")
        ->check(CLI::IsMember({"lemma", "sld"}));
    cmd.add_option("--selection", cfg.selection, "SLD selection rule: leftmost or preference")
        ->check(CLI::IsMember({"leftmost", "preference"}));
    cmd.add_option("--max-depth", cfg.max_depth, "SLD depth bound (default 100)")
        ->check(CLI::PositiveNumber);
  }
  cmd.add_option("--rule", cfg.rule,
                 "builtin:grammar, builtin:leftmost, builtin:leftmost-tabled or a .rule file");
  cmd.add_option("--abstraction", cfg.abstraction, "identity or depth:N");
  cmd.add_option("--max-steps", cfg.max_steps, "lemma engine step budget (default 100000)")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--no-answer-subsumption", cfg.no_answer_subsumption,
               "keep solutions already subsumed by earlier ones");
  cmd.add_flag("--no-occurs-check", cfg.no_occurs_check, "unify without the occurs check");
  cmd.add_flag("--json", cfg.json, "machine-readable output");
}

void validate(const CLI::App& cmd, const RunConfig& cfg) {
  if (cfg.engine == "sld") {
    for (const char* opt : {"--rule", "--abstraction", "--max-steps", "--no-answer-subsumption", "--dot"}) {
      if (cmd.count(opt) > 0) throw UsageError(std::string(opt) + " applies to the lemma engine only");
    }
  } else {
    for (const char* opt : {"--selection", "--max-depth"}) {
      if (cmd.get_option_no_throw(opt) && cmd.count(opt) > 0) {
        throw UsageError(std::string(opt) + " applies to the sld engine only");
      }
    }
  }
}

struct Rendered {
  std::string head;
  std::string body;
};

Rendered render(std::span<const lemma::Literal> head, std::span<const lemma::Literal> body) {
  lemma::CanonicalNamer namer;
  lemma::VarNamer names = std::ref(namer);
  Rendered r{lemma::to_string(head, names), lemma::to_string(body, names)};
  return r;
}

void emit(const RunConfig& cfg, const std::vector<Rendered>& solutions, const std::string& status,
          const ordered_json& stats) {
  if (cfg.json) {
    ordered_json out;
    out["solutions"] = ordered_json::array();
    for (const auto& s : solutions) out["solutions"].push_back({{"head", s.head}, {"body", s.body}});
    out["status"] = status;
    out["stats"] = stats;
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (const auto& s : solutions) {
    std::cout << s.head;
    if (!s.body.empty()) std::cout << " :- " << s.body;
    std::cout << ".\n";
  }
  std::cout << "status: " << status << "\n";
  std::cout << "stats:";
  for (const auto& [k, v] : stats.items()) std::cout << " " << k << "=" << v.dump();
  std::cout << "\n";
}

struct Loaded {
  lemma::Program program;
  std::vector<lemma::Literal> query;
};

Loaded load(const RunConfig& cfg) {
  lemma::FreshIds ids;
  Loaded l{lemma::parse_program(read_file(cfg.program_path), ids), {}};
  l.query = lemma::parse_literals(cfg.query, ids);
  return l;
}

lemma::EngineOptions engine_options(const RunConfig& cfg) {
  lemma::EngineOptions opts;
  opts.abstraction = parse_abstraction(cfg.abstraction);
  opts.max_steps = cfg.max_steps;
  opts.answer_subsumption = !cfg.no_answer_subsumption;
  opts.occurs_check = !cfg.no_occurs_check;
  return opts;
}

int cmd_run(const CLI::App& cmd, const RunConfig& cfg) {
  validate(cmd, cfg);
  Loaded in = load(cfg);
  std::vector<Rendered> out;
  if (cfg.engine == "sld") {
    lemma::SldOptions opts;
    opts.occurs_check = !cfg.no_occurs_check;
    auto rule = cfg.selection == "preference" ? lemma::SelectionRule::preference
                                              : lemma::SelectionRule::leftmost;
    auto outcome = lemma::sld_solve(in.program, in.query, rule, cfg.max_depth, opts);
    for (const auto& a : outcome.answers) out.push_back(render(a.subst.apply(in.query), {}));
    std::string status = outcome.status == lemma::SldOutcome::Status::exhausted
                             ? "exhausted"
                             : "depth-limit " + std::to_string(cfg.max_depth);
    emit(cfg, out, status, {{"answers", outcome.answers.size()}});
    return 0;
  }
  lemma::LemmaTable table(in.program, lemma::Goal(in.query), load_rule(cfg.rule), engine_options(cfg));
  auto result = table.run();
  for (const auto& s : result.solutions) out.push_back(render(s.head.literals(), s.body.literals()));
  std::string status = result.status == lemma::EngineResult::Status::fixpoint
                           ? "fixpoint"
                           : "step-limit " + std::to_string(cfg.max_steps);
  ordered_json stats{{"entries", result.stats.entries},
                     {"nodes", result.stats.nodes},
                     {"predictions", result.stats.predictions},
                     {"completions", result.stats.completions},
                     {"solutions", result.stats.solutions},
                     {"suppressed", result.stats.suppressed}};
  emit(cfg, out, status, stats);
  if (!cfg.dot_path.empty()) write_file(cfg.dot_path, lemma::export_dot(table));
  return 0;
}

int cmd_dot(const RunConfig& cfg, const std::string& out_path) {
  Loaded in = load(cfg);
  lemma::LemmaTable table(in.program, lemma::Goal(in.query), load_rule(cfg.rule), engine_options(cfg));
  table.run();
  std::string dot = lemma::export_dot(table);
  if (out_path.empty()) {
    std::cout << dot;
  } else {
    write_file(out_path, dot);
  }
  return 0;
}

int cmd_encode(const std::string& grammar_path, const std::string& out_path) {
  std::string text = lemma::encode_cfg_text(lemma::parse_cfg(read_file(grammar_path)));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabled resolution over sets of literals (lemma tables)"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  auto* run = app.add_subcommand("run", "solve a query and print its solutions");
  add_run_options(*run, run_cfg, true);
  run->add_option("--dot", run_cfg.dot_path, "also write the lemma table as Graphviz to this path");

  std::string grammar_path, encode_out;
  auto* encode = app.add_subcommand("encode", "compile a .cfg grammar into a parse/wf/y program");
  encode->add_option("grammar", grammar_path, "grammar file (.cfg)")->required();
  encode->add_option("-o,--out", encode_out, "output .lp path (default stdout)");

  RunConfig dot_cfg;
  std::string dot_out;
  auto* dot = app.add_subcommand("dot", "run the lemma engine and print the table as Graphviz");
  add_run_options(*dot, dot_cfg, false);
  dot->add_option("-o,--out", dot_out, "output .dot path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSyntax;
  }

  try {
    if (run->parsed()) return cmd_run(*run, run_cfg);
    if (encode->parsed()) return cmd_encode(grammar_path, encode_out);
    if (dot->parsed()) return cmd_dot(dot_cfg, dot_out);
  } catch (const lemma::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kExitSyntax;
  } catch (const lemma::ControlRuleViolation& e) {
    std::cerr << "control rule violation: " << e.what() << "\n";
    return kExitRule;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSyntax;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSyntax;
  }
  return 0;
}
