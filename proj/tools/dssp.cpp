#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dssp/generate.hpp"
#include "dssp/io.hpp"
#include "dssp/oracle.hpp"
#include "dssp/synthesis.hpp"

// Batch front end: synth, verify, solvable, oracle-k, gen, render, validate.
// Exit codes: 0 success/solution/pass, 1 no-solution/fail, 2 invalid input,
// 3 I/O error. Documents go to stdout or --out; diagnostics to stderr.

namespace {

constexpr int kExitSolution = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

bool color_enabled(std::ostream& stream) {
  const char* setting = std::getenv("DSSP_COLOR");
  if (setting && std::string(setting) == "never") return false;
  if (setting && std::string(setting) != "auto" &&
      std::string(setting) != "") return false;
  const int fd = (&stream == &std::cout) ? STDOUT_FILENO : STDERR_FILENO;
  return isatty(fd) != 0;
}

std::string paint(std::ostream& stream, const std::string& text,
                  const char* code) {
  if (!color_enabled(stream)) return text;
  return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

void print_diagnostics(const std::vector<dssp::Diagnostic>& diagnostics) {
  for (const dssp::Diagnostic& d : diagnostics) {
    std::cerr << paint(std::cerr, d.code, "31");
    if (d.line > 0) std::cerr << " (line " << d.line << ")";
    std::cerr << ": " << d.message << "\n";
  }
}

// Loads and parses a model file; on failure prints diagnostics and returns
// the exit code to use.
std::optional<dssp::SystemModel> load_model(const std::string& path,
                                            int& exit_code) {
  std::string text;
  try {
    text = dssp::read_file(path);
  } catch (const dssp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    exit_code = kExitIo;
    return std::nullopt;
  }
  dssp::ModelParse parsed = dssp::parse_model(text);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics);
    exit_code = kExitInvalid;
    return std::nullopt;
  }
  return std::move(parsed.model);
}

void emit_document(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  dssp::write_file_atomic(out_path, content);
}

std::string join_tuple(const std::vector<std::string>& parts) {
  std::string joined;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) joined += ", ";
    joined += parts[i];
  }
  return joined;
}

std::string render_trace(const dssp::SynthesisTrace& trace, bool machine) {
  std::ostringstream out;
  for (const dssp::PairTrace& pair : trace.pairs) {
    if (machine) {
      out << "pair " << pair.pair_index << " protections "
          << pair.protections << "\n";
    } else {
      out << "pair " << pair.pair_index << " secret ("
          << join_tuple(pair.secret.components) << ") protections "
          << pair.protections << "\n";
    }
    for (const dssp::AgentAttempt& attempt : pair.attempts) {
      out << (machine ? "attempt agent " : "  agent ") << attempt.agent_index;
      if (!attempt.result.found()) {
        out << " null\n";
        continue;
      }
      out << " rounds [";
      for (std::size_t j = 0; j < attempt.result.rounds.size(); ++j) {
        if (j) out << ", ";
        out << attempt.result.rounds[j].level;
      }
      out << "] level " << attempt.result.level << "\n";
    }
    out << (machine ? "candidates" : "  candidates");
    for (const auto& [agent, level] : pair.candidates)
      out << " (" << agent << ", " << level << ")";
    out << "\n";
    if (pair.chosen_agent > 0) {
      out << (machine ? "chosen agent " : "  chosen agent ")
          << pair.chosen_agent << " level " << pair.chosen_level << "\n";
    } else {
      out << (machine ? "chosen none" : "  no candidate; giving up") << "\n";
    }
  }
  out << "V [";
  for (std::size_t i = 0; i < trace.chosen_levels.size(); ++i) {
    if (i) out << ", ";
    out << trace.chosen_levels[i];
  }
  out << "]\n";
  if (trace.no_solution)
    out << "NO_SOLUTION\n";
  else
    out << "k " << trace.final_level << "\n";
  return out.str();
}

void write_dot_snapshots(const dssp::SystemModel& model,
                         const dssp::SynthesisTrace& trace,
                         const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);

  for (const dssp::Agent& agent : model.agents) {
    dssp::DotOptions options;
    options.graph_name = agent.name;
    options.secret_states = agent.secret_states;
    dssp::write_file_atomic(
        dir + "/agent" + std::to_string(agent.index) + ".dot",
        dssp::export_dot(dssp::automaton_from_agent(agent), options));
  }

  for (const dssp::PairTrace& pair : trace.pairs) {
    for (const dssp::AgentAttempt& attempt : pair.attempts) {
      const dssp::Agent& agent = model.agents[attempt.agent_index - 1];
      for (const dssp::SynthesisRound& round : attempt.result.rounds) {
        const std::string stem = dir + "/pair" +
                                 std::to_string(pair.pair_index) + "_agent" +
                                 std::to_string(attempt.agent_index) +
                                 "_round" + std::to_string(round.round);
        dssp::DotOptions options;
        options.graph_name = agent.name;
        options.secret_states = agent.secret_states;
        if (round.round > 1)  // round-1 plants equal the original agent
          dssp::write_file_atomic(stem + "_plant.dot",
                                  dssp::export_dot(round.plant, options));
        dssp::write_file_atomic(stem + "_supervisor.dot",
                                dssp::export_dot(round.supervisor, options));
      }
    }
  }
}

int run_synth(const std::string& model_path, const std::string& out_path,
              bool with_trace, const std::string& dot_dir, bool machine) {
  int exit_code = 0;
  auto model = load_model(model_path, exit_code);
  if (!model) return exit_code;

  dssp::DrcmcOptions options;
  options.keep_intermediates = !dot_dir.empty();
  const dssp::DrcmcOutcome outcome = dssp::drcmc(*model, options);

  if (with_trace) std::cerr << render_trace(outcome.trace, machine);
  if (!dot_dir.empty()) write_dot_snapshots(*model, outcome.trace, dot_dir);

  emit_document(dssp::serialize_solution(outcome.solution, *model), out_path);
  return outcome.solution.solved ? kExitSolution : kExitNoSolution;
}

int run_verify(const std::string& model_path, const std::string& policy_path,
               bool machine) {
  int exit_code = 0;
  auto model = load_model(model_path, exit_code);
  if (!model) return exit_code;

  std::string policy_text;
  try {
    policy_text = dssp::read_file(policy_path);
  } catch (const dssp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  dssp::SolutionParse parsed = dssp::parse_solution(policy_text, *model);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics);
    return kExitInvalid;
  }
  if (!parsed.solution->solved) {
    std::cerr << "policy document declares NO_SOLUTION; nothing to verify\n";
    return kExitNoSolution;
  }

  const dssp::VerificationReport report =
      dssp::verify_policy(*model, parsed.solution->policies);

  std::ostringstream out;
  for (const dssp::PairCheck& pair : report.pairs) {
    if (machine) {
      out << "pair " << pair.pair_index << " required " << pair.protections
          << " satisfied " << (pair.satisfied ? 1 : 0) << "\n";
      for (const dssp::AgentWeight& w : pair.weights)
        out << "agent " << w.agent_index << " weight "
            << dssp::weight_token(w.weight) << " ok " << (w.satisfies ? 1 : 0)
            << "\n";
    } else {
      out << "pair " << pair.pair_index << ": secret ("
          << join_tuple(pair.secret.components) << ") requires "
          << pair.protections << " -> "
          << (pair.satisfied ? "satisfied" : "NOT satisfied") << "\n";
      for (const dssp::AgentWeight& w : pair.weights)
        out << "  agent " << w.agent_index << " ("
            << model->agents[w.agent_index - 1].name << "): min protected "
            << "weight " << dssp::weight_token(w.weight)
            << (w.satisfies ? " (ok)" : "") << "\n";
    }
  }
  if (machine) {
    out << "pass " << (report.pass ? 1 : 0) << "\n";
    out << "policy-level " << report.policy_level << "\n";
    std::cout << out.str();
  } else {
    std::cout << out.str();
    std::cout << "result: "
              << (report.pass ? paint(std::cout, "PASS", "32")
                              : paint(std::cout, "FAIL", "31"))
              << "\n";
    std::cout << "policy level: " << report.policy_level << "\n";
  }
  return report.pass ? kExitSolution : kExitNoSolution;
}

int run_solvable(const std::string& model_path) {
  int exit_code = 0;
  auto model = load_model(model_path, exit_code);
  if (!model) return exit_code;
  const bool solvable = dssp::is_solvable(*model);
  std::cout << (solvable ? "yes" : "no") << "\n";
  return solvable ? kExitSolution : kExitNoSolution;
}

int run_oracle_k(const std::string& model_path) {
  int exit_code = 0;
  auto model = load_model(model_path, exit_code);
  if (!model) return exit_code;
  const std::optional<int> level = dssp::oracle_min_level(*model);
  if (level) {
    std::cout << *level << "\n";
    return kExitSolution;
  }
  std::cout << "none" << "\n";
  return kExitNoSolution;
}

int run_validate(const std::string& model_path) {
  std::string text;
  try {
    text = dssp::read_file(model_path);
  } catch (const dssp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  dssp::ModelParse parsed = dssp::parse_model(text);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics);
    return kExitInvalid;
  }
  std::cout << "ok" << "\n";
  return kExitSolution;
}

int run_render(const std::string& model_path, const std::string& dot_dir,
               const std::string& policy_path) {
  int exit_code = 0;
  auto model = load_model(model_path, exit_code);
  if (!model) return exit_code;

  std::optional<dssp::Solution> overlay;
  if (!policy_path.empty()) {
    std::string policy_text;
    try {
      policy_text = dssp::read_file(policy_path);
    } catch (const dssp::IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
    dssp::SolutionParse parsed = dssp::parse_solution(policy_text, *model);
    if (!parsed.ok()) {
      print_diagnostics(parsed.diagnostics);
      return kExitInvalid;
    }
    overlay = std::move(parsed.solution);
  }

  std::error_code ec;
  std::filesystem::create_directories(dot_dir, ec);
  for (const dssp::Agent& agent : model->agents) {
    dssp::DotOptions options;
    options.graph_name = agent.name;
    options.secret_states = agent.secret_states;
    if (overlay && overlay->solved)
      options.policy = &overlay->policies[agent.index - 1];
    dssp::write_file_atomic(
        dot_dir + "/agent" + std::to_string(agent.index) + ".dot",
        dssp::export_dot(dssp::automaton_from_agent(agent), options));
  }
  return kExitSolution;
}

// "N" or "LO:HI"
bool parse_range(const std::string& text, dssp::IntRange& range) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      range.lo = range.hi = std::stoi(text);
    } else {
      range.lo = std::stoi(text.substr(0, colon));
      range.hi = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

int run_gen(const dssp::GenParams& params, const std::string& out_path) {
  const dssp::SystemModel model = dssp::random_system(params);
  emit_document(dssp::serialize_model(model), out_path);
  return kExitSolution;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Protection-policy synthesis and verification for "
               "distributed discrete-event system models"};
  app.require_subcommand(1);

  std::string model_path, policy_path, out_path, dot_dir, format = "text";
  bool with_trace = false;

  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output style: text or machine")
        ->check(CLI::IsMember({"text", "machine"}));
  };

  CLI::App* synth = app.add_subcommand(
      "synth", "Compute minimum-level protection policies for a model");
  synth->add_option("model", model_path, "Model file (.dssp)")->required();
  synth->add_option("--out", out_path, "Write the solution document here");
  synth->add_flag("--trace", with_trace,
                  "Emit the synthesis trace to standard error");
  synth->add_option("--dot", dot_dir,
                    "Write DOT snapshots of every intermediate automaton "
                    "into this directory");
  add_format(synth);

  CLI::App* verify = app.add_subcommand(
      "verify", "Check a policy document against a model's requirements");
  verify->add_option("model", model_path, "Model file (.dssp)")->required();
  verify->add_option("policy", policy_path, "Policy file (.policy)")
      ->required();
  add_format(verify);

  CLI::App* solvable = app.add_subcommand(
      "solvable", "Report whether any protection policy can satisfy the "
                  "requirements");
  solvable->add_option("model", model_path, "Model file (.dssp)")->required();

  CLI::App* oracle_k = app.add_subcommand(
      "oracle-k", "Print the least achievable maximum cost level");
  oracle_k->add_option("model", model_path, "Model file (.dssp)")->required();

  CLI::App* validate = app.add_subcommand(
      "validate", "Parse and validate a model file");
  validate->add_option("model", model_path, "Model file (.dssp)")->required();

  CLI::App* render = app.add_subcommand(
      "render", "Write one DOT graph per agent");
  render->add_option("model", model_path, "Model file (.dssp)")->required();
  render->add_option("--dot", dot_dir, "Output directory")->required();
  render->add_option("--policy", policy_path,
                     "Overlay protected transitions from this policy file");

  dssp::GenParams params;
  std::string agents_range = "2:3", states_range = "3:8", events_range = "3:6",
              classes_range = "2:4", pairs_range = "1:3";
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a random valid model from a seed");
  gen->add_option("--seed", params.seed, "RNG seed")->required();
  gen->add_option("--out", out_path, "Write the model document here");
  gen->add_option("--agents", agents_range, "Agent count (N or LO:HI)");
  gen->add_option("--states", states_range, "States per agent (N or LO:HI)");
  gen->add_option("--events", events_range, "Events per agent (N or LO:HI)");
  gen->add_option("--classes", classes_range, "Cost classes (N or LO:HI)");
  gen->add_option("--pairs", pairs_range, "Requirement pairs (N or LO:HI)");
  gen->add_option("--r-max", params.r_max, "Largest protection count");
  gen->add_option("--density", params.transition_density,
                  "Transition density in (0, 1]");
  gen->add_option("--protectable", params.protectable_fraction,
                  "Fraction of events protectable per agent");
  gen->add_option("--shared", params.shared_event_fraction,
                  "Fraction of events reused across agents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  const bool machine = format == "machine";
  try {
    if (synth->parsed())
      return run_synth(model_path, out_path, with_trace, dot_dir, machine);
    if (verify->parsed()) return run_verify(model_path, policy_path, machine);
    if (solvable->parsed()) return run_solvable(model_path);
    if (oracle_k->parsed()) return run_oracle_k(model_path);
    if (validate->parsed()) return run_validate(model_path);
    if (render->parsed()) return run_render(model_path, dot_dir, policy_path);
    if (gen->parsed()) {
      if (!parse_range(agents_range, params.n_agents) ||
          !parse_range(states_range, params.states_per_agent) ||
          !parse_range(events_range, params.events_per_agent) ||
          !parse_range(classes_range, params.m_classes) ||
          !parse_range(pairs_range, params.n_secret_pairs)) {
        std::cerr << "error: range options take N or LO:HI\n";
        return kExitInvalid;
      }
      return run_gen(params, out_path);
    }
  } catch (const dssp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const dssp::GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const dssp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
