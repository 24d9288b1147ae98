#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dssp/automaton.hpp"
#include "dssp/model.hpp"
#include "dssp/oracle.hpp"
#include "dssp/sct.hpp"

// Canonical external representations. Model documents (.dssp) and solution
// documents (.policy) are JSON with fixed field names and fully determined
// ordering: agents and requirement pairs keep file order, states and events
// are emitted sorted, so serialization is byte-stable across runs.

namespace dssp {

struct Diagnostic {
  std::string code;
  std::string message;
  int line = 0;  // 1-based source line for syntax errors; 0 when structural

  bool operator==(const Diagnostic&) const = default;
};

struct ModelParse {
  std::optional<SystemModel> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

struct SolutionParse {
  std::optional<Solution> solution;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return solution.has_value(); }
};

// Parses and validates a model document. On failure the diagnostics carry
// every problem found: syntax errors with their line, schema problems with
// the offending path in the message, and all validate_system violations.
ModelParse parse_model(const std::string& text);

// Canonical text: parse(serialize(m)) reproduces m exactly, and
// serialize(parse(text)) canonicalizes any accepted document.
std::string serialize_model(const SystemModel& model);

std::string serialize_solution(const Solution& solution,
                               const SystemModel& model);

// Reads a solution document against its model. Agents are matched by name;
// agents without an entry get an empty policy. Assignments must name
// existing protectable events on existing transitions.
SolutionParse parse_solution(const std::string& text, const SystemModel& model);

struct DotOptions {
  std::string graph_name = "G";
  std::set<StateId> secret_states;
  const ControlPolicy* policy = nullptr;   // marks protected transitions
  const RelabelLog* relabel_log = nullptr; // annotates relabelled ones
};

// DOT digraph: one node statement per state (secret states doublecircled,
// initial state marked), one edge statement per transition. Policy edges
// carry protected=true; relabelled edges carry relabelled=true. Throws
// Error when the policy names states or transitions the automaton lacks.
std::string export_dot(const Automaton& automaton, const DotOptions& options);

// Same for a supervisor subautomaton; an empty supervisor yields a digraph
// with no nodes.
std::string export_dot(const Supervisor& supervisor, const DotOptions& options);

// External spelling of a path weight ("unreachable" for nullopt).
std::string weight_token(const PathWeight& weight);

// ----- small file utilities shared by the CLI and tests -----

class IoError : public Error {
public:
  using Error::Error;
};

std::string read_file(const std::string& path);               // throws IoError
void write_file_atomic(const std::string& path,
                       const std::string& content);           // throws IoError

}  // namespace dssp
