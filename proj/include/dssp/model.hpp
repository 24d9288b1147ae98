#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types for distributed secret-protection synthesis: agents
// (deterministic partial-transition automata with protectable events and
// secret states), cost classes over the protectable events, global secrets
// distributed across agents, and per-secret protection requirements.

namespace dssp {

// Events and states are identified by name. State names are scoped per
// agent; the same name in two agents denotes two unrelated states. Event
// names are global: a shared name in two agents is the same event.
using EventId = std::string;
using StateId = std::string;

// Base class for hard failures (misuse of an operation, structural
// mismatch). Well-formedness problems in *data* are reported as Violation
// lists instead, never thrown.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Relabelled events carry this marker as their first character; user input
// must not start with it.
inline constexpr char kRelabelMarker = '\'';

// Fresh name for a relabelled transition label: marker + original + round.
// Rounds keep repeated relabellings of the same event distinct.
EventId fresh_relabel_id(const EventId& original, int round);

bool is_relabelled_event(const EventId& name);

// A token is a non-empty string of printable, non-whitespace characters
// (arbitrary UTF-8 beyond ASCII is accepted). Event tokens additionally
// must not start with the relabel marker.
bool is_valid_token(const std::string& name);
bool is_valid_event_name(const EventId& name);

struct Transition {
  StateId from;
  EventId event;
  StateId to;

  auto operator<=>(const Transition&) const = default;
};

// One local component: a deterministic partial-transition automaton plus
// the protectable subset of its alphabet and its secret states. Events
// appearing in transitions but not listed protectable are unprotectable.
struct Agent {
  int index = 0;  // 1-based position within the system
  std::string name;
  std::vector<StateId> states;
  StateId initial;
  std::vector<Transition> transitions;
  std::set<EventId> protectable;
  std::set<StateId> secret_states;

  // Transition events plus declared protectable events.
  std::set<EventId> alphabet() const;

  bool operator==(const Agent&) const = default;
};

// Ordered disjoint cost classes over all protectable events. Class j+1 is
// strictly costlier than class j; levels are 1-based.
struct CostModel {
  std::vector<std::set<EventId>> classes;

  int level_count() const { return static_cast<int>(classes.size()); }

  // Union of classes 1..k. Throws on k outside [1, level_count()].
  std::set<EventId> prefix_union(int k) const;

  // 1-based class containing the event, or nullopt.
  std::optional<int> class_of(const EventId& event) const;

  bool operator==(const CostModel&) const = default;
};

// One state identifier per agent, in agent-index order.
struct GlobalSecret {
  std::vector<StateId> components;

  auto operator<=>(const GlobalSecret&) const = default;
};

struct RequirementPair {
  GlobalSecret secret;
  int protections = 1;  // r: required number of protections

  auto operator<=>(const RequirementPair&) const = default;
};

// Ordered list of (global secret, r) pairs; order is the processing order
// of the synthesis loop.
struct SecurityRequirement {
  std::vector<RequirementPair> pairs;

  bool operator==(const SecurityRequirement&) const = default;
};

struct SystemModel {
  std::vector<Agent> agents;
  CostModel cost_model;
  SecurityRequirement requirement;

  bool operator==(const SystemModel&) const = default;
};

// Per-agent map from state to the set of protectable events to protect
// there. States not present map to the empty set. A control policy has the
// same shape, so the two are used interchangeably.
struct ProtectionPolicy {
  int agent_index = 0;
  std::map<StateId, std::set<EventId>> assignment;

  const std::set<EventId>& at(const StateId& state) const;
  bool empty_everywhere() const;

  // Pointwise union into this policy.
  void merge(const ProtectionPolicy& other);

  auto operator<=>(const ProtectionPolicy&) const = default;
};

// Either per-agent policies plus the achieved maximum cost level, or the
// explicit no-solution outcome.
struct Solution {
  bool solved = false;
  std::vector<ProtectionPolicy> policies;  // one per agent when solved
  int level = 0;

  static Solution no_solution() { return Solution{}; }

  bool operator==(const Solution&) const = default;
};

// One well-formedness violation: a stable machine-readable code plus a
// human-oriented message.
struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Checks every model invariant and reports all violations found; the model
// is valid iff the returned list is empty. Accepts arbitrary parsed input
// and never throws.
std::vector<Violation> validate_system(const SystemModel& model);

// Events the supervisor may disable in this agent at cost level k:
// prefix_union(k) intersected with the agent's protectable set. Throws on
// k outside [1, m].
std::set<EventId> effective_controllable(const Agent& agent,
                                         const CostModel& cost_model, int k);

// Same, for any protectable set (used on relabelled intermediates, whose
// protectable set stays that of the original agent).
std::set<EventId> effective_controllable(const std::set<EventId>& protectable,
                                         const CostModel& cost_model, int k);

}  // namespace dssp
