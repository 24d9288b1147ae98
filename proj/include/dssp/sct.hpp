#pragma once

#include <map>
#include <set>
#include <string>

#include "dssp/automaton.hpp"
#include "dssp/model.hpp"

// Supervisory-control machinery: specification construction by secret-state
// removal, the supremal controllable sublanguage fixpoint, control-policy
// derivation from a supervisor, and transition relabelling.

namespace dssp {

// A control policy names, per state, the controllable events the supervisor
// disables there. Same shape as a protection policy.
using ControlPolicy = ProtectionPolicy;

// Subautomaton of a parent automaton, given by the kept states and the
// parent transitions retained between them. Empty when the parent's initial
// state was not kept; otherwise every kept state is reachable from the
// initial state through kept transitions.
struct Supervisor {
  std::set<StateId> kept_states;
  std::map<StateId, std::map<EventId, StateId>> kept_transitions;

  bool empty() const { return kept_states.empty(); }
  bool keeps(const StateId& state) const { return kept_states.count(state) > 0; }
  std::optional<StateId> target(const StateId& state, const EventId& event) const;
  std::size_t transition_count() const;

  bool operator==(const Supervisor&) const = default;
};

struct RelabelKey {
  StateId state;
  EventId original;
  int round = 0;

  auto operator<=>(const RelabelKey&) const = default;
};

// (state, original event, round) -> fresh event name.
using RelabelLog = std::map<RelabelKey, EventId>;

// Automaton whose policy-specified transitions have been renamed to fresh
// unprotectable events, plus the record of what was renamed where.
struct RelabelledAutomaton {
  Automaton automaton;
  RelabelLog log;
};

// Copy of `automaton` with `secret` deleted along with every transition
// into or out of it. Removing the initial state yields the empty automaton.
// Throws Error if `secret` is not a state.
Automaton spec_remove_secret(const Automaton& automaton, const StateId& secret);

// The unique maximal subautomaton M of `spec` such that every uncontrollable
// event defined in `plant` at a kept state is kept in M with a kept target,
// restricted to states reachable from the initial state. Events outside
// `controllable` are uncontrollable. Returns the empty supervisor when the
// initial state cannot be kept. Throws Error if `spec` is not a subautomaton
// of `plant`.
Supervisor supremal_controllable(const Automaton& plant, const Automaton& spec,
                                 const std::set<EventId>& controllable);

// For each kept state q: the controllable events defined in the plant at q
// but not retained by the supervisor. States not kept get the empty set.
// Throws Error if the supervisor does not belong to the plant.
ControlPolicy derive_control_policy(const Automaton& plant,
                                    const Supervisor& supervisor,
                                    const std::set<EventId>& controllable);

// Renames every policy-specified transition (q, e) to fresh_relabel_id(e,
// round), keeping source and target. The fresh events are unprotectable.
// Throws Error if the policy names a transition the automaton lacks, or if
// round < 1.
RelabelledAutomaton relabel(const Automaton& automaton,
                            const ControlPolicy& policy, int round);

}  // namespace dssp
