#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dssp/automaton.hpp"
#include "dssp/model.hpp"

// Synthesis-free verification oracle. Everything here reduces to 0/1-weight
// shortest paths over the agent graphs, so it can independently check what
// the synthesis stack produces.

namespace dssp {

// Minimum number of weight-1 transitions over any walk; nullopt = target
// unreachable (serialized externally as "unreachable").
using PathWeight = std::optional<int>;

// Counts transition (state, event) toward the weight when true.
using WeightRule = std::function<bool(const StateId&, const EventId&)>;

// Minimum over all walks from the initial state to `target` of the number
// of transitions satisfying `rule`. Weights are nonnegative, so the minimum
// is attained on a simple path. Throws Error on an unknown target state.
PathWeight min_weight_to(const Automaton& automaton, const StateId& target,
                         const WeightRule& rule);

// Same, counting occurrences of events in `counted`.
PathWeight min_protection_weight(const Automaton& automaton,
                                 const StateId& target,
                                 const std::set<EventId>& counted);

// True iff every walk from the agent's initial state to `secret` passes at
// least r transitions the agent can protect at cost level k (its
// protectable events within the first k classes). Unreachable secrets are
// vacuously secure. Throws on r < 1, k outside [1, m], or `secret` not a
// secret state.
bool is_r_securely_reachable(const Agent& agent, const StateId& secret, int r,
                             int k, const CostModel& cost_model);

struct AgentWeight {
  int agent_index = 0;
  PathWeight weight;       // min protected-weight walk to this component
  bool satisfies = false;  // weight >= r (unreachable counts)
};

struct PairCheck {
  int pair_index = 0;
  GlobalSecret secret;
  int protections = 0;
  std::vector<AgentWeight> weights;  // one per agent
  bool satisfied = false;            // some agent satisfies
};

struct VerificationReport {
  std::vector<PairCheck> pairs;
  bool pass = false;     // every pair satisfied
  int policy_level = 0;  // max cost class among protected events; 0 if none
};

// Checks the policies against every requirement pair: a transition (q, e)
// weighs 1 iff e is protected at q by that agent's policy; a pair is
// satisfied iff some component's minimum weight reaches its r. Throws Error
// on policy/agent mismatch (wrong count, unknown states or events, events
// not protectable, missing transitions).
VerificationReport verify_policy(const SystemModel& model,
                                 const std::vector<ProtectionPolicy>& policies);

// True iff every requirement pair has some component securable with all
// protectable events available (k = m), i.e. the synthesis problem has a
// solution at all.
bool is_solvable(const SystemModel& model);

// The least achievable maximum cost level: per pair, the least k' any
// component satisfies its r at; over pairs, the maximum. nullopt when some
// pair cannot be satisfied at any level.
std::optional<int> oracle_min_level(const SystemModel& model);

}  // namespace dssp
