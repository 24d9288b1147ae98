#include "dssp/synthesis.hpp"

#include <algorithm>
#include <sstream>

namespace dssp {

RcmcResult rcmc(const Automaton& plant, const Automaton& spec,
                const CostModel& cost_model) {
  for (int k = 1; k <= cost_model.level_count(); ++k) {
    Supervisor supervisor = supremal_controllable(
        plant, spec, effective_controllable(plant.protectable(), cost_model, k));
    if (!supervisor.empty()) return RcmcResult{std::move(supervisor), k};
  }
  return RcmcResult{};
}

MrcmcResult mrcmc(const Agent& agent, const StateId& secret, int protections,
                  const CostModel& cost_model) {
  if (protections < 1) throw Error("protection count must be >= 1");
  if (!agent.secret_states.count(secret))
    throw Error("state \"" + secret + "\" is not a secret state of agent " +
                agent.name);

  MrcmcResult result;
  result.policy.agent_index = agent.index;
  Automaton current = automaton_from_agent(agent);

  for (int round = 1; round <= protections; ++round) {
    Automaton spec = spec_remove_secret(current, secret);
    RcmcResult found = rcmc(current, spec, cost_model);
    if (!found.found()) {
      // Null: discard everything accumulated so far.
      MrcmcResult null;
      null.policy.agent_index = agent.index;
      return null;
    }

    ControlPolicy round_policy = derive_control_policy(
        current, found.supervisor,
        effective_controllable(current.protectable(), cost_model, found.level));
    round_policy.agent_index = agent.index;

    result.level = std::max(result.level, found.level);
    result.policy.merge(round_policy);
    result.rounds.push_back(SynthesisRound{round, found.level, round_policy,
                                           found.supervisor, current});

    // A round that disables nothing leaves the plant unchanged, so every
    // remaining round would repeat it exactly: same level, same empty
    // policy. The union and maximum are already final.
    if (round_policy.assignment.empty()) break;

    if (round < protections)
      current = relabel(current, round_policy, round).automaton;
  }
  return result;
}

DrcmcOutcome drcmc(const SystemModel& model, const DrcmcOptions& options) {
  std::vector<Violation> violations = validate_system(model);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "model failed validation with " << violations.size()
        << " violation(s); first: [" << violations.front().code << "] "
        << violations.front().message;
    throw Error(msg.str());
  }

  const int n = static_cast<int>(model.agents.size());
  DrcmcOutcome outcome;
  outcome.solution.policies.resize(n);
  for (int i = 0; i < n; ++i)
    outcome.solution.policies[i].agent_index = i + 1;

  std::vector<int> chosen_levels;
  const auto& pairs = model.requirement.pairs;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    PairTrace trace;
    trace.pair_index = static_cast<int>(p) + 1;
    trace.secret = pairs[p].secret;
    trace.protections = pairs[p].protections;

    for (int i = 0; i < n; ++i) {
      AgentAttempt attempt;
      attempt.agent_index = i + 1;
      attempt.result = mrcmc(model.agents[i], pairs[p].secret.components[i],
                             pairs[p].protections, model.cost_model);
      if (!options.keep_intermediates)
        for (SynthesisRound& round : attempt.result.rounds) {
          round.plant = Automaton{};
          round.supervisor = Supervisor{};
        }
      if (attempt.result.found())
        trace.candidates.emplace_back(i + 1, attempt.result.level);
      trace.attempts.push_back(std::move(attempt));
    }

    if (trace.candidates.empty()) {
      outcome.trace.pairs.push_back(std::move(trace));
      outcome.trace.no_solution = true;
      outcome.trace.chosen_levels = chosen_levels;
      outcome.solution = Solution::no_solution();
      return outcome;
    }

    // Last argmin over candidates in ascending agent order: scan with <=,
    // starting from the maximum level present.
    int best_level = 0;
    for (const auto& [agent, level] : trace.candidates)
      best_level = std::max(best_level, level);
    int chosen = 0;
    for (const auto& [agent, level] : trace.candidates)
      if (level <= best_level) {
        best_level = level;
        chosen = agent;
      }

    trace.chosen_agent = chosen;
    trace.chosen_level = best_level;
    outcome.solution.policies[chosen - 1].merge(
        trace.attempts[chosen - 1].result.policy);
    chosen_levels.push_back(best_level);
    outcome.trace.pairs.push_back(std::move(trace));
  }

  outcome.trace.chosen_levels = chosen_levels;
  outcome.trace.final_level =
      *std::max_element(chosen_levels.begin(), chosen_levels.end());
  outcome.solution.solved = true;
  outcome.solution.level = outcome.trace.final_level;
  return outcome;
}

}  // namespace dssp
