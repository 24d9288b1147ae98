#include "dssp/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <vector>

namespace dssp {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

}  // namespace

PathWeight min_weight_to(const Automaton& automaton, const StateId& target,
                         const WeightRule& rule) {
  const int goal = automaton.state_index(target);
  if (!automaton.initial()) return std::nullopt;

  // 0/1-weight shortest path: relax weight-0 edges at the front of the
  // deque, weight-1 edges at the back.
  std::vector<int> dist(automaton.state_count(), kUnreached);
  std::deque<int> queue;
  dist[*automaton.initial()] = 0;
  queue.push_back(*automaton.initial());

  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    const StateId& name = automaton.name_of(q);
    for (const auto& [event, to] : automaton.out(q)) {
      const int w = rule(name, event) ? 1 : 0;
      if (dist[q] + w < dist[to]) {
        dist[to] = dist[q] + w;
        if (w == 0)
          queue.push_front(to);
        else
          queue.push_back(to);
      }
    }
  }

  if (dist[goal] == kUnreached) return std::nullopt;
  return dist[goal];
}

PathWeight min_protection_weight(const Automaton& automaton,
                                 const StateId& target,
                                 const std::set<EventId>& counted) {
  return min_weight_to(automaton, target,
                       [&counted](const StateId&, const EventId& event) {
                         return counted.count(event) > 0;
                       });
}

bool is_r_securely_reachable(const Agent& agent, const StateId& secret, int r,
                             int k, const CostModel& cost_model) {
  if (r < 1) throw Error("protection count must be >= 1");
  if (!agent.secret_states.count(secret))
    throw Error("state \"" + secret + "\" is not a secret state of agent " +
                agent.name);
  // The events counted are the ones this agent could actually protect at
  // level k; shared events it declares unprotectable do not count.
  const std::set<EventId> counted = effective_controllable(agent, cost_model, k);
  const PathWeight weight =
      min_protection_weight(automaton_from_agent(agent), secret, counted);
  return !weight.has_value() || *weight >= r;
}

namespace {

void check_policies(const SystemModel& model,
                    const std::vector<ProtectionPolicy>& policies) {
  if (policies.size() != model.agents.size()) {
    std::ostringstream msg;
    msg << "expected " << model.agents.size() << " policies, got "
        << policies.size();
    throw Error(msg.str());
  }
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const Agent& agent = model.agents[i];
    const Automaton automaton = automaton_from_agent(agent);
    for (const auto& [state, events] : policies[i].assignment) {
      if (!automaton.has_state(state))
        throw Error("policy for agent " + agent.name +
                    " names unknown state \"" + state + "\"");
      for (const EventId& event : events) {
        if (!agent.protectable.count(event))
          throw Error("policy for agent " + agent.name + " protects \"" +
                      event + "\", which is not protectable there");
        if (!automaton.target(automaton.state_index(state), event))
          throw Error("policy for agent " + agent.name +
                      " protects missing transition from \"" + state +
                      "\" on \"" + event + "\"");
      }
    }
  }
}

}  // namespace

VerificationReport verify_policy(const SystemModel& model,
                                 const std::vector<ProtectionPolicy>& policies) {
  check_policies(model, policies);

  VerificationReport report;
  report.pass = true;

  std::vector<Automaton> automata;
  automata.reserve(model.agents.size());
  for (const Agent& agent : model.agents)
    automata.push_back(automaton_from_agent(agent));

  const auto& pairs = model.requirement.pairs;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    PairCheck check;
    check.pair_index = static_cast<int>(p) + 1;
    check.secret = pairs[p].secret;
    check.protections = pairs[p].protections;

    for (std::size_t i = 0; i < model.agents.size(); ++i) {
      AgentWeight aw;
      aw.agent_index = static_cast<int>(i) + 1;
      const ProtectionPolicy& policy = policies[i];
      aw.weight = min_weight_to(
          automata[i], pairs[p].secret.components[i],
          [&policy](const StateId& state, const EventId& event) {
            return policy.at(state).count(event) > 0;
          });
      aw.satisfies = !aw.weight.has_value() || *aw.weight >= pairs[p].protections;
      check.satisfied = check.satisfied || aw.satisfies;
      check.weights.push_back(aw);
    }

    report.pass = report.pass && check.satisfied;
    report.pairs.push_back(std::move(check));
  }

  report.policy_level = 0;
  for (const ProtectionPolicy& policy : policies)
    for (const auto& [state, events] : policy.assignment) {
      (void)state;
      for (const EventId& event : events)
        if (auto level = model.cost_model.class_of(event))
          report.policy_level = std::max(report.policy_level, *level);
    }
  return report;
}

bool is_solvable(const SystemModel& model) {
  const int m = model.cost_model.level_count();
  for (const RequirementPair& pair : model.requirement.pairs) {
    bool some_component = false;
    for (std::size_t i = 0; i < model.agents.size() && !some_component; ++i)
      some_component = is_r_securely_reachable(
          model.agents[i], pair.secret.components[i], pair.protections, m,
          model.cost_model);
    if (!some_component) return false;
  }
  return true;
}

std::optional<int> oracle_min_level(const SystemModel& model) {
  const int m = model.cost_model.level_count();
  int overall = 1;  // floor: rcmc levels start at 1 even for vacuous pairs
  for (const RequirementPair& pair : model.requirement.pairs) {
    std::optional<int> pair_level;
    for (std::size_t i = 0; i < model.agents.size(); ++i) {
      for (int k = 1; k <= m; ++k) {
        if (pair_level && k >= *pair_level) break;
        if (is_r_securely_reachable(model.agents[i],
                                    pair.secret.components[i],
                                    pair.protections, k, model.cost_model)) {
          pair_level = k;
          break;
        }
      }
    }
    if (!pair_level) return std::nullopt;
    overall = std::max(overall, *pair_level);
  }
  return overall;
}

}  // namespace dssp
