#include "dssp/sct.hpp"

#include <deque>
#include <vector>

namespace dssp {

std::optional<StateId> Supervisor::target(const StateId& state,
                                          const EventId& event) const {
  auto row = kept_transitions.find(state);
  if (row == kept_transitions.end()) return std::nullopt;
  auto it = row->second.find(event);
  if (it == row->second.end()) return std::nullopt;
  return it->second;
}

std::size_t Supervisor::transition_count() const {
  std::size_t count = 0;
  for (const auto& [state, row] : kept_transitions) {
    (void)state;
    count += row.size();
  }
  return count;
}

Automaton spec_remove_secret(const Automaton& automaton,
                             const StateId& secret) {
  const int removed = automaton.state_index(secret);

  Automaton result;
  for (int q = 0; q < automaton.state_count(); ++q)
    if (q != removed) result.add_state(automaton.name_of(q));
  if (automaton.initial() && *automaton.initial() != removed)
    result.set_initial(*automaton.initial_name());
  for (int q = 0; q < automaton.state_count(); ++q) {
    if (q == removed) continue;
    for (const auto& [event, to] : automaton.out(q)) {
      if (to == removed) continue;
      result.add_transition(automaton.name_of(q), event,
                            automaton.name_of(to));
    }
  }
  result.set_protectable(automaton.protectable());
  return result;
}

namespace {

// Fails with a structural error unless every spec state and transition
// exists identically in the plant. Returns the plant index of each spec
// state.
std::vector<int> map_into_plant(const Automaton& plant, const Automaton& spec) {
  std::vector<int> plant_of(spec.state_count());
  for (int q = 0; q < spec.state_count(); ++q) {
    const StateId& name = spec.name_of(q);
    if (!plant.has_state(name))
      throw Error("spec state \"" + name + "\" does not exist in the plant");
    plant_of[q] = plant.state_index(name);
  }
  if (spec.initial() &&
      (!plant.initial() || plant_of[*spec.initial()] != *plant.initial()))
    throw Error("spec initial state differs from the plant's");
  for (int q = 0; q < spec.state_count(); ++q)
    for (const auto& [event, to] : spec.out(q)) {
      auto plant_to = plant.target(plant_of[q], event);
      if (!plant_to || *plant_to != plant_of[to])
        throw Error("spec transition from \"" + spec.name_of(q) + "\" on \"" +
                    event + "\" is not a plant transition");
    }
  return plant_of;
}

}  // namespace

Supervisor supremal_controllable(const Automaton& plant, const Automaton& spec,
                                 const std::set<EventId>& controllable) {
  const std::vector<int> plant_of = map_into_plant(plant, spec);
  const int n = spec.state_count();

  // Reverse adjacency over spec transitions, uncontrollable labels only:
  // when a state dies, these are the sources that lose a transition they
  // were required to keep.
  std::vector<std::vector<int>> rev_uncontrollable(n);
  for (int q = 0; q < n; ++q)
    for (const auto& [event, to] : spec.out(q))
      if (!controllable.count(event)) rev_uncontrollable[to].push_back(q);

  std::vector<char> alive(n, 1);
  std::deque<int> dying;
  auto kill = [&](int q) {
    if (alive[q]) {
      alive[q] = 0;
      dying.push_back(q);
    }
  };

  // A state is immediately bad when the plant can fire an uncontrollable
  // event there that the spec does not allow at all.
  for (int q = 0; q < n; ++q)
    for (const auto& [event, to] : plant.out(plant_of[q])) {
      (void)to;
      if (!controllable.count(event) && !spec.target(q, event)) {
        kill(q);
        break;
      }
    }

  while (!dying.empty()) {
    const int dead = dying.front();
    dying.pop_front();
    for (int q : rev_uncontrollable[dead]) kill(q);
  }

  Supervisor supervisor;
  if (!spec.initial() || !alive[*spec.initial()]) return supervisor;

  // Restrict to the part reachable from the initial state through
  // surviving transitions.
  std::vector<char> reached(n, 0);
  std::deque<int> frontier{*spec.initial()};
  reached[*spec.initial()] = 1;
  while (!frontier.empty()) {
    const int q = frontier.front();
    frontier.pop_front();
    for (const auto& [event, to] : spec.out(q)) {
      (void)event;
      if (alive[to] && !reached[to]) {
        reached[to] = 1;
        frontier.push_back(to);
      }
    }
  }

  for (int q = 0; q < n; ++q) {
    if (!reached[q]) continue;
    supervisor.kept_states.insert(spec.name_of(q));
    auto& row = supervisor.kept_transitions[spec.name_of(q)];
    for (const auto& [event, to] : spec.out(q))
      if (reached[to]) row.emplace(event, spec.name_of(to));
  }
  return supervisor;
}

ControlPolicy derive_control_policy(const Automaton& plant,
                                    const Supervisor& supervisor,
                                    const std::set<EventId>& controllable) {
  for (const auto& [state, row] : supervisor.kept_transitions) {
    const int q = plant.state_index(state);  // throws on foreign states
    for (const auto& [event, to] : row) {
      auto plant_to = plant.target(q, event);
      if (!plant_to || plant.name_of(*plant_to) != to)
        throw Error("supervisor transition from \"" + state + "\" on \"" +
                    event + "\" is not a plant transition");
    }
  }

  ControlPolicy policy;
  for (int q = 0; q < plant.state_count(); ++q) {
    const StateId& name = plant.name_of(q);
    if (!supervisor.keeps(name)) continue;
    std::set<EventId> disabled;
    for (const auto& [event, to] : plant.out(q)) {
      (void)to;
      if (!controllable.count(event)) continue;
      auto kept = supervisor.target(name, event);
      if (!kept || !supervisor.keeps(*kept)) disabled.insert(event);
    }
    if (!disabled.empty()) policy.assignment[name] = std::move(disabled);
  }
  return policy;
}

RelabelledAutomaton relabel(const Automaton& automaton,
                            const ControlPolicy& policy, int round) {
  if (round < 1) throw Error("relabel round must be >= 1");
  for (const auto& [state, events] : policy.assignment) {
    const int q = automaton.state_index(state);
    for (const EventId& event : events)
      if (!automaton.target(q, event))
        throw Error("policy protects missing transition from \"" + state +
                    "\" on \"" + event + "\"");
  }

  RelabelledAutomaton result;
  for (int q = 0; q < automaton.state_count(); ++q)
    result.automaton.add_state(automaton.name_of(q));
  if (automaton.initial())
    result.automaton.set_initial(*automaton.initial_name());
  for (int q = 0; q < automaton.state_count(); ++q) {
    const StateId& name = automaton.name_of(q);
    const std::set<EventId>& renamed = policy.at(name);
    for (const auto& [event, to] : automaton.out(q)) {
      if (renamed.count(event)) {
        const EventId fresh = fresh_relabel_id(event, round);
        result.automaton.add_transition(name, fresh, automaton.name_of(to));
        result.log[RelabelKey{name, event, round}] = fresh;
      } else {
        result.automaton.add_transition(name, event, automaton.name_of(to));
      }
    }
  }
  // Fresh events are not added here, so they are unprotectable.
  result.automaton.set_protectable(automaton.protectable());
  return result;
}

}  // namespace dssp
