#include "dssp/automaton.hpp"

#include <sstream>

namespace dssp {

int Automaton::add_state(const StateId& name) {
  auto [it, inserted] = index_.emplace(name, static_cast<int>(names_.size()));
  if (!inserted) throw Error("duplicate state \"" + name + "\"");
  names_.push_back(name);
  out_.emplace_back();
  return it->second;
}

void Automaton::set_initial(const StateId& name) {
  initial_ = state_index(name);
}

void Automaton::add_transition(const StateId& from, const EventId& event,
                               const StateId& to) {
  const int f = state_index(from);
  const int t = state_index(to);
  auto [it, inserted] = out_[f].emplace(event, t);
  (void)it;
  if (!inserted)
    throw Error("duplicate transition from \"" + from + "\" on \"" + event +
                "\"");
}

bool Automaton::has_state(const StateId& name) const {
  return index_.count(name) > 0;
}

int Automaton::state_index(const StateId& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown state \"" + name + "\"");
  return it->second;
}

std::optional<StateId> Automaton::initial_name() const {
  if (!initial_) return std::nullopt;
  return names_[*initial_];
}

std::optional<int> Automaton::target(int state, const EventId& event) const {
  const auto& row = out_.at(state);
  auto it = row.find(event);
  if (it == row.end()) return std::nullopt;
  return it->second;
}

std::size_t Automaton::transition_count() const {
  std::size_t count = 0;
  for (const auto& row : out_) count += row.size();
  return count;
}

std::set<EventId> Automaton::alphabet() const {
  std::set<EventId> events = protectable_;
  for (const auto& row : out_)
    for (const auto& [event, target] : row) {
      (void)target;
      events.insert(event);
    }
  return events;
}

void Automaton::set_protectable(std::set<EventId> protectable) {
  protectable_ = std::move(protectable);
}

Automaton automaton_from_agent(const Agent& agent) {
  Automaton automaton;
  for (const StateId& s : agent.states) automaton.add_state(s);
  automaton.set_initial(agent.initial);
  for (const Transition& t : agent.transitions)
    automaton.add_transition(t.from, t.event, t.to);
  automaton.set_protectable(agent.protectable);
  return automaton;
}

}  // namespace dssp
