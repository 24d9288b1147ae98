#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dssp/model.hpp"

namespace dssp {

// Index-based working form of an agent automaton. States keep their names
// (per-agent scope); the transition structure is a per-state ordered map
// from event to target index, which makes iteration deterministic and
// enforces at most one target per (state, event).
//
// `initial` is empty for the empty automaton (e.g. after removing the
// initial state); such an automaton generates no behaviour at all.
class Automaton {
public:
  Automaton() = default;

  int add_state(const StateId& name);
  void set_initial(const StateId& name);

  // Throws if an identical (from, event) pair already exists.
  void add_transition(const StateId& from, const EventId& event,
                      const StateId& to);

  bool has_state(const StateId& name) const;
  int state_index(const StateId& name) const;  // throws on unknown name

  int state_count() const { return static_cast<int>(names_.size()); }
  const std::vector<StateId>& state_names() const { return names_; }
  const StateId& name_of(int index) const { return names_.at(index); }

  std::optional<int> initial() const { return initial_; }
  std::optional<StateId> initial_name() const;

  const std::map<EventId, int>& out(int state) const { return out_.at(state); }
  std::optional<int> target(int state, const EventId& event) const;

  std::size_t transition_count() const;

  // Events occurring on transitions plus the declared protectable set.
  std::set<EventId> alphabet() const;

  const std::set<EventId>& protectable() const { return protectable_; }
  void set_protectable(std::set<EventId> protectable);

  bool operator==(const Automaton&) const = default;

private:
  std::vector<StateId> names_;
  std::map<StateId, int> index_;
  std::optional<int> initial_;
  std::vector<std::map<EventId, int>> out_;
  std::set<EventId> protectable_;
};

// Builds the working form of a validated agent. Throws Error on structural
// problems (unknown states, duplicate transitions); run validate_system
// first for a full report.
Automaton automaton_from_agent(const Agent& agent);

}  // namespace dssp
