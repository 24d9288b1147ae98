#include "dssp/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dssp {

namespace {

// Printable and not whitespace. Bytes >= 0x80 (UTF-8 continuations and
// starts) are accepted as-is.
bool acceptable_token_char(unsigned char c) {
  if (c >= 0x80) return true;
  return std::isgraph(c) != 0;
}

}  // namespace

EventId fresh_relabel_id(const EventId& original, int round) {
  if (round < 1) throw Error("relabel round must be >= 1");
  std::ostringstream out;
  out << kRelabelMarker << original << '.' << round;
  return out.str();
}

bool is_relabelled_event(const EventId& name) {
  return !name.empty() && name.front() == kRelabelMarker;
}

bool is_valid_token(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return acceptable_token_char(static_cast<unsigned char>(c));
  });
}

bool is_valid_event_name(const EventId& name) {
  return is_valid_token(name) && !is_relabelled_event(name);
}

std::set<EventId> Agent::alphabet() const {
  std::set<EventId> events = protectable;
  for (const Transition& t : transitions) events.insert(t.event);
  return events;
}

std::set<EventId> CostModel::prefix_union(int k) const {
  if (k < 1 || k > level_count()) {
    std::ostringstream msg;
    msg << "cost level " << k << " out of range [1, " << level_count() << "]";
    throw Error(msg.str());
  }
  std::set<EventId> events;
  for (int j = 0; j < k; ++j)
    events.insert(classes[j].begin(), classes[j].end());
  return events;
}

std::optional<int> CostModel::class_of(const EventId& event) const {
  for (int j = 0; j < level_count(); ++j)
    if (classes[j].count(event)) return j + 1;
  return std::nullopt;
}

const std::set<EventId>& ProtectionPolicy::at(const StateId& state) const {
  static const std::set<EventId> kEmpty;
  auto it = assignment.find(state);
  return it == assignment.end() ? kEmpty : it->second;
}

bool ProtectionPolicy::empty_everywhere() const {
  return std::all_of(assignment.begin(), assignment.end(),
                     [](const auto& entry) { return entry.second.empty(); });
}

void ProtectionPolicy::merge(const ProtectionPolicy& other) {
  for (const auto& [state, events] : other.assignment)
    assignment[state].insert(events.begin(), events.end());
}

namespace {

class Reporter {
public:
  explicit Reporter(std::vector<Violation>& sink) : sink_(sink) {}

  template <typename... Parts>
  void add(const std::string& code, Parts&&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    sink_.push_back(Violation{code, msg.str()});
  }

private:
  std::vector<Violation>& sink_;
};

void validate_agent(const Agent& agent, int position, Reporter& report) {
  const std::string where = "agent " + std::to_string(position) + " (" +
                            agent.name + ")";

  if (agent.index != position)
    report.add("AGENT_INDEX_INVALID", where, ": index ", agent.index,
               " does not match position ", position);
  if (!is_valid_token(agent.name))
    report.add("AGENT_NAME_INVALID", "agent ", position,
               ": name is not a valid token");

  std::set<StateId> states;
  for (const StateId& s : agent.states) {
    if (!is_valid_token(s)) {
      report.add("STATE_NAME_INVALID", where, ": state name \"", s,
                 "\" is not a valid token");
      continue;
    }
    if (!states.insert(s).second)
      report.add("STATE_DUPLICATE", where, ": state \"", s,
                 "\" listed more than once");
  }

  if (!states.count(agent.initial))
    report.add("INITIAL_NOT_STATE", where, ": initial state \"",
               agent.initial, "\" is not a listed state");

  std::set<std::pair<StateId, EventId>> sources;
  for (const Transition& t : agent.transitions) {
    if (!states.count(t.from))
      report.add("TRANSITION_UNKNOWN_STATE", where, ": transition source \"",
                 t.from, "\" is not a listed state");
    if (!states.count(t.to))
      report.add("TRANSITION_UNKNOWN_STATE", where, ": transition target \"",
                 t.to, "\" is not a listed state");
    if (!is_valid_token(t.event))
      report.add("EVENT_NAME_INVALID", where, ": event \"", t.event,
                 "\" is not a valid token");
    else if (is_relabelled_event(t.event))
      report.add("EVENT_NAME_RESERVED", where, ": event \"", t.event,
                 "\" starts with the reserved relabel marker");
    if (!sources.insert({t.from, t.event}).second)
      report.add("NONDETERMINISTIC_TRANSITION", where,
                 ": more than one transition from state \"", t.from,
                 "\" on event \"", t.event, "\"");
  }

  for (const EventId& e : agent.protectable) {
    if (!is_valid_token(e))
      report.add("EVENT_NAME_INVALID", where, ": protectable event \"", e,
                 "\" is not a valid token");
    else if (is_relabelled_event(e))
      report.add("EVENT_NAME_RESERVED", where, ": protectable event \"", e,
                 "\" starts with the reserved relabel marker");
  }

  for (const StateId& s : agent.secret_states)
    if (!states.count(s))
      report.add("SECRET_STATE_UNKNOWN", where, ": secret state \"", s,
                 "\" is not a listed state");
}

void validate_cost_model(const SystemModel& model, Reporter& report) {
  std::set<EventId> protectable_union;
  for (const Agent& agent : model.agents)
    protectable_union.insert(agent.protectable.begin(),
                             agent.protectable.end());

  std::set<EventId> classified;
  const auto& classes = model.cost_model.classes;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    if (classes[j].empty())
      report.add("COST_CLASS_EMPTY", "cost class ", j + 1, " is empty");
    for (const EventId& e : classes[j]) {
      if (is_relabelled_event(e)) {
        report.add("EVENT_NAME_RESERVED", "cost class ", j + 1, ": event \"",
                   e, "\" starts with the reserved relabel marker");
        continue;
      }
      if (!classified.insert(e).second)
        report.add("COST_PARTITION_OVERLAP", "event \"", e,
                   "\" appears in more than one cost class");
      if (!protectable_union.count(e))
        report.add("COST_CLASS_EVENT_UNPROTECTABLE", "cost class ", j + 1,
                   ": event \"", e, "\" is not protectable in any agent");
    }
  }

  for (const EventId& e : protectable_union)
    if (!classified.count(e))
      report.add("COST_PARTITION_INCOMPLETE", "protectable event \"", e,
                 "\" is missing from the cost classes");
}

void validate_requirement(const SystemModel& model, Reporter& report) {
  const auto& pairs = model.requirement.pairs;
  if (pairs.empty()) {
    report.add("REQUIREMENT_EMPTY", "the security requirement is empty");
    return;
  }
  const std::size_t n = model.agents.size();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const RequirementPair& pair = pairs[p];
    const std::string where = "requirement pair " + std::to_string(p + 1);
    if (pair.protections < 1)
      report.add("PROTECTION_COUNT_INVALID", where, ": protection count ",
                 pair.protections, " must be >= 1");
    if (pair.secret.components.size() != n) {
      report.add("SECRET_TUPLE_ARITY", where, ": tuple has ",
                 pair.secret.components.size(), " components, expected ", n);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const StateId& component = pair.secret.components[i];
      if (!model.agents[i].secret_states.count(component))
        report.add("SECRET_COMPONENT_NOT_SECRET", where, ": component \"",
                   component, "\" is not a secret state of agent ", i + 1,
                   " (", model.agents[i].name, ")");
    }
  }
}

}  // namespace

std::vector<Violation> validate_system(const SystemModel& model) {
  std::vector<Violation> violations;
  Reporter report(violations);

  if (model.agents.empty())
    report.add("NO_AGENTS", "the model declares no agents");

  std::set<std::string> agent_names;
  for (std::size_t i = 0; i < model.agents.size(); ++i) {
    validate_agent(model.agents[i], static_cast<int>(i) + 1, report);
    if (!agent_names.insert(model.agents[i].name).second)
      report.add("AGENT_NAME_DUPLICATE", "agent name \"",
                 model.agents[i].name, "\" is used more than once");
  }

  validate_cost_model(model, report);
  validate_requirement(model, report);
  return violations;
}

std::set<EventId> effective_controllable(const std::set<EventId>& protectable,
                                         const CostModel& cost_model, int k) {
  std::set<EventId> result;
  for (const EventId& e : cost_model.prefix_union(k))
    if (protectable.count(e)) result.insert(e);
  return result;
}

std::set<EventId> effective_controllable(const Agent& agent,
                                         const CostModel& cost_model, int k) {
  return effective_controllable(agent.protectable, cost_model, k);
}

}  // namespace dssp
