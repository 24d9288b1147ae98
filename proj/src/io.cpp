#include "dssp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dssp {

namespace {

using Json = nlohmann::ordered_json;

int line_of_byte(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(),
                                         text.begin() + static_cast<long>(end),
                                         '\n'));
}

class DiagnosticSink {
public:
  explicit DiagnosticSink(std::vector<Diagnostic>& sink) : sink_(sink) {}

  template <typename... Parts>
  void add(const std::string& code, Parts&&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    sink_.push_back(Diagnostic{code, msg.str(), 0});
  }

  bool clean() const { return sink_.empty(); }

private:
  std::vector<Diagnostic>& sink_;
};

std::string type_name(const Json& value) { return value.type_name(); }

// Pulls a string out of `object[field]`, reporting schema problems against
// `where` (a JSON-path-like locator).
std::optional<std::string> get_string(const Json& object,
                                      const std::string& field,
                                      const std::string& where,
                                      DiagnosticSink& diag) {
  if (!object.contains(field)) {
    diag.add("MISSING_FIELD", where, ": missing required field \"", field,
             "\"");
    return std::nullopt;
  }
  if (!object[field].is_string()) {
    diag.add("FIELD_TYPE", where, ".", field, ": expected a string, got ",
             type_name(object[field]));
    return std::nullopt;
  }
  return object[field].get<std::string>();
}

std::optional<std::vector<std::string>> get_string_array(
    const Json& object, const std::string& field, const std::string& where,
    DiagnosticSink& diag) {
  if (!object.contains(field)) {
    diag.add("MISSING_FIELD", where, ": missing required field \"", field,
             "\"");
    return std::nullopt;
  }
  if (!object[field].is_array()) {
    diag.add("FIELD_TYPE", where, ".", field, ": expected an array, got ",
             type_name(object[field]));
    return std::nullopt;
  }
  std::vector<std::string> values;
  for (std::size_t i = 0; i < object[field].size(); ++i) {
    const Json& entry = object[field][i];
    if (!entry.is_string()) {
      diag.add("FIELD_TYPE", where, ".", field, "[", i,
               "]: expected a string, got ", type_name(entry));
      return std::nullopt;
    }
    values.push_back(entry.get<std::string>());
  }
  return values;
}

void warn_unknown_fields(const Json& object,
                         const std::set<std::string>& known,
                         const std::string& where, DiagnosticSink& diag) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!known.count(key))
      diag.add("UNKNOWN_FIELD", where, ": unknown field \"", key, "\"");
  }
}

std::optional<Agent> read_agent(const Json& node, int position,
                                DiagnosticSink& diag) {
  const std::string where = "agents[" + std::to_string(position - 1) + "]";
  if (!node.is_object()) {
    diag.add("FIELD_TYPE", where, ": expected an object, got ",
             type_name(node));
    return std::nullopt;
  }
  warn_unknown_fields(node,
                      {"name", "states", "initial", "secret_states",
                       "protectable", "transitions"},
                      where, diag);

  Agent agent;
  agent.index = position;
  auto name = get_string(node, "name", where, diag);
  auto states = get_string_array(node, "states", where, diag);
  auto initial = get_string(node, "initial", where, diag);
  auto secrets = get_string_array(node, "secret_states", where, diag);
  auto protectable = get_string_array(node, "protectable", where, diag);
  if (!name || !states || !initial || !secrets || !protectable)
    return std::nullopt;
  agent.name = *name;
  agent.states = *states;
  agent.initial = *initial;
  agent.secret_states.insert(secrets->begin(), secrets->end());
  agent.protectable.insert(protectable->begin(), protectable->end());

  if (!node.contains("transitions") || !node["transitions"].is_array()) {
    diag.add("FIELD_TYPE", where,
             ".transitions: expected an array of [from, event, to] triples");
    return std::nullopt;
  }
  for (std::size_t i = 0; i < node["transitions"].size(); ++i) {
    const Json& triple = node["transitions"][i];
    if (!triple.is_array() || triple.size() != 3 || !triple[0].is_string() ||
        !triple[1].is_string() || !triple[2].is_string()) {
      diag.add("FIELD_TYPE", where, ".transitions[", i,
               "]: expected a [from, event, to] string triple");
      return std::nullopt;
    }
    agent.transitions.push_back(Transition{triple[0].get<std::string>(),
                                           triple[1].get<std::string>(),
                                           triple[2].get<std::string>()});
  }
  return agent;
}

}  // namespace

ModelParse parse_model(const std::string& text) {
  ModelParse result;
  DiagnosticSink diag(result.diagnostics);

  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    result.diagnostics.push_back(Diagnostic{
        "SYNTAX_ERROR", e.what(), line_of_byte(text, e.byte)});
    return result;
  }

  if (!doc.is_object()) {
    diag.add("DOCUMENT_NOT_OBJECT",
             "top level: expected an object with agents, cost_classes and "
             "secrets");
    return result;
  }
  warn_unknown_fields(doc, {"agents", "cost_classes", "secrets", "comment"},
                      "top level", diag);

  SystemModel model;

  if (!doc.contains("agents") || !doc["agents"].is_array()) {
    diag.add("MISSING_FIELD", "top level: missing \"agents\" array");
  } else {
    for (std::size_t i = 0; i < doc["agents"].size(); ++i) {
      auto agent = read_agent(doc["agents"][i], static_cast<int>(i) + 1, diag);
      if (agent) model.agents.push_back(std::move(*agent));
    }
  }

  if (!doc.contains("cost_classes") || !doc["cost_classes"].is_array()) {
    diag.add("MISSING_FIELD", "top level: missing \"cost_classes\" array");
  } else {
    for (std::size_t j = 0; j < doc["cost_classes"].size(); ++j) {
      const std::string where = "cost_classes[" + std::to_string(j) + "]";
      const Json& cls = doc["cost_classes"][j];
      if (!cls.is_array()) {
        diag.add("FIELD_TYPE", where, ": expected an array of event names");
        continue;
      }
      std::set<EventId> events;
      bool well_formed = true;
      for (const Json& entry : cls) {
        if (!entry.is_string()) {
          diag.add("FIELD_TYPE", where,
                   ": expected event names as strings, got ",
                   type_name(entry));
          well_formed = false;
          break;
        }
        events.insert(entry.get<std::string>());
      }
      if (well_formed) model.cost_model.classes.push_back(std::move(events));
    }
  }

  if (!doc.contains("secrets") || !doc["secrets"].is_array()) {
    diag.add("MISSING_FIELD", "top level: missing \"secrets\" array");
  } else {
    for (std::size_t p = 0; p < doc["secrets"].size(); ++p) {
      const std::string where = "secrets[" + std::to_string(p) + "]";
      const Json& node = doc["secrets"][p];
      if (!node.is_object()) {
        diag.add("FIELD_TYPE", where, ": expected an object, got ",
                 type_name(node));
        continue;
      }
      warn_unknown_fields(node, {"tuple", "protections"}, where, diag);
      RequirementPair pair;
      auto tuple = get_string_array(node, "tuple", where, diag);
      if (!tuple) continue;
      pair.secret.components = *tuple;
      if (!node.contains("protections") ||
          !node["protections"].is_number_integer()) {
        diag.add("FIELD_TYPE", where,
                 ".protections: expected an integer protection count");
        continue;
      }
      const auto protections = node["protections"].get<std::int64_t>();
      if (protections > std::numeric_limits<int>::max() ||
          protections < std::numeric_limits<int>::min()) {
        diag.add("PROTECTION_COUNT_INVALID", where, ": protection count ",
                 protections, " is out of range");
        continue;
      }
      pair.protections = static_cast<int>(protections);
      model.requirement.pairs.push_back(std::move(pair));
    }
  }

  if (!diag.clean()) return result;

  for (const Violation& v : validate_system(model))
    result.diagnostics.push_back(Diagnostic{v.code, v.message, 0});
  if (!diag.clean()) return result;

  result.model = std::move(model);
  return result;
}

namespace {

Json sorted_string_array(const std::set<std::string>& values) {
  Json array = Json::array();
  for (const std::string& v : values) array.push_back(v);
  return array;
}

}  // namespace

std::string serialize_model(const SystemModel& model) {
  Json doc = Json::object();
  doc["agents"] = Json::array();
  for (const Agent& agent : model.agents) {
    Json node = Json::object();
    node["name"] = agent.name;
    std::vector<StateId> states = agent.states;
    std::sort(states.begin(), states.end());
    node["states"] = states;
    node["initial"] = agent.initial;
    node["secret_states"] = sorted_string_array(agent.secret_states);
    node["protectable"] = sorted_string_array(agent.protectable);
    std::vector<Transition> transitions = agent.transitions;
    std::sort(transitions.begin(), transitions.end());
    Json triples = Json::array();
    for (const Transition& t : transitions)
      triples.push_back(Json::array({t.from, t.event, t.to}));
    node["transitions"] = triples;
    doc["agents"].push_back(std::move(node));
  }

  doc["cost_classes"] = Json::array();
  for (const std::set<EventId>& cls : model.cost_model.classes)
    doc["cost_classes"].push_back(sorted_string_array(cls));

  doc["secrets"] = Json::array();
  for (const RequirementPair& pair : model.requirement.pairs) {
    Json node = Json::object();
    node["tuple"] = pair.secret.components;
    node["protections"] = pair.protections;
    doc["secrets"].push_back(std::move(node));
  }

  return doc.dump(2) + "\n";
}

std::string serialize_solution(const Solution& solution,
                               const SystemModel& model) {
  Json doc = Json::object();
  if (!solution.solved) {
    doc["status"] = "NO_SOLUTION";
    return doc.dump(2) + "\n";
  }

  doc["status"] = "SOLUTION";
  doc["level"] = solution.level;
  doc["policies"] = Json::array();
  for (std::size_t i = 0; i < model.agents.size(); ++i) {
    Json node = Json::object();
    node["agent"] = model.agents[i].name;
    Json assignments = Json::object();
    if (i < solution.policies.size())
      for (const auto& [state, events] : solution.policies[i].assignment)
        if (!events.empty()) assignments[state] = sorted_string_array(events);
    node["assignments"] = std::move(assignments);
    doc["policies"].push_back(std::move(node));
  }
  return doc.dump(2) + "\n";
}

SolutionParse parse_solution(const std::string& text,
                             const SystemModel& model) {
  SolutionParse result;
  DiagnosticSink diag(result.diagnostics);

  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    result.diagnostics.push_back(Diagnostic{
        "SYNTAX_ERROR", e.what(), line_of_byte(text, e.byte)});
    return result;
  }
  if (!doc.is_object()) {
    diag.add("DOCUMENT_NOT_OBJECT", "top level: expected an object");
    return result;
  }
  warn_unknown_fields(doc, {"status", "level", "policies"}, "top level", diag);

  Solution solution;
  std::string status = "SOLUTION";
  if (doc.contains("status")) {
    if (!doc["status"].is_string()) {
      diag.add("FIELD_TYPE", "top level.status: expected a string");
      return result;
    }
    status = doc["status"].get<std::string>();
  }
  if (status == "NO_SOLUTION") {
    result.solution = Solution::no_solution();
    return result;
  }
  if (status != "SOLUTION") {
    diag.add("FIELD_VALUE", "top level.status: expected \"SOLUTION\" or "
             "\"NO_SOLUTION\", got \"", status, "\"");
    return result;
  }

  solution.solved = true;
  solution.policies.resize(model.agents.size());
  for (std::size_t i = 0; i < model.agents.size(); ++i)
    solution.policies[i].agent_index = static_cast<int>(i) + 1;

  if (doc.contains("level")) {
    if (!doc["level"].is_number_integer()) {
      diag.add("FIELD_TYPE", "top level.level: expected an integer");
      return result;
    }
    solution.level = doc["level"].get<int>();
  }

  std::map<std::string, std::size_t> agent_by_name;
  for (std::size_t i = 0; i < model.agents.size(); ++i)
    agent_by_name[model.agents[i].name] = i;

  std::set<std::string> seen;
  const Json policies = doc.contains("policies") ? doc["policies"]
                                                 : Json::array();
  if (!policies.is_array()) {
    diag.add("FIELD_TYPE", "top level.policies: expected an array");
    return result;
  }
  for (std::size_t p = 0; p < policies.size(); ++p) {
    const std::string where = "policies[" + std::to_string(p) + "]";
    const Json& node = policies[p];
    if (!node.is_object()) {
      diag.add("FIELD_TYPE", where, ": expected an object");
      continue;
    }
    warn_unknown_fields(node, {"agent", "assignments"}, where, diag);
    auto agent_name = get_string(node, "agent", where, diag);
    if (!agent_name) continue;
    auto found = agent_by_name.find(*agent_name);
    if (found == agent_by_name.end()) {
      diag.add("POLICY_UNKNOWN_AGENT", where, ": no agent named \"",
               *agent_name, "\" in the model");
      continue;
    }
    if (!seen.insert(*agent_name).second) {
      diag.add("POLICY_DUPLICATE_AGENT", where, ": agent \"", *agent_name,
               "\" already has a policy entry");
      continue;
    }
    const std::size_t i = found->second;
    const Automaton automaton = automaton_from_agent(model.agents[i]);

    if (!node.contains("assignments") || !node["assignments"].is_object()) {
      diag.add("FIELD_TYPE", where,
               ".assignments: expected an object of state -> event list");
      continue;
    }
    for (const auto& [state, events] : node["assignments"].items()) {
      if (!automaton.has_state(state)) {
        diag.add("POLICY_UNKNOWN_STATE", where, ": agent \"", *agent_name,
                 "\" has no state \"", state, "\"");
        continue;
      }
      if (!events.is_array()) {
        diag.add("FIELD_TYPE", where, ".assignments[\"", state,
                 "\"]: expected an array of event names");
        continue;
      }
      for (const Json& event_node : events) {
        if (!event_node.is_string()) {
          diag.add("FIELD_TYPE", where, ".assignments[\"", state,
                   "\"]: expected event names as strings");
          continue;
        }
        const EventId event = event_node.get<std::string>();
        if (!model.agents[i].protectable.count(event)) {
          diag.add("POLICY_EVENT_NOT_PROTECTABLE", where, ": event \"", event,
                   "\" is not protectable in agent \"", *agent_name, "\"");
          continue;
        }
        if (!automaton.target(automaton.state_index(state), event)) {
          diag.add("POLICY_TRANSITION_MISSING", where, ": agent \"",
                   *agent_name, "\" has no transition from \"", state,
                   "\" on \"", event, "\"");
          continue;
        }
        solution.policies[i].assignment[state].insert(event);
      }
    }
  }

  if (!diag.clean()) return result;
  result.solution = std::move(solution);
  return result;
}

namespace {

std::string dot_quote(const std::string& text) {
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') quoted.push_back('\\');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

std::string export_dot(const Automaton& automaton, const DotOptions& options) {
  // Fail fast on overlays that do not belong to this automaton.
  if (options.policy)
    for (const auto& [state, events] : options.policy->assignment) {
      const int q = automaton.state_index(state);
      for (const EventId& event : events)
        if (!automaton.target(q, event))
          throw Error("policy marks missing transition from \"" + state +
                      "\" on \"" + event + "\"");
    }

  std::ostringstream out;
  out << "digraph " << dot_quote(options.graph_name) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";

  std::vector<StateId> order = automaton.state_names();
  std::sort(order.begin(), order.end());
  for (const StateId& state : order) {
    out << "  " << dot_quote(state);
    std::vector<std::string> attrs;
    if (options.secret_states.count(state))
      attrs.push_back("secret=true, shape=doublecircle");
    if (automaton.initial_name() == state)
      attrs.push_back("initial=true, penwidth=2");
    if (!attrs.empty()) {
      out << " [" << attrs[0];
      for (std::size_t i = 1; i < attrs.size(); ++i) out << ", " << attrs[i];
      out << "]";
    }
    out << ";\n";
  }

  // round of a relabelled edge, when the log knows it
  auto log_round = [&options](const StateId& state, const EventId& fresh)
      -> std::optional<RelabelKey> {
    if (!options.relabel_log) return std::nullopt;
    for (const auto& [key, name] : *options.relabel_log)
      if (key.state == state && name == fresh) return key;
    return std::nullopt;
  };

  for (const StateId& state : order) {
    const int q = automaton.state_index(state);
    for (const auto& [event, to] : automaton.out(q)) {
      out << "  " << dot_quote(state) << " -> "
          << dot_quote(automaton.name_of(to)) << " [label="
          << dot_quote(event);
      if (options.policy && options.policy->at(state).count(event))
        out << ", protected=true, color=blue, penwidth=2";
      if (is_relabelled_event(event)) {
        out << ", relabelled=true, color=red";
        if (auto key = log_round(state, event))
          out << ", original=" << dot_quote(key->original)
              << ", round=" << key->round;
      }
      out << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const Supervisor& supervisor,
                       const DotOptions& options) {
  Automaton automaton;
  for (const StateId& state : supervisor.kept_states)
    automaton.add_state(state);
  for (const auto& [state, row] : supervisor.kept_transitions)
    for (const auto& [event, to] : row)
      automaton.add_transition(state, event, to);
  return export_dot(automaton, options);
}

std::string weight_token(const PathWeight& weight) {
  return weight ? std::to_string(*weight) : "unreachable";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  std::ostringstream content;
  content << in.rdbuf();
  if (in.bad()) throw IoError("error while reading \"" + path + "\"");
  return content.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open \"" + tmp + "\" for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("error while writing \"" + tmp + "\"");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move \"" + tmp + "\" into place at \"" + path +
                  "\"");
  }
}

}  // namespace dssp
