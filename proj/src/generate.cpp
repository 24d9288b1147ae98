#include "dssp/generate.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <vector>

namespace dssp {

namespace {

constexpr int kMaxAttempts = 32;

// Bounded draws are built from raw engine output so generation does not
// depend on the standard library's distribution implementations.
int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

int draw_range(std::mt19937_64& rng, const IntRange& range) {
  return draw_int(rng, range.lo, range.hi);
}

double draw_fraction(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::mt19937_64& rng, std::vector<T>& values) {
  for (std::size_t i = values.size(); i > 1; --i)
    std::swap(values[i - 1], values[draw_int(rng, 0, static_cast<int>(i) - 1)]);
}

void check_params(const GenParams& p) {
  auto bad = [](const std::string& what) -> GenerationError {
    return GenerationError("invalid generation parameters: " + what);
  };
  auto check_positive_range = [&](const IntRange& r, const std::string& name) {
    if (r.lo < 1 || r.hi < r.lo)
      throw bad(name + " range [" + std::to_string(r.lo) + ", " +
                std::to_string(r.hi) + "] is empty or below 1");
  };
  check_positive_range(p.n_agents, "agent count");
  check_positive_range(p.states_per_agent, "states per agent");
  check_positive_range(p.events_per_agent, "events per agent");
  check_positive_range(p.m_classes, "cost class count");
  check_positive_range(p.n_secret_pairs, "secret pair count");
  if (p.r_max < 1) throw bad("r_max must be >= 1");
  if (!(p.transition_density > 0.0) || p.transition_density > 1.0)
    throw bad("transition density must lie in (0, 1]");
  if (!(p.protectable_fraction > 0.0) || p.protectable_fraction > 1.0)
    throw bad("protectable fraction must lie in (0, 1]");
  if (p.shared_event_fraction < 0.0 || p.shared_event_fraction > 1.0)
    throw bad("shared event fraction must lie in [0, 1]");
}

struct AttemptFailed {};

Agent generate_agent(std::mt19937_64& rng, const GenParams& p, int index,
                     std::vector<EventId>& global_events, int& fresh_counter) {
  Agent agent;
  agent.index = index;
  agent.name = "A" + std::to_string(index);

  // Zero-padded names keep numeric and lexicographic order in sync, so a
  // generated model is already in canonical (sorted) form.
  const int n_states = draw_range(rng, p.states_per_agent);
  const std::size_t width = std::to_string(n_states - 1).size();
  for (int s = 0; s < n_states; ++s) {
    std::string digits = std::to_string(s);
    agent.states.push_back("s" + std::string(width - digits.size(), '0') +
                           digits);
  }
  agent.initial = agent.states.front();

  // Local alphabet: a mix of fresh names and names reused from earlier
  // agents, per the sharing rate.
  const int n_events = draw_range(rng, p.events_per_agent);
  std::vector<EventId> alphabet;
  std::set<EventId> used;
  for (int e = 0; e < n_events; ++e) {
    EventId name;
    if (!global_events.empty() &&
        draw_fraction(rng) < p.shared_event_fraction) {
      name = global_events[draw_int(
          rng, 0, static_cast<int>(global_events.size()) - 1)];
      if (used.count(name)) {
        name = "e" + std::to_string(fresh_counter++);
        global_events.push_back(name);
      }
    } else {
      name = "e" + std::to_string(fresh_counter++);
      global_events.push_back(name);
    }
    used.insert(name);
    alphabet.push_back(name);
  }

  // A random arborescence rooted at the initial state keeps everything
  // reachable; extra transitions are sprinkled on top up to the density.
  std::set<std::pair<int, EventId>> taken;
  std::vector<int> connected{0};
  for (int v = 1; v < n_states; ++v) {
    bool attached = false;
    for (int tries = 0; tries < 4 * n_states && !attached; ++tries) {
      const int u = connected[draw_int(
          rng, 0, static_cast<int>(connected.size()) - 1)];
      const EventId& label =
          alphabet[draw_int(rng, 0, static_cast<int>(alphabet.size()) - 1)];
      if (taken.count({u, label})) continue;
      taken.insert({u, label});
      agent.transitions.push_back(
          Transition{agent.states[u], label, agent.states[v]});
      connected.push_back(v);
      attached = true;
    }
    if (!attached) throw AttemptFailed{};  // alphabet too small for the tree
  }

  const int want = std::max(
      n_states - 1,
      static_cast<int>(p.transition_density *
                       static_cast<double>(n_states) *
                       static_cast<double>(alphabet.size())));
  std::vector<std::pair<int, EventId>> free_slots;
  for (int q = 0; q < n_states; ++q)
    for (const EventId& label : alphabet)
      if (!taken.count({q, label})) free_slots.emplace_back(q, label);
  shuffle(rng, free_slots);
  for (std::size_t i = 0;
       i < free_slots.size() &&
       static_cast<int>(agent.transitions.size()) < want;
       ++i) {
    const auto& [q, label] = free_slots[i];
    agent.transitions.push_back(Transition{
        agent.states[q], label, agent.states[draw_int(rng, 0, n_states - 1)]});
  }

  // Protectability is decided per agent, so a shared event may be
  // protectable in one agent and unprotectable in another.
  std::set<EventId> occurring;
  for (const Transition& t : agent.transitions) occurring.insert(t.event);
  for (const EventId& e : occurring)
    if (draw_fraction(rng) < p.protectable_fraction) agent.protectable.insert(e);

  // Secrets: non-initial states, weighted toward deeper ones so multi-round
  // requirements bite. A single-state agent falls back to its initial state.
  std::vector<int> depth(n_states, -1);
  std::deque<int> frontier{0};
  depth[0] = 0;
  std::vector<std::vector<int>> succ(n_states);
  for (const Transition& t : agent.transitions) {
    auto at = [&](const StateId& s) {
      return static_cast<int>(std::find(agent.states.begin(),
                                        agent.states.end(), s) -
                              agent.states.begin());
    };
    succ[at(t.from)].push_back(at(t.to));
  }
  while (!frontier.empty()) {
    const int q = frontier.front();
    frontier.pop_front();
    for (int to : succ[q])
      if (depth[to] < 0) {
        depth[to] = depth[q] + 1;
        frontier.push_back(to);
      }
  }

  if (n_states == 1) {
    agent.secret_states.insert(agent.initial);
    std::sort(agent.transitions.begin(), agent.transitions.end());
    return agent;
  }
  const int n_secrets = draw_int(rng, 1, std::max(1, std::min(3, n_states - 1)));
  std::vector<int> candidates;
  for (int q = 1; q < n_states; ++q) candidates.push_back(q);
  for (int pick = 0; pick < n_secrets && !candidates.empty(); ++pick) {
    long total = 0;
    for (int q : candidates) total += depth[q] + 1;
    long roll = static_cast<long>(rng() % static_cast<std::uint64_t>(total));
    std::size_t chosen = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      roll -= depth[candidates[i]] + 1;
      if (roll < 0) {
        chosen = i;
        break;
      }
    }
    agent.secret_states.insert(agent.states[candidates[chosen]]);
    candidates.erase(candidates.begin() + static_cast<long>(chosen));
  }
  std::sort(agent.transitions.begin(), agent.transitions.end());
  return agent;
}

SystemModel generate_once(std::mt19937_64& rng, const GenParams& p) {
  SystemModel model;
  std::vector<EventId> global_events;
  int fresh_counter = 0;

  const int n = draw_range(rng, p.n_agents);
  for (int i = 1; i <= n; ++i)
    model.agents.push_back(
        generate_agent(rng, p, i, global_events, fresh_counter));

  std::set<EventId> protectable_union;
  for (const Agent& agent : model.agents)
    protectable_union.insert(agent.protectable.begin(),
                             agent.protectable.end());
  if (static_cast<int>(protectable_union.size()) < p.m_classes.lo)
    throw AttemptFailed{};  // cannot fill the requested class count

  const int m = draw_int(
      rng, p.m_classes.lo,
      std::min(p.m_classes.hi, static_cast<int>(protectable_union.size())));
  std::vector<EventId> ordered(protectable_union.begin(),
                               protectable_union.end());
  shuffle(rng, ordered);
  model.cost_model.classes.assign(m, {});
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const int cls = i < static_cast<std::size_t>(m)
                        ? static_cast<int>(i)
                        : draw_int(rng, 0, m - 1);
    model.cost_model.classes[cls].insert(ordered[i]);
  }

  const int n_pairs = draw_range(rng, p.n_secret_pairs);
  for (int pair = 0; pair < n_pairs; ++pair) {
    GlobalSecret secret;
    for (const Agent& agent : model.agents) {
      std::vector<StateId> secrets(agent.secret_states.begin(),
                                   agent.secret_states.end());
      secret.components.push_back(
          secrets[draw_int(rng, 0, static_cast<int>(secrets.size()) - 1)]);
    }
    model.requirement.pairs.push_back(
        RequirementPair{std::move(secret), draw_int(rng, 1, p.r_max)});
  }
  return model;
}

}  // namespace

SystemModel random_system(const GenParams& params) {
  check_params(params);
  std::mt19937_64 rng(params.seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      SystemModel model = generate_once(rng, params);
      if (validate_system(model).empty()) return model;
    } catch (const AttemptFailed&) {
      // fall through to the next attempt with fresh randomness
    }
  }
  std::ostringstream msg;
  msg << "could not generate a valid model for seed " << params.seed
      << " within " << kMaxAttempts << " attempts; parameters are likely "
      << "unsatisfiable (e.g. too few protectable events for the requested "
      << "cost classes)";
  throw GenerationError(msg.str());
}

}  // namespace dssp
