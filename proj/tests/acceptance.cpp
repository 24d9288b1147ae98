// Acceptance suite: end-to-end checks of the synthesis pipeline against the
// bundled demo system and the brute-force oracles, plus determinism and
// scaling checks. Prints one line per criterion and exits nonzero if any
// fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "dssp/generate.hpp"
#include "dssp/io.hpp"
#include "dssp/oracle.hpp"
#include "dssp/synthesis.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion
            << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  fs::create_directories("acceptance_scratch");
  const std::string out = "acceptance_scratch/" + tag + ".out";
  const std::string err = "acceptance_scratch/" + tag + ".err";
  const int raw = std::system(
      (std::string(DSSP_CLI_PATH) + " " + args + " > " + out + " 2> " + err)
          .c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out, std::ios::binary);
  std::ostringstream content;
  content << in.rdbuf();
  result.out = content.str();
  return result;
}

std::string asset(const std::string& name) {
  return std::string(DSSP_ASSET_DIR) + "/" + name;
}

// ---------------------------------------------------------------- 1 -----

void criterion_1_golden_end_to_end() {
  const std::string expected = R"({
  "status": "SOLUTION",
  "level": 3,
  "policies": [
    {
      "agent": "G1",
      "assignments": {
        "q0": [
          "a1"
        ],
        "q1": [
          "a2"
        ]
      }
    },
    {
      "agent": "G2",
      "assignments": {
        "q0": [
          "b1",
          "b4"
        ]
      }
    }
  ]
}
)";
  const auto start = Clock::now();
  const RunResult run = run_cli("synth " + asset("example_fig2.dssp"), "c1");
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << "exit " << run.exit_code << ", " << elapsed << " s";
  report(1, "golden end-to-end synthesis of the demo system",
         run.exit_code == 0 && run.out == expected && elapsed < 1.0,
         detail.str());
}

// ---------------------------------------------------------------- 2 -----

dssp::Automaton fig4_expected() {
  dssp::Automaton expected;
  for (const char* s : {"q0", "q1", "q2", "q3", "q4"}) expected.add_state(s);
  expected.set_initial("q0");
  expected.add_transition("q0", "'b1.1", "q1");
  expected.add_transition("q1", "b2", "q2");
  expected.add_transition("q2", "b3", "q3");
  expected.add_transition("q0", "'b4.1", "q3");
  expected.add_transition("q3", "b5", "q4");
  expected.add_transition("q4", "b6", "q1");
  expected.add_transition("q2", "b7", "q0");
  expected.add_transition("q4", "b7", "q0");
  expected.set_protectable({"b1", "b2", "b4", "b5"});
  return expected;
}

void criterion_2_golden_intermediates() {
  const dssp::DrcmcOutcome outcome = dssp::drcmc(testsup::make_demo_system());
  bool ok = outcome.solution.solved && outcome.trace.pairs.size() == 2;
  std::string detail;

  if (ok) {
    const dssp::PairTrace& pair1 = outcome.trace.pairs[0];
    ok = ok && pair1.attempts[0].result.level == 2 &&
         pair1.attempts[1].result.level == 1 && pair1.chosen_agent == 2;

    const dssp::PairTrace& pair2 = outcome.trace.pairs[1];
    ok = ok && pair2.attempts[0].result.level == 3 &&
         pair2.attempts[1].result.level == 4 && pair2.chosen_agent == 1;

    auto levels = [](const dssp::MrcmcResult& result) {
      std::vector<int> t;
      for (const dssp::SynthesisRound& round : result.rounds)
        t.push_back(round.level);
      return t;
    };
    ok = ok && levels(pair2.attempts[0].result) == std::vector<int>{2, 3};
    ok = ok && levels(pair2.attempts[1].result) == std::vector<int>{1, 4};

    if (ok) {
      const dssp::Automaton& round2_plant =
          pair2.attempts[1].result.rounds[1].plant;
      ok = round2_plant == fig4_expected();
      if (!ok) detail = "round-2 relabelled automaton mismatch";
    } else {
      detail = "level or choice mismatch in the trace";
    }
  } else {
    detail = "unexpected solution shape";
  }
  report(2, "golden trace internals and relabelled intermediate", ok, detail);
}

// ---------------------------------------------------------------- 3 -----

void criterion_3_synthesis_matches_oracle() {
  dssp::GenParams params;
  params.n_agents = {1, 3};
  params.states_per_agent = {2, 8};
  params.events_per_agent = {2, 6};
  params.m_classes = {1, 4};
  params.n_secret_pairs = {1, 3};
  params.r_max = 3;
  params.shared_event_fraction = 0.3;

  const int systems = 500;
  int checked = 0, mismatches = 0;
  std::string first_bad;
  const auto start = Clock::now();
  dssp::DrcmcOptions options;
  options.keep_intermediates = false;

  for (std::uint64_t seed = 1; checked < systems; ++seed) {
    params.seed = seed;
    const dssp::SystemModel model = dssp::random_system(params);
    ++checked;

    const dssp::DrcmcOutcome outcome = dssp::drcmc(model, options);
    const bool solvable = dssp::is_solvable(model);
    const std::optional<int> best = dssp::oracle_min_level(model);

    bool ok = outcome.solution.solved == solvable;
    if (outcome.solution.solved) {
      ok = ok && dssp::verify_policy(model, outcome.solution.policies).pass;
      ok = ok && best.has_value() && outcome.solution.level == *best;
    } else {
      ok = ok && !best.has_value();
    }
    if (!ok) {
      ++mismatches;
      if (first_bad.empty()) first_bad = "seed " + std::to_string(seed);
    }
  }
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << checked << " systems, " << mismatches << " mismatches, "
         << elapsed << " s";
  if (!first_bad.empty()) detail << ", first at " << first_bad;
  report(3, "synthesis agrees with the reachability oracle",
         mismatches == 0 && elapsed < 60.0, detail.str());
}

// ---------------------------------------------------------------- 4 -----

void criterion_4_supremal_exhaustive() {
  dssp::GenParams params;
  params.n_agents = {1, 1};
  params.states_per_agent = {2, 6};
  params.events_per_agent = {2, 5};
  params.m_classes = {1, 3};

  int checked = 0, mismatches = 0;
  for (std::uint64_t seed = 1; checked < 120; ++seed) {
    params.seed = seed;
    const dssp::SystemModel model = dssp::random_system(params);
    const dssp::Automaton plant =
        dssp::automaton_from_agent(model.agents[0]);

    std::mt19937_64 rng(seed ^ 0xabcdef12345ull);
    const std::vector<dssp::StateId>& names = plant.state_names();
    const dssp::Automaton spec =
        dssp::spec_remove_secret(plant, names[rng() % names.size()]);
    std::set<dssp::EventId> controllable;
    for (const dssp::EventId& e : plant.alphabet())
      if (rng() % 2) controllable.insert(e);

    ++checked;
    bool unique_max = false;
    const std::set<dssp::StateId> expected =
        brute::supremal_kept_by_enumeration(plant, spec, controllable,
                                            &unique_max);
    const dssp::Supervisor supervisor =
        dssp::supremal_controllable(plant, spec, controllable);
    if (!unique_max || supervisor.kept_states != expected) ++mismatches;
  }

  std::ostringstream detail;
  detail << checked << " triples, " << mismatches << " mismatches";
  report(4, "supremal supervisor equals exhaustive enumeration",
         mismatches == 0, detail.str());
}

// ---------------------------------------------------------------- 5 -----

void criterion_5_oracle_self_check() {
  dssp::GenParams params;
  params.n_agents = {1, 1};
  params.states_per_agent = {2, 8};
  params.events_per_agent = {2, 6};
  params.m_classes = {1, 4};

  int checked = 0, mismatches = 0;
  for (std::uint64_t seed = 1; checked < 200; ++seed) {
    params.seed = seed;
    const dssp::SystemModel model = dssp::random_system(params);
    const dssp::Automaton automaton =
        dssp::automaton_from_agent(model.agents[0]);
    ++checked;

    std::mt19937_64 rng(seed * 1000003);
    std::set<dssp::EventId> counted;
    for (const dssp::EventId& e : automaton.alphabet())
      if (rng() % 2) counted.insert(e);

    for (const dssp::StateId& target : automaton.state_names())
      if (dssp::min_protection_weight(automaton, target, counted) !=
          brute::min_count_by_enumeration(automaton, target, counted))
        ++mismatches;
  }

  std::ostringstream detail;
  detail << checked << " automata, " << mismatches << " mismatches";
  report(5, "shortest-path weights equal simple-path enumeration",
         mismatches == 0, detail.str());
}

// ---------------------------------------------------------------- 6 -----

void criterion_6_determinism_and_io() {
  const RunResult first =
      run_cli("synth " + asset("example_fig2.dssp"), "c6a");
  const RunResult second =
      run_cli("synth " + asset("example_fig2.dssp"), "c6b");
  bool ok = first.exit_code == 0 && first.out == second.out;

  dssp::GenParams params;
  int round_trip_failures = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    params.seed = seed;
    const dssp::SystemModel model = dssp::random_system(params);
    const std::string text = dssp::serialize_model(model);
    const dssp::ModelParse parsed = dssp::parse_model(text);
    if (!parsed.ok() || !(*parsed.model == model) ||
        dssp::serialize_model(*parsed.model) != text)
      ++round_trip_failures;
  }
  ok = ok && round_trip_failures == 0;

  std::ostringstream detail;
  detail << "50 round-trips, " << round_trip_failures << " failures";
  report(6, "byte-identical reruns and parse/serialize round-trips", ok,
         detail.str());
}

// ---------------------------------------------------------------- 7 -----

double time_synthesis(int states_per_agent) {
  dssp::GenParams params;
  params.seed = 41;
  params.n_agents = {5, 5};
  params.states_per_agent = {states_per_agent, states_per_agent};
  params.events_per_agent = {10, 10};
  params.m_classes = {4, 4};
  params.n_secret_pairs = {20, 20};
  params.r_max = 3;
  params.transition_density = 0.15;
  const dssp::SystemModel model = dssp::random_system(params);

  dssp::DrcmcOptions options;
  options.keep_intermediates = false;
  double best = 1e9;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = Clock::now();
    const dssp::DrcmcOutcome outcome = dssp::drcmc(model, options);
    best = std::min(best, seconds_since(start));
    if (!outcome.solution.solved && !outcome.trace.no_solution) return 1e9;
  }
  return best;
}

void criterion_7_scaling() {
  const double base = time_synthesis(200);
  const double doubled = time_synthesis(400);
  // a 20 ms floor keeps the ratio meaningful when runs are timer-noise fast
  const double ratio = doubled / std::max(base, 0.02);

  std::ostringstream detail;
  detail << "200 states: " << base << " s, 400 states: " << doubled
         << " s, ratio " << ratio;
  report(7, "five-agent synthesis scales near-quadratically",
         base < 10.0 && ratio <= 5.0, detail.str());
}

}  // namespace

int main() {
  criterion_1_golden_end_to_end();
  criterion_2_golden_intermediates();
  criterion_3_synthesis_matches_oracle();
  criterion_4_supremal_exhaustive();
  criterion_5_oracle_self_check();
  criterion_6_determinism_and_io();
  criterion_7_scaling();

  if (failures == 0) {
    std::cout << "all acceptance criteria passed\n";
    return 0;
  }
  std::cout << failures << " acceptance criterion(s) failed\n";
  return 1;
}
