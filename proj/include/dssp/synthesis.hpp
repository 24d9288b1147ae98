#pragma once

#include <vector>

#include "dssp/automaton.hpp"
#include "dssp/model.hpp"
#include "dssp/sct.hpp"

// The three-level synthesis stack: rcmc finds the least cost level at which
// a nonempty supervisor exists for one specification; mrcmc stacks r such
// supervisors through relabelling; drcmc runs mrcmc across all agents and
// requirement pairs and assembles minimum-level protection policies.

namespace dssp {

// Null is represented by level == 0.
struct RcmcResult {
  Supervisor supervisor;
  int level = 0;

  bool found() const { return level > 0; }

  bool operator==(const RcmcResult&) const = default;
};

// Record of one mrcmc round: the plant it ran on (round > 1 plants carry
// relabelled transitions from earlier rounds), the supervisor found, the
// policy derived from it, and the level it was found at.
struct SynthesisRound {
  int round = 0;
  int level = 0;
  ControlPolicy policy;
  Supervisor supervisor;
  Automaton plant;

  bool operator==(const SynthesisRound&) const = default;
};

struct MrcmcResult {
  ControlPolicy policy;  // pointwise union over rounds
  int level = 0;         // max of the per-round levels; 0 = null
  std::vector<SynthesisRound> rounds;

  bool found() const { return level > 0; }

  bool operator==(const MrcmcResult&) const = default;
};

struct AgentAttempt {
  int agent_index = 0;
  MrcmcResult result;

  bool operator==(const AgentAttempt&) const = default;
};

// What the main loop did for one requirement pair: every per-agent attempt
// in agent-index order, the candidate set W as (agent, level) pairs, and
// the chosen candidate (0 when the pair failed).
struct PairTrace {
  int pair_index = 0;  // 1-based, requirement order
  GlobalSecret secret;
  int protections = 0;
  std::vector<AgentAttempt> attempts;
  std::vector<std::pair<int, int>> candidates;
  int chosen_agent = 0;
  int chosen_level = 0;

  bool operator==(const PairTrace&) const = default;
};

struct SynthesisTrace {
  std::vector<PairTrace> pairs;
  std::vector<int> chosen_levels;  // V, in requirement order
  int final_level = 0;
  bool no_solution = false;

  bool operator==(const SynthesisTrace&) const = default;
};

struct DrcmcOutcome {
  Solution solution;
  SynthesisTrace trace;
};

struct DrcmcOptions {
  // Keep per-round plants and supervisors inside the trace. Levels, W, V
  // and policies are always recorded.
  bool keep_intermediates = true;
};

// Iterates k = 1..m and returns the first level whose supremal controllable
// supervisor w.r.t. the plant's protectable events restricted to level k is
// nonempty; null if every level yields the empty supervisor.
RcmcResult rcmc(const Automaton& plant, const Automaton& spec,
                const CostModel& cost_model);

// Runs r rounds of rcmc against `secret`, relabelling the protected
// transitions between rounds so each round must protect different
// transitions. Null as soon as any round fails. Throws Error if `secret`
// is not a secret state of the agent, or r < 1.
MrcmcResult mrcmc(const Agent& agent, const StateId& secret, int protections,
                  const CostModel& cost_model);

// The full synthesis loop over every requirement pair. For each pair, runs
// mrcmc on every agent, keeps the candidate with the least level (on ties
// the highest agent index wins, matching a last-argmin scan), merges its
// policy, and finally reports k as the maximum chosen level. Returns
// NO_SOLUTION as soon as some pair has no candidate. Throws Error when the
// model fails validation.
DrcmcOutcome drcmc(const SystemModel& model, const DrcmcOptions& options = {});

}  // namespace dssp
