#pragma once

#include <cstdint>

#include "dssp/model.hpp"

// Seeded random generation of valid system models for property testing.
// Generation is a pure function of the parameters: the same GenParams give
// the same model, byte for byte after serialization.

namespace dssp {

struct IntRange {
  int lo = 1;
  int hi = 1;

  bool contains(int v) const { return lo <= v && v <= hi; }
};

struct GenParams {
  std::uint64_t seed = 0;
  IntRange n_agents{2, 3};
  IntRange states_per_agent{3, 8};
  IntRange events_per_agent{3, 6};
  double transition_density = 0.35;  // fraction of the |Q| x |Sigma| grid
  IntRange m_classes{2, 4};
  IntRange n_secret_pairs{1, 3};
  int r_max = 3;
  double protectable_fraction = 0.6;
  double shared_event_fraction = 0.25;
};

// Thrown for invalid parameters and for parameter sets whose constraints
// could not be satisfied within a bounded number of attempts.
class GenerationError : public Error {
public:
  using Error::Error;
};

// Returns a model that passes validate_system, with every state reachable
// from its agent's initial state. Secrets are drawn from non-initial states
// weighted toward deeper ones; cost classes partition the protectable
// union; shared events are reused across agents at the configured rate.
SystemModel random_system(const GenParams& params);

}  // namespace dssp
