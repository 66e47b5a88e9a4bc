#pragma once

#include "rarefan/experiments.hpp"
#include "rarefan/lattice_state.hpp"

#include <cstdint>
#include <vector>

namespace rarefan {

// gaps x_i - x_{i+1} - 1 between consecutive particles, leader first
std::vector<std::int64_t> encode_gaps(const std::vector<Site>& positions);

struct MappingSeedResult {
    std::size_t seed = 0;
    // mismatches between the zero-range run and the exclusion run on shared clocks
    std::size_t divergences = 0;
    // negative when the runs never diverged
    double first_divergence_time = -1.0;
    std::size_t events_compared = 0;
    // failed checks of the second-class identities at snapshot times
    std::size_t identity_failures = 0;
    std::size_t snapshots = 0;
};

// One seed: `particles` exclusion particles with Geometric(1) gaps against the
// zero-range process of their gaps, then the second-class pair variant.
MappingSeedResult gap_mapping_replica(std::uint64_t master_seed, std::size_t seed, std::int64_t particles, double t,
                                      std::size_t snapshots = 10);

struct MappingReport {
    std::vector<MappingSeedResult> seeds;
    std::size_t divergences = 0;
    std::size_t identity_failures = 0;
};

// plan.replicas seeds, plan.particles particles, horizon plan.t
MappingReport exp_gap_mapping(const ExperimentPlan& plan);

}
