#pragma once

#include "rarefan/experiments.hpp"

#include <cstdint>
#include <string>

namespace rarefan {

struct PropertyReport {
    std::string name;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::string detail;

    bool passed() const { return violations == 0 && checks > 0; }
};

// ordered pairs of step measures sampled by quantile coupling stay ordered
// under shared clocks, at every observer time
PropertyReport check_attractiveness(std::uint64_t master_seed, std::size_t seeds, const ReplicaOptions& exec = {});

// a single extra particle stays a single discrepancy
PropertyReport check_single_discrepancy(std::uint64_t master_seed, std::size_t seeds,
                                        const ReplicaOptions& exec = {});

// dropping classes above m leaves the paths of classes <= m unchanged, and the
// multi-class picture projects onto both coupled copies
PropertyReport check_class_censoring(std::uint64_t master_seed, std::size_t seeds, const ReplicaOptions& exec = {});

// time averages on a ring within `sigmas` standard errors of rho and rho/(1+rho)
PropertyReport check_ring_stationarity(const ExperimentPlan& plan, double sigmas = 3.0);

}
