#pragma once

#include "rarefan/clocks.hpp"
#include "rarefan/lattice_state.hpp"

#include <vector>

namespace rarefan {

struct Discrepancy {
    Site site = 0;
    // total count of A minus total count of B; +-kInfinite when only one side is a reservoir
    std::int64_t signed_count = 0;

    bool operator==(const Discrepancy&) const = default;
};

using DiscrepancySet = std::vector<Discrepancy>;

DiscrepancySet discrepancies(const Configuration& a, const Configuration& b);

// two copies driven by one clock schedule
struct CoupledPair {
    Configuration a;
    Configuration b;
    ClockSchedule clocks;
};

struct CoupledTrace {
    std::vector<double> times;
    std::vector<DiscrepancySet> sets;
    std::vector<bool> a_leq_b;
    std::vector<bool> b_leq_a;
    bool light_cone_violated = false;
};

// unit-rate zero-range dynamics on both copies; discrepancies at each observer time
CoupledTrace run_coupled(CoupledPair& pair, double until, const std::vector<double>& observe_at);

// B's particles as class 1 plus one extra particle of class 2, 3, ... per unit
// of excess of A over B, labeled left to right, bottom to top within a site
Configuration discrepancy_as_second_class(const CoupledPair& pair);

// projections below reassign tags

// forget classes: every particle becomes first class
Configuration ignore_classes(const Configuration& config);
// drop every particle of class > max_class
Configuration censor_classes(const Configuration& config, int max_class);

}
