#pragma once

#include "rarefan/clocks.hpp"
#include "rarefan/density.hpp"
#include "rarefan/lattice_state.hpp"

#include <cstdint>

namespace rarefan {

enum class MeasureKind { ZeroRangeGeometric, ExclusionBernoulli };

struct StepMeasureSpec {
    Density rho = 1.0;
    double lambda = 0.0;
    MeasureKind kind = MeasureKind::ZeroRangeGeometric;

    void validate() const;
};

// P(k) = (rho/(1+rho))^k / (1+rho), inverse CDF
std::int64_t sample_geometric(double rho, Rng& rng);
bool sample_bernoulli(double p, Rng& rng);

// sites <= 0 from the left density, sites > 0 from the right one
Configuration sample_step_measure(const StepMeasureSpec& spec, Window window, Rng& rng, std::int64_t guard_width = 0);

// step background with the origin replaced by `count` class-2 particles,
// tagged bottom-to-top; returns the tags in jump order
struct StackedConfig {
    Configuration config;
    std::vector<Tag> labels;
};
StackedConfig build_stacked_config(double rho, double lambda, std::int64_t count, Window window, Rng& rng,
                                   std::int64_t guard_width = 0);

// Geometric(lambda) everywhere plus an extra Bernoulli(rho-lambda) particle at
// each site <= -1 and one class-2 particle at the origin. The front particle at
// the rightmost occupied site <= -1 is tagged.
struct PerturbedConfig {
    Configuration config;
    Tag front;
    Tag second_class;
    Site front_start;
};
PerturbedConfig build_perturbed_config(double rho, double lambda, Window window, Rng& rng,
                                       std::int64_t guard_width = 0);

// reservoirs at sites <= -1, class-2 at 0, class-3 at 1
struct CrossingConfig {
    Configuration config;
    Tag second;
    Tag third;
};
CrossingConfig build_crossing_config(Window window, std::int64_t guard_width = 0);

// mass of {eta(0) - xi(0) = k} minus mass of {= -k} under the product of
// Geometric(rho) and Geometric(lambda)
double discrepancy_mass(double rho, double lambda, std::int64_t k);
// sum of discrepancy_mass over k >= j
double tail_mass(double rho, double lambda, std::int64_t j);

}
