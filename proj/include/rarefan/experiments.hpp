#pragma once

#include "rarefan/density.hpp"
#include "rarefan/lattice_state.hpp"
#include "rarefan/replicas.hpp"
#include "rarefan/stats.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rarefan {

enum class Side { Left, Right, ReservoirLeft };

// sites needed on one side of the origin so that nothing outside can reach the
// observed region by time t, except with Poisson tail probability
std::int64_t window_for(double t, Side side = Side::Right);

struct WindowPolicy {
    std::int64_t guard = 20;
    // sites in the collapsed reservoir of an infinite step
    std::int64_t reservoir_depth = 1;
};

struct ExperimentPlan {
    double t = 400.0;
    std::size_t replicas = 4000;
    std::uint64_t master_seed = 0;
    Density rho = 1.0;
    double lambda = 0.0;
    std::vector<double> u_grid;
    std::int64_t jmax = 25;
    std::int64_t ring_size = 64;
    std::int64_t particles = 50;
    WindowPolicy window;
    ReplicaOptions exec;
};

// more flagged replicas than the allowed fraction
class LightConeAbort : public std::runtime_error {
public:
    LightConeAbort(std::size_t violations, std::size_t replicas);
    std::size_t violations;
    std::size_t replicas;
};

inline constexpr double kMaxViolationFraction = 1e-3;

// class-2 tag position
Site second_class_position(const Configuration& config, Tag second);
// first-class particles at sites >= the class-2 particle (up to `cap` when given),
// plus those that left the window to the right when uncapped
std::int64_t current_past_second_class(const Configuration& config, Tag second, std::optional<Site> cap = {});

struct LawComparison {
    std::vector<std::size_t> replica;
    std::vector<double> values;
    EmpiricalCDF cdf;
    double sup_distance = 0.0;
    std::vector<std::pair<double, double>> deviation;
};

// one replica from the infinite step with a class-2 particle at the origin
struct InfiniteStepSample {
    Site x2 = 0;
    std::int64_t j2 = 0;
    bool violated = false;
};

InfiniteStepSample infinite_step_replica(const ExperimentPlan& plan, std::size_t replica);
std::vector<InfiniteStepSample> sample_infinite_step(const ExperimentPlan& plan);

struct SpeedLawReport {
    double t = 0.0;
    LawComparison x2;
    // the same statistic at t/4
    double trend_t = 0.0;
    double trend_sup_distance = 0.0;
    std::size_t violations = 0;
};

struct CurrentLawReport {
    double t = 0.0;
    Estimate mean;
    LawComparison j2;
    std::size_t violations = 0;
};

SpeedLawReport summarize_second_class_speed(const std::vector<InfiniteStepSample>& samples, double t);
CurrentLawReport summarize_second_class_current(const std::vector<InfiniteStepSample>& samples, double t);

SpeedLawReport exp_second_class_speed(const ExperimentPlan& plan);
CurrentLawReport exp_second_class_current(const ExperimentPlan& plan);

struct StackedRow {
    double u = 0.0;
    double weighted_sum = 0.0;
    double reference = 0.0;
    double tail_bound = 0.0;
    double std_error = 0.0;
};

struct StackedReport {
    std::vector<StackedRow> rows;
    std::size_t label_order_violations = 0;
    std::size_t violations = 0;
    std::size_t replicas = 0;
};

// weights rho^{j+1}/(1+rho)^j - lambda^{j+1}/(1+lambda)^j
double stacked_weight(double rho, double lambda, std::int64_t j);
// sum of the weights with index above jmax
double stacked_tail_bound(double rho, double lambda, std::int64_t jmax);

// K = jmax + 1 class-2 particles stacked at the origin of a step (rho, lambda);
// for each u, sum_j w_j P(X_{j+2}(t) >= u t)
StackedReport exp_stacked_weighted_sum(const ExperimentPlan& plan);

struct PerturbedReport {
    double t = 0.0;
    LawComparison x2;
    Estimate j2_mean;
    double j2_reference = 0.0;
    Estimate front_speed;
    double front_reference = 0.0;
    std::vector<double> j2_values;
    std::vector<double> front_values;
    double mean_front_gap = 0.0;
    std::size_t violations = 0;
};

// perturbed step: Geometric(lambda) background, extra Bernoulli(rho-lambda) on the left
PerturbedReport exp_perturbed_step(const ExperimentPlan& plan);

struct CrossingReport {
    double t = 0.0;
    Estimate overtaken;
    // X2 >= X3, i.e. the class-2 particle has reached the class-3 particle by time t
    Estimate caught_up;
    double tie_fraction = 0.0;
    double trend_t = 0.0;
    double trend_tie_fraction = 0.0;
    std::vector<std::size_t> replica;
    std::vector<std::pair<Site, Site>> positions;
    std::size_t violations = 0;
};

// class-2 at 0 and class-3 at 1 behind an infinite reservoir; P(X2(t) > X3(t))
CrossingReport exp_crossing(const ExperimentPlan& plan);

struct LocalEqRow {
    double u = 0.0;
    Site site = 0;
    Estimate indicator;
    double indicator_reference = 0.0;
    Estimate density;
    // infinite when the limit density is infinite
    double density_reference = 0.0;
};

struct LocalEqReport {
    std::vector<LocalEqRow> rows;
    std::size_t violations = 0;
};

// occupation profile at sites floor(u t) from the step (rho, lambda)
LocalEqReport exp_local_equilibrium(const ExperimentPlan& plan);

// exclusion from the Bernoulli step (rho, lambda) with a class-2 particle at the origin
LawComparison sample_tasep_second_class(const ExperimentPlan& plan, std::size_t& violations);
struct TasepReport {
    double t = 0.0;
    LawComparison y2;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t violations = 0;
};
TasepReport exp_tasep_second_class(const ExperimentPlan& plan);

struct StationarityReport {
    Estimate occupancy;
    Estimate indicator;
    double occupancy_reference = 0.0;
    double indicator_reference = 0.0;
    std::vector<double> occupancy_values;
    std::vector<double> indicator_values;
};

// zero-range on a ring of plan.ring_size sites from the Geometric(rho) product
// law; time averages of xi(0) and 1{xi(0) >= 1} at unit spacing
StationarityReport exp_ring_stationarity(const ExperimentPlan& plan);
// exclusion on a ring from Bernoulli(rho); time average of eta(0)
StationarityReport exp_tasep_ring_stationarity(const ExperimentPlan& plan);

}
