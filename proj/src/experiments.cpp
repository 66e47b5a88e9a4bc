#include "rarefan/experiments.hpp"

#include "rarefan/clocks.hpp"
#include "rarefan/dynamics.hpp"
#include "rarefan/hydro.hpp"
#include "rarefan/initial_measures.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rarefan {

namespace {

constexpr std::uint64_t kInitDomain = 1;
constexpr double kStackedTailTolerance = 1e-7;

void check_horizon(const ExperimentPlan& plan)
{
    if (!(plan.t > 0.0) || !std::isfinite(plan.t))
        throw std::invalid_argument("t must be positive");
    if (plan.replicas == 0)
        throw std::invalid_argument("need at least one replica");
}

void check_violations(std::size_t violations, std::size_t replicas)
{
    if (static_cast<double>(violations) >= kMaxViolationFraction * static_cast<double>(replicas) && violations > 0)
        throw LightConeAbort(violations, replicas);
}

LawComparison compare_law(std::vector<std::size_t> replica, std::vector<double> values,
                          const std::function<double(double)>& cdf, double lo, double hi)
{
    LawComparison out;
    out.replica = std::move(replica);
    out.values = std::move(values);
    out.cdf = EmpiricalCDF(out.values);
    out.sup_distance = out.cdf.sup_distance(cdf);
    out.deviation = out.cdf.deviation_profile(cdf, uniform_grid(lo, hi, 21));
    return out;
}

// one-sided window with the infinite step collapsed into a reservoir at the left end
Configuration reservoir_window(const ExperimentPlan& plan, Site last_reservoir)
{
    const std::int64_t depth = std::max<std::int64_t>(1, plan.window.reservoir_depth);
    Configuration config(Window{last_reservoir - depth + 1, window_for(plan.t)}, 0);
    config.set_guards(0, plan.window.guard);
    for (Site x = config.xmin(); x <= last_reservoir; ++x)
        config.set_infinite(x);
    return config;
}

// two-sided window; the left guard covers everything but the last `guard` sites
// before the origin. Right truncation is exact for zero range when nothing
// tagged can leave, so its guard is only needed for an empty right side.
void set_two_sided_guards(Configuration& config, const ExperimentPlan& plan, double lambda)
{
    const std::int64_t extent = -config.xmin();
    config.set_guards(std::max<std::int64_t>(0, extent - plan.window.guard), lambda > 0.0 ? 0 : plan.window.guard);
}

Window two_sided(const ExperimentPlan& plan)
{
    const std::int64_t e = window_for(plan.t);
    return Window{-e, e};
}

double finite_rho(const ExperimentPlan& plan)
{
    if (plan.rho.is_infinite())
        throw std::invalid_argument("this experiment needs a finite rho");
    return plan.rho.value();
}

}

LightConeAbort::LightConeAbort(std::size_t v, std::size_t n)
    : std::runtime_error("light-cone guard tripped in " + std::to_string(v) + " of " + std::to_string(n) +
                         " replicas"),
      violations(v), replicas(n)
{
}

std::int64_t window_for(double t, Side side)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("window_for: t must be >= 0");
    if (side == Side::ReservoirLeft)
        return 1;
    return static_cast<std::int64_t>(std::ceil(t + 6.0 * std::sqrt(t))) + 40;
}

Site second_class_position(const Configuration& config, Tag second)
{
    const auto& p = config.tagged(second);
    if (p.cls != 2)
        throw std::invalid_argument("tag " + std::to_string(second) + " is not a class-2 particle");
    return p.position;
}

std::int64_t current_past_second_class(const Configuration& config, Tag second, std::optional<Site> cap)
{
    const Site x2 = second_class_position(config, second);
    const Site hi = cap ? std::min(*cap, config.xmax()) : config.xmax();
    std::int64_t n = 0;
    for (Site x = std::max(x2, config.xmin()); x <= hi; ++x) {
        const auto& s = config.site(x);
        if (s.infinite())
            return kInfinite;
        n += s.first_class();
    }
    if (!cap)
        n += config.exited(1);
    return n;
}

InfiniteStepSample infinite_step_replica(const ExperimentPlan& plan, std::size_t replica)
{
    Configuration config = reservoir_window(plan, -1);
    const Tag second = config.place(0, 2);
    const ClockSchedule clocks(plan.master_seed, replica);
    run_tazrp_unit(config, plan.t, clocks);
    return {second_class_position(config, second), current_past_second_class(config, second),
            config.light_cone_violated()};
}

std::vector<InfiniteStepSample> sample_infinite_step(const ExperimentPlan& plan)
{
    check_horizon(plan);
    auto samples = run_replicas<InfiniteStepSample>(
        plan.replicas, [&](std::size_t r) { return infinite_step_replica(plan, r); }, plan.exec);
    std::size_t v = 0;
    for (const auto& s : samples)
        v += s.violated ? 1 : 0;
    check_violations(v, samples.size());
    return samples;
}

SpeedLawReport summarize_second_class_speed(const std::vector<InfiniteStepSample>& samples, double t)
{
    SpeedLawReport rep;
    rep.t = t;
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        if (samples[r].violated) {
            ++rep.violations;
            continue;
        }
        idx.push_back(r);
        vals.push_back(static_cast<double>(samples[r].x2) / t);
    }
    rep.x2 = compare_law(std::move(idx), std::move(vals), law_x_cdf, 0.0, 1.0);
    return rep;
}

CurrentLawReport summarize_second_class_current(const std::vector<InfiniteStepSample>& samples, double t)
{
    CurrentLawReport rep;
    rep.t = t;
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        if (samples[r].violated) {
            ++rep.violations;
            continue;
        }
        idx.push_back(r);
        vals.push_back(static_cast<double>(samples[r].j2) / t);
    }
    rep.mean = mean_estimate(vals);
    rep.mean.violations = rep.violations;
    rep.j2 = compare_law(std::move(idx), std::move(vals), law_j2_cdf, 0.0, 1.0);
    return rep;
}

SpeedLawReport exp_second_class_speed(const ExperimentPlan& plan)
{
    auto rep = summarize_second_class_speed(sample_infinite_step(plan), plan.t);
    ExperimentPlan early = plan;
    early.t = plan.t / 4.0;
    const auto trend = summarize_second_class_speed(sample_infinite_step(early), early.t);
    rep.trend_t = early.t;
    rep.trend_sup_distance = trend.x2.sup_distance;
    return rep;
}

CurrentLawReport exp_second_class_current(const ExperimentPlan& plan)
{
    return summarize_second_class_current(sample_infinite_step(plan), plan.t);
}

double stacked_weight(double rho, double lambda, std::int64_t j)
{
    const auto jj = static_cast<double>(j);
    return rho * std::pow(rho / (1.0 + rho), jj) - lambda * std::pow(lambda / (1.0 + lambda), jj);
}

double stacked_tail_bound(double rho, double lambda, std::int64_t jmax)
{
    const auto first = static_cast<double>(jmax + 1);
    return rho * (1.0 + rho) * std::pow(rho / (1.0 + rho), first) -
           lambda * (1.0 + lambda) * std::pow(lambda / (1.0 + lambda), first);
}

namespace {

struct StackedSample {
    std::vector<Site> positions;
    bool label_order_ok = true;
    bool violated = false;
};

}

StackedReport exp_stacked_weighted_sum(const ExperimentPlan& plan)
{
    check_horizon(plan);
    const double rho = finite_rho(plan);
    const double lambda = plan.lambda;
    if (!(rho > lambda))
        throw std::invalid_argument("rho must exceed lambda");
    if (plan.jmax < 0)
        throw std::invalid_argument("Jmax must be >= 0");
    const double tail = stacked_tail_bound(rho, lambda, plan.jmax);
    if (tail > kStackedTailTolerance)
        throw std::invalid_argument("truncation tail " + std::to_string(tail) + " exceeds " +
                                    std::to_string(kStackedTailTolerance) + "; increase Jmax");
    const std::int64_t count = plan.jmax + 1;

    auto samples = run_replicas<StackedSample>(
        plan.replicas,
        [&](std::size_t r) {
            Rng rng = make_rng(plan.master_seed, r, kInitDomain);
            auto stacked = build_stacked_config(rho, lambda, count, two_sided(plan), rng);
            set_two_sided_guards(stacked.config, plan, lambda);
            StackedSample s;
            auto ordered = [&](double, const Configuration& c) {
                for (std::size_t j = 1; j < stacked.labels.size(); ++j)
                    if (c.tagged(stacked.labels[j - 1]).position < c.tagged(stacked.labels[j]).position)
                        s.label_order_ok = false;
            };
            Observers obs;
            obs.times = {plan.t / 4.0, plan.t / 2.0, 3.0 * plan.t / 4.0, plan.t};
            obs.on_snapshot = ordered;
            const ClockSchedule clocks(plan.master_seed, r);
            run_tazrp_unit(stacked.config, plan.t, clocks, obs);
            for (Tag tag : stacked.labels)
                s.positions.push_back(stacked.config.tagged(tag).position);
            s.violated = stacked.config.light_cone_violated();
            return s;
        },
        plan.exec);

    StackedReport rep;
    rep.replicas = samples.size();
    std::vector<double> weights;
    for (std::int64_t j = 0; j < count; ++j)
        weights.push_back(stacked_weight(rho, lambda, j));
    for (const auto& s : samples) {
        rep.violations += s.violated ? 1 : 0;
        rep.label_order_violations += s.label_order_ok ? 0 : 1;
    }
    check_violations(rep.violations, samples.size());
    for (double u : plan.u_grid) {
        std::vector<double> sums;
        for (const auto& s : samples) {
            if (s.violated)
                continue;
            double sum = 0.0;
            for (std::size_t j = 0; j < s.positions.size(); ++j)
                if (static_cast<double>(s.positions[j]) >= u * plan.t)
                    sum += weights[j];
            sums.push_back(sum);
        }
        const Estimate e = mean_estimate(sums);
        rep.rows.push_back({u, e.point, weighted_sum_limit(u, rho, lambda), tail, e.std_error});
    }
    return rep;
}

namespace {

struct PerturbedSample {
    Site x2 = 0;
    Site front = 0;
    std::int64_t j2 = 0;
    Site front_start = 0;
    bool violated = false;
};

}

PerturbedReport exp_perturbed_step(const ExperimentPlan& plan)
{
    check_horizon(plan);
    const double rho = finite_rho(plan);
    const double lambda = plan.lambda;
    if (!(rho > lambda))
        throw std::invalid_argument("rho must exceed lambda");
    if (rho - lambda > 1.0)
        throw std::invalid_argument("rho-lambda <= 1 required");

    auto samples = run_replicas<PerturbedSample>(
        plan.replicas,
        [&](std::size_t r) {
            Rng rng = make_rng(plan.master_seed, r, kInitDomain);
            auto p = build_perturbed_config(rho, lambda, two_sided(plan), rng);
            set_two_sided_guards(p.config, plan, lambda);
            const ClockSchedule clocks(plan.master_seed, r);
            run_tazrp_unit(p.config, plan.t, clocks);
            PerturbedSample s;
            s.x2 = second_class_position(p.config, p.second_class);
            s.front = p.config.tagged(p.front).position;
            s.front_start = p.front_start;
            s.violated = p.config.light_cone_violated();
            s.j2 = s.violated ? 0 : current_past_second_class(p.config, p.second_class, s.front);
            return s;
        },
        plan.exec);

    PerturbedReport rep;
    rep.t = plan.t;
    std::vector<std::size_t> idx;
    std::vector<double> x2;
    double gap = 0.0;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const auto& s = samples[r];
        if (s.violated) {
            ++rep.violations;
            continue;
        }
        idx.push_back(r);
        x2.push_back(static_cast<double>(s.x2) / plan.t);
        rep.j2_values.push_back(static_cast<double>(s.j2) / plan.t);
        rep.front_values.push_back(static_cast<double>(s.front) / plan.t);
        gap += static_cast<double>(-1 - s.front_start);
    }
    check_violations(rep.violations, samples.size());
    rep.mean_front_gap = idx.empty() ? 0.0 : gap / static_cast<double>(idx.size());
    const Flux zr = Flux::zero_range();
    rep.x2 = compare_law(
        std::move(idx), std::move(x2), [&](double u) { return law_z_cdf(u, rho, lambda); }, zr.phi_prime(rho),
        zr.phi_prime(lambda));
    rep.j2_mean = mean_estimate(rep.j2_values);
    rep.j2_reference = perturbed_mean_current(rho, lambda);
    rep.front_speed = mean_estimate(rep.front_values);
    rep.front_reference = 1.0 / (1.0 + lambda);
    return rep;
}

namespace {

struct CrossingSample {
    Site x2 = 0;
    Site x3 = 0;
    bool violated = false;
};

std::vector<CrossingSample> sample_crossing(const ExperimentPlan& plan)
{
    return run_replicas<CrossingSample>(
        plan.replicas,
        [&](std::size_t r) {
            Configuration config = reservoir_window(plan, -1);
            const Tag second = config.place(0, 2);
            const Tag third = config.place(1, 3);
            const ClockSchedule clocks(plan.master_seed, r);
            run_tazrp_unit(config, plan.t, clocks);
            return CrossingSample{config.tagged(second).position, config.tagged(third).position,
                                  config.light_cone_violated()};
        },
        plan.exec);
}

}

CrossingReport exp_crossing(const ExperimentPlan& plan)
{
    check_horizon(plan);
    auto tally = [](const std::vector<CrossingSample>& samples, std::vector<double>& over, std::vector<double>& caught,
                    std::size_t& ties, std::size_t& violations) {
        for (const auto& s : samples) {
            if (s.violated) {
                ++violations;
                continue;
            }
            over.push_back(s.x2 > s.x3 ? 1.0 : 0.0);
            caught.push_back(s.x2 >= s.x3 ? 1.0 : 0.0);
            ties += s.x2 == s.x3 ? 1 : 0;
        }
    };
    CrossingReport rep;
    rep.t = plan.t;
    const auto samples = sample_crossing(plan);
    std::vector<double> over;
    std::vector<double> caught;
    std::size_t ties = 0;
    tally(samples, over, caught, ties, rep.violations);
    check_violations(rep.violations, samples.size());
    rep.overtaken = mean_estimate(over);
    rep.overtaken.violations = rep.violations;
    rep.caught_up = mean_estimate(caught);
    rep.caught_up.violations = rep.violations;
    rep.tie_fraction = over.empty() ? 0.0 : static_cast<double>(ties) / static_cast<double>(over.size());
    for (std::size_t r = 0; r < samples.size(); ++r)
        if (!samples[r].violated) {
            rep.replica.push_back(r);
            rep.positions.emplace_back(samples[r].x2, samples[r].x3);
        }

    ExperimentPlan early = plan;
    early.t = plan.t / 2.0;
    const auto early_samples = sample_crossing(early);
    std::vector<double> early_over;
    std::vector<double> early_caught;
    std::size_t early_ties = 0;
    std::size_t early_violations = 0;
    tally(early_samples, early_over, early_caught, early_ties, early_violations);
    check_violations(early_violations, early_samples.size());
    rep.trend_t = early.t;
    rep.trend_tie_fraction =
        early_over.empty() ? 0.0 : static_cast<double>(early_ties) / static_cast<double>(early_over.size());
    return rep;
}

namespace {

struct LocalEqSample {
    std::vector<std::int64_t> counts;
    bool violated = false;
};

}

LocalEqReport exp_local_equilibrium(const ExperimentPlan& plan)
{
    check_horizon(plan);
    const double lambda = plan.lambda;
    if (!(plan.rho > Density(lambda)))
        throw std::invalid_argument("rho must exceed lambda");
    std::vector<Site> sites;
    for (double u : plan.u_grid)
        sites.push_back(static_cast<Site>(std::floor(u * plan.t)));

    auto samples = run_replicas<LocalEqSample>(
        plan.replicas,
        [&](std::size_t r) {
            std::optional<Configuration> config;
            Rng rng = make_rng(plan.master_seed, r, kInitDomain);
            if (plan.rho.is_infinite()) {
                config.emplace(reservoir_window(plan, 0));
                if (lambda > 0.0) {
                    config->set_guards(0, 0);
                    for (Site x = 1; x <= config->xmax(); ++x)
                        config->add_first_class(x, sample_geometric(lambda, rng));
                }
            } else {
                StepMeasureSpec spec{plan.rho, lambda, MeasureKind::ZeroRangeGeometric};
                config.emplace(sample_step_measure(spec, two_sided(plan), rng));
                set_two_sided_guards(*config, plan, lambda);
            }
            const ClockSchedule clocks(plan.master_seed, r);
            run_tazrp_unit(*config, plan.t, clocks);
            LocalEqSample s;
            for (Site x : sites)
                s.counts.push_back(config->contains(x) ? config->site(x).total() : 0);
            s.violated = config->light_cone_violated();
            return s;
        },
        plan.exec);

    LocalEqReport rep;
    for (const auto& s : samples)
        rep.violations += s.violated ? 1 : 0;
    check_violations(rep.violations, samples.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        std::vector<double> ind;
        std::vector<double> dens;
        for (const auto& s : samples) {
            if (s.violated)
                continue;
            const std::int64_t c = s.counts[i];
            ind.push_back(c >= 1 ? 1.0 : 0.0);
            dens.push_back(c == kInfinite ? std::numeric_limits<double>::infinity() : static_cast<double>(c));
        }
        LocalEqRow row;
        row.u = plan.u_grid[i];
        row.site = sites[i];
        row.indicator = mean_estimate(ind);
        row.density = mean_estimate(dens);
        const Density limit = entropy_solution(1.0, row.u, plan.rho, lambda);
        row.indicator_reference = phi(limit);
        row.density_reference = limit.is_infinite() ? std::numeric_limits<double>::infinity() : limit.value();
        rep.rows.push_back(row);
    }
    return rep;
}

LawComparison sample_tasep_second_class(const ExperimentPlan& plan, std::size_t& violations)
{
    check_horizon(plan);
    const double rho = finite_rho(plan);
    const double lambda = plan.lambda;
    StepMeasureSpec spec{rho, lambda, MeasureKind::ExclusionBernoulli};
    spec.validate();
    if (rho < lambda)
        throw std::invalid_argument("rho must be >= lambda");
    const std::int64_t e = window_for(2.0 * plan.t);
    struct Sample {
        Site y2 = 0;
        bool violated = false;
    };
    auto samples = run_replicas<Sample>(
        plan.replicas,
        [&](std::size_t r) {
            Rng rng = make_rng(plan.master_seed, r, kInitDomain);
            Configuration config = sample_step_measure(spec, Window{-e, e}, rng);
            config.set_guards(plan.window.guard, 0);
            config.clear_site(0);
            const Tag second = config.place(0, 2);
            const ClockSchedule clocks(plan.master_seed, r);
            run_tasep(config, plan.t, clocks);
            return Sample{config.tagged(second).position, config.light_cone_violated()};
        },
        plan.exec);
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    violations = 0;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        if (samples[r].violated) {
            ++violations;
            continue;
        }
        idx.push_back(r);
        vals.push_back(static_cast<double>(samples[r].y2) / plan.t);
    }
    check_violations(violations, samples.size());
    const double lo = 1.0 - 2.0 * rho;
    const double hi = 1.0 - 2.0 * lambda;
    return compare_law(
        std::move(idx), std::move(vals), [=](double u) { return uniform_cdf(u, lo, hi); }, lo, hi);
}

TasepReport exp_tasep_second_class(const ExperimentPlan& plan)
{
    TasepReport rep;
    rep.t = plan.t;
    rep.y2 = sample_tasep_second_class(plan, rep.violations);
    rep.lo = 1.0 - 2.0 * finite_rho(plan);
    rep.hi = 1.0 - 2.0 * plan.lambda;
    return rep;
}

namespace {

struct RingSample {
    double occupancy = 0.0;
    double indicator = 0.0;
};

StationarityReport ring_report(const std::vector<RingSample>& samples, double occ_ref, double ind_ref)
{
    StationarityReport rep;
    for (const auto& s : samples) {
        rep.occupancy_values.push_back(s.occupancy);
        rep.indicator_values.push_back(s.indicator);
    }
    rep.occupancy = mean_estimate(rep.occupancy_values);
    rep.indicator = mean_estimate(rep.indicator_values);
    rep.occupancy_reference = occ_ref;
    rep.indicator_reference = ind_ref;
    return rep;
}

std::vector<double> unit_times(double t)
{
    std::vector<double> times;
    for (double s = 1.0; s <= t; s += 1.0)
        times.push_back(s);
    return times;
}

}

StationarityReport exp_ring_stationarity(const ExperimentPlan& plan)
{
    check_horizon(plan);
    const double rho = finite_rho(plan);
    if (plan.ring_size < 2)
        throw std::invalid_argument("ring needs at least 2 sites");
    const auto times = unit_times(plan.t);
    auto samples = run_replicas<RingSample>(
        plan.replicas,
        [&](std::size_t r) {
            Rng rng = make_rng(plan.master_seed, r, kInitDomain);
            Configuration config(Window{0, plan.ring_size - 1}, 0);
            config.set_periodic(true);
            for (Site x = 0; x < plan.ring_size; ++x)
                config.add_first_class(x, sample_geometric(rho, rng));
            RingSample s;
            Observers obs;
            obs.times = times;
            obs.on_snapshot = [&](double, const Configuration& c) {
                const auto n = c.site(0).total();
                s.occupancy += static_cast<double>(n);
                s.indicator += n >= 1 ? 1.0 : 0.0;
            };
            const ClockSchedule clocks(plan.master_seed, r);
            run_tazrp_unit(config, plan.t, clocks, obs);
            s.occupancy /= static_cast<double>(times.size());
            s.indicator /= static_cast<double>(times.size());
            return s;
        },
        plan.exec);
    return ring_report(samples, rho, phi(rho));
}

StationarityReport exp_tasep_ring_stationarity(const ExperimentPlan& plan)
{
    check_horizon(plan);
    const double alpha = finite_rho(plan);
    if (alpha > 1.0)
        throw std::invalid_argument("exclusion density must lie in [0,1]");
    const auto times = unit_times(plan.t);
    auto samples = run_replicas<RingSample>(
        plan.replicas,
        [&](std::size_t r) {
            Rng rng = make_rng(plan.master_seed, r, kInitDomain);
            Configuration config(Window{0, plan.ring_size - 1}, 0);
            config.set_periodic(true);
            for (Site x = 0; x < plan.ring_size; ++x)
                config.add_first_class(x, sample_bernoulli(alpha, rng) ? 1 : 0);
            RingSample s;
            Observers obs;
            obs.times = times;
            obs.on_snapshot = [&](double, const Configuration& c) {
                const double n = static_cast<double>(c.site(0).total());
                s.occupancy += n;
                s.indicator += n;
            };
            const ClockSchedule clocks(plan.master_seed, r);
            run_tasep(config, plan.t, clocks, obs);
            s.occupancy /= static_cast<double>(times.size());
            s.indicator /= static_cast<double>(times.size());
            return s;
        },
        plan.exec);
    return ring_report(samples, alpha, alpha);
}

}
