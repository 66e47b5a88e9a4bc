#include "rarefan/initial_measures.hpp"

#include <cmath>
#include <stdexcept>

namespace rarefan {

void StepMeasureSpec::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be finite and >= 0");
    if (kind == MeasureKind::ExclusionBernoulli) {
        if (rho.is_infinite() || rho.value() > 1.0 || lambda > 1.0)
            throw std::invalid_argument("exclusion densities must lie in [0,1]");
    }
}

std::int64_t sample_geometric(double rho, Rng& rng)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("sample_geometric: rho must be finite and >= 0");
    const double u = uniform_open0(rng);
    if (rho == 0.0)
        return 0;
    const double q = rho / (1.0 + rho);
    return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(q)));
}

bool sample_bernoulli(double p, Rng& rng)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("sample_bernoulli: p must lie in [0,1]");
    return uniform01(rng) < p;
}

Configuration sample_step_measure(const StepMeasureSpec& spec, Window window, Rng& rng, std::int64_t guard_width)
{
    spec.validate();
    if (!window.contains(0))
        throw std::invalid_argument("step measure window must contain the origin");
    Configuration config(window, guard_width);
    for (Site x = window.xmin; x <= window.xmax; ++x) {
        const bool left = x <= 0;
        if (left && spec.rho.is_infinite()) {
            uniform01(rng);
            config.set_infinite(x);
            continue;
        }
        const double d = left ? spec.rho.value() : spec.lambda;
        std::int64_t n = 0;
        if (spec.kind == MeasureKind::ZeroRangeGeometric)
            n = sample_geometric(d, rng);
        else
            n = sample_bernoulli(d, rng) ? 1 : 0;
        config.add_first_class(x, n);
    }
    return config;
}

StackedConfig build_stacked_config(double rho, double lambda, std::int64_t count, Window window, Rng& rng,
                                   std::int64_t guard_width)
{
    if (count < 1)
        throw std::invalid_argument("need at least one class-2 particle");
    if (!(rho > lambda))
        throw std::invalid_argument("rho must exceed lambda");
    StepMeasureSpec spec{rho, lambda, MeasureKind::ZeroRangeGeometric};
    StackedConfig out{sample_step_measure(spec, window, rng, guard_width), {}};
    out.config.clear_site(0);
    for (std::int64_t k = 0; k < count; ++k)
        out.labels.push_back(out.config.place(0, 2));
    return out;
}

PerturbedConfig build_perturbed_config(double rho, double lambda, Window window, Rng& rng, std::int64_t guard_width)
{
    if (!(lambda >= 0.0 && rho > lambda && std::isfinite(rho)))
        throw std::invalid_argument("rho must exceed lambda");
    if (rho - lambda > 1.0)
        throw std::invalid_argument("rho-lambda <= 1 required");
    if (!window.contains(-1) || !window.contains(0))
        throw std::invalid_argument("window must contain sites -1 and 0");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(window.size()));
    for (Site x = window.xmin; x <= window.xmax; ++x) {
        std::int64_t n = sample_geometric(lambda, rng);
        if (x <= -1)
            n += sample_bernoulli(rho - lambda, rng) ? 1 : 0;
        counts[static_cast<std::size_t>(x - window.xmin)] = n;
    }
    Site front = 0;
    for (Site x = -1; x >= window.xmin; --x)
        if (counts[static_cast<std::size_t>(x - window.xmin)] > 0) {
            front = x;
            break;
        }
    if (front == 0)
        throw std::runtime_error("no occupied site left of the origin; widen the window");
    PerturbedConfig out{Configuration(window, guard_width), kAnonymous, kAnonymous, front};
    for (Site x = window.xmin; x <= window.xmax; ++x) {
        std::int64_t n = counts[static_cast<std::size_t>(x - window.xmin)];
        if (x == front) {
            out.front = out.config.place(x, 1);
            --n;
        }
        out.config.add_first_class(x, n);
    }
    out.second_class = out.config.place(0, 2);
    return out;
}

CrossingConfig build_crossing_config(Window window, std::int64_t guard_width)
{
    if (!window.contains(-1) || !window.contains(1))
        throw std::invalid_argument("window must contain [-1, 1]");
    CrossingConfig out{Configuration(window, guard_width), kAnonymous, kAnonymous};
    for (Site x = window.xmin; x <= -1; ++x)
        out.config.set_infinite(x);
    out.second = out.config.place(0, 2);
    out.third = out.config.place(1, 3);
    return out;
}

double discrepancy_mass(double rho, double lambda, std::int64_t k)
{
    if (k < 1)
        throw std::invalid_argument("discrepancy_mass: k must be >= 1");
    const double a = rho / (1.0 + rho);
    const double b = lambda / (1.0 + lambda);
    const auto kk = static_cast<double>(k);
    return (std::pow(a, kk) - std::pow(b, kk)) / (1.0 + rho + lambda);
}

double tail_mass(double rho, double lambda, std::int64_t j)
{
    if (j < 1)
        throw std::invalid_argument("tail_mass: j must be >= 1");
    const auto jj = static_cast<double>(j);
    const double left = rho * std::pow(rho / (1.0 + rho), jj - 1.0);
    const double right = lambda * std::pow(lambda / (1.0 + lambda), jj - 1.0);
    return (left - right) / (1.0 + rho + lambda);
}

}
