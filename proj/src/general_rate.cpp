#include "rarefan/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rarefan {

void RateFunction::validate() const
{
    if (!g)
        throw std::invalid_argument("rate function missing");
    if (g(0) != 0.0)
        throw std::invalid_argument("rate function needs g(0) = 0");
    if (!(increment_bound > 0.0) || !std::isfinite(increment_bound))
        throw std::invalid_argument("increment bound must be positive and finite");
    double prev = 0.0;
    for (std::int64_t k = 1; k <= checked_prefix; ++k) {
        const double v = g(k);
        if (!(v > 0.0))
            throw std::invalid_argument("rate function needs g(k) > 0 for k >= 1, fails at k=" + std::to_string(k));
        if (v < prev)
            throw std::invalid_argument("rate function must be non-decreasing, fails at k=" + std::to_string(k));
        if (v - prev > increment_bound * (1.0 + 1e-12))
            throw std::invalid_argument("rate increment exceeds declared bound at k=" + std::to_string(k));
        prev = v;
    }
}

RateFunction RateFunction::unit()
{
    return {[](std::int64_t k) { return k >= 1 ? 1.0 : 0.0; }, 1.0, 256};
}

RateFunction RateFunction::linear()
{
    return {[](std::int64_t k) { return static_cast<double>(k); }, 1.0, 256};
}

namespace {

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0), raw_(n, 0.0) {}

    void set(std::size_t i, double v)
    {
        const double delta = v - raw_[i];
        raw_[i] = v;
        for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1))
            tree_[k] += delta;
    }

    double total() const
    {
        double s = 0.0;
        for (double v : raw_)
            s += v;
        return s;
    }

    // smallest i with prefix sum through i > target
    std::size_t find(double target) const
    {
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 < tree_.size())
            step *= 2;
        for (; step > 0; step /= 2) {
            if (pos + step < tree_.size() && tree_[pos + step] <= target) {
                pos += step;
                target -= tree_[pos];
            }
        }
        if (pos >= raw_.size())
            pos = raw_.size() - 1;
        while (raw_[pos] == 0.0 && pos > 0)
            --pos;
        return pos;
    }

    void rebuild()
    {
        std::fill(tree_.begin(), tree_.end(), 0.0);
        for (std::size_t i = 0; i < raw_.size(); ++i)
            for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1))
                tree_[k] += raw_[i];
    }

    double raw(std::size_t i) const { return raw_[i]; }

private:
    std::vector<double> tree_;
    std::vector<double> raw_;
};

}

RunStats run_tazrp_general_g(Configuration& config, double until, const RateFunction& g, Rng& rng,
                             const Observers& observers)
{
    g.validate();
    if (!(until >= 0.0))
        throw std::invalid_argument("run horizon must be >= 0");
    const Site xmin = config.xmin();
    const auto n = static_cast<std::size_t>(config.window().size());
    Fenwick rates(n);
    std::int64_t particles = 0;
    for (Site x = config.xmin(); x <= config.xmax(); ++x) {
        const auto& s = config.site(x);
        if (s.infinite())
            throw std::invalid_argument("general-rate dynamics needs finite occupancies");
        for (const auto& o : s.occupants())
            if (o.cls != 1)
                throw std::invalid_argument("general-rate dynamics is single-class");
        particles += s.total();
        rates.set(static_cast<std::size_t>(x - xmin), g.g(s.total()));
    }
    const double rate_cap = g.increment_bound * static_cast<double>(particles) + g.g(1) * static_cast<double>(n);

    std::vector<double> times = observers.times;
    std::sort(times.begin(), times.end());
    std::size_t next_obs = 0;
    double now = 0.0;
    RunStats stats;
    std::int64_t since_rebuild = 0;
    for (;;) {
        const double total = rates.total();
        if (!std::isfinite(total) || total > rate_cap * (1.0 + 1e-9))
            throw std::overflow_error("total jump rate exceeds the declared bound");
        double next = total > 0.0 ? now - std::log(uniform_open0(rng)) / total : until + 1.0;
        while (next_obs < times.size() && times[next_obs] <= until && times[next_obs] < next) {
            if (observers.on_snapshot)
                observers.on_snapshot(times[next_obs], config);
            ++next_obs;
        }
        if (next > until)
            break;
        now = next;
        const std::size_t i = rates.find(uniform01(rng) * total);
        const Site x = xmin + static_cast<Site>(i);
        const Occupant occ = *config.pop_next_jumper(x);
        ++stats.jumps;
        if (observers.log)
            observers.log->push_back({now, x, occ.cls, occ.tag});
        rates.set(i, g.g(config.site(x).total()));
        Site dest = x + 1;
        if (dest > config.xmax() && config.periodic())
            dest = xmin;
        if (dest > config.xmax()) {
            config.record_exit(occ);
        } else {
            config.push_arrival(dest, occ);
            rates.set(static_cast<std::size_t>(dest - xmin), g.g(config.site(dest).total()));
        }
        if (++since_rebuild == 4096) {
            rates.rebuild();
            since_rebuild = 0;
        }
    }
    stats.light_cone_violated = config.light_cone_violated();
    return stats;
}

namespace {

// sum_k f(k) q^k (1-q), stopping once tail(K, q^{K+1}) bounds the rest below 1e-12
template <class F, class Tail>
double geometric_series(double q, const F& f, const Tail& tail)
{
    if (1.0 - q < 1e-6)
        throw std::overflow_error("series for the mean rate does not converge numerically at this density");
    double sum = 0.0;
    double qk = 1.0;
    for (std::int64_t k = 0; k < 50'000'000; ++k) {
        sum += f(k) * qk * (1.0 - q);
        qk *= q;
        if (!std::isfinite(sum))
            break;
        if (tail(k, qk) < 1e-12)
            return sum;
    }
    throw std::overflow_error("series for the mean rate does not converge numerically at this density");
}

}

double g_tilde(double rho, const RateFunction& g)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("g_tilde: rho must be finite and >= 0");
    if (rho == 0.0)
        return 0.0;
    const double q = rho / (1.0 + rho);
    const double L = g.increment_bound;
    // g(k) <= g(K) + (k-K) L for k > K
    auto tail = [&](std::int64_t k, double qk1) { return qk1 * (g.g(k) + L / (1.0 - q)); };
    return geometric_series(q, g.g, tail);
}

double g_tilde_prime(double rho, const RateFunction& g)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("g_tilde_prime: rho must be finite and >= 0");
    // g_tilde = sum_k (g(k+1) - g(k)) q^{k+1} and dq/drho = (1-q)^2
    const double q = rho / (1.0 + rho);
    const double L = g.increment_bound;
    auto f = [&](std::int64_t k) { return static_cast<double>(k + 1) * (g.g(k + 1) - g.g(k)); };
    auto tail = [&](std::int64_t k, double qk1) {
        return L * qk1 * (static_cast<double>(k + 2) + q / (1.0 - q));
    };
    return (1.0 - q) * geometric_series(q, f, tail);
}

}
