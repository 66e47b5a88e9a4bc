#include <doctest.h>

#include <rarefan/clocks.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace rarefan;

TEST_CASE("ring times are a pure function of seed, replica and key")
{
    const ClockSchedule a(42, 7);
    const ClockSchedule b(42, 7);
    const ClockSchedule c(42, 8);
    int same_replica = 0;
    int other_replica = 0;
    for (std::int64_t key = -50; key < 50; ++key) {
        same_replica += a.next_ring_after(key, 3.25) == b.next_ring_after(key, 3.25);
        other_replica += a.next_ring_after(key, 3.25) == c.next_ring_after(key, 3.25);
    }
    CHECK(same_replica == 100);
    CHECK(other_replica == 0);
}

TEST_CASE("next ring is strictly later and stream replays it")
{
    const ClockSchedule clocks(1, 0);
    auto s = clocks.stream(12);
    double last = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double r = s.next();
        CHECK(r > last);
        CHECK(r == clocks.next_ring_after(12, last));
        // asking from any point between two rings gives the later one
        CHECK(clocks.next_ring_after(12, 0.5 * (last + r)) == r);
        last = r;
    }
    CHECK_THROWS_AS(clocks.next_ring_after(0, -1.0), std::invalid_argument);
}

TEST_CASE("counts over [0,T] have Poisson(T) mean and variance")
{
    const ClockSchedule clocks(99, 3);
    const double horizon = 50.0;
    const int keys = 2000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int k = 0; k < keys; ++k) {
        auto s = clocks.stream(k);
        int n = 0;
        while (s.next() <= horizon)
            ++n;
        sum += n;
        sumsq += static_cast<double>(n) * n;
    }
    const double mean = sum / keys;
    const double var = sumsq / keys - mean * mean;
    // mean has stderr sqrt(50/2000) ~ 0.16
    CHECK(std::abs(mean - horizon) < 0.8);
    // sample variance of Poisson(50) has stderr ~ 50*sqrt(2/2000) ~ 1.6
    CHECK(std::abs(var - horizon) < 8.0);
}

TEST_CASE("gaps between rings are Exp(1)")
{
    const ClockSchedule clocks(5, 0);
    std::vector<double> gaps;
    for (int k = 0; k < 40; ++k) {
        auto s = clocks.stream(k);
        double prev = 0.0;
        for (int i = 0; i < 250; ++i) {
            const double r = s.next();
            gaps.push_back(r - prev);
            prev = r;
        }
    }
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double f = 1.0 - std::exp(-gaps[i]);
        sup = std::max({sup, std::abs((i + 1) / n - f), std::abs(i / n - f)});
    }
    // KS critical value at level 1e-3 is about 1.95/sqrt(n)
    CHECK(sup < 1.95 / std::sqrt(n));
}

TEST_CASE("neighbouring keys are uncorrelated")
{
    const ClockSchedule clocks(17, 2);
    const int keys = 4000;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int k = 0; k < keys; ++k) {
        const double x = clocks.next_ring_after(k, 0.0);
        const double y = clocks.next_ring_after(k + 1, 0.0);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / keys - (sx / keys) * (sy / keys);
    const double corr = cov / std::sqrt((sxx / keys - sx * sx / keys / keys) * (syy / keys - sy * sy / keys / keys));
    // lag-1 overlap of the pairs makes them weakly dependent only through sharing y_k = x_{k+1}
    CHECK(std::abs(corr) < 0.06);
}

TEST_CASE("first ring after zero has mean one")
{
    const ClockSchedule clocks(8, 8);
    double sum = 0.0;
    const int keys = 20000;
    for (int k = 0; k < keys; ++k)
        sum += clocks.next_ring_after(k, 0.0);
    CHECK(std::abs(sum / keys - 1.0) < 0.03);
}

TEST_CASE("init streams differ by domain and replica")
{
    Rng a = make_rng(1, 0, 1);
    Rng b = make_rng(1, 0, 2);
    Rng c = make_rng(1, 1, 1);
    Rng d = make_rng(1, 0, 1);
    const auto va = a();
    CHECK(va != b());
    CHECK(va != c());
    CHECK(va == d());
    Rng e = make_rng(1, 0, 1);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform_open0(e);
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}
