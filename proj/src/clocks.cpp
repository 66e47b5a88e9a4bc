#include "rarefan/clocks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rarefan {

namespace {

// Poisson(1) by inverse CDF
int poisson_one(double u)
{
    double p = std::exp(-1.0);
    double cdf = p;
    int k = 0;
    while (u >= cdf && k < 64) {
        ++k;
        p /= k;
        cdf += p;
    }
    return k;
}

constexpr std::uint64_t kBlockSalt = 0xd1b54a32d192ed03ULL;

}

Rng make_rng(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t domain)
{
    std::uint64_t h = combine(combine(mix64(master_seed), replica), domain ^ 0x5851f42d4c957f2dULL);
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

ClockSchedule::ClockSchedule(std::uint64_t master_seed, std::uint64_t replica)
    : seed_(master_seed), replica_(replica), base_(combine(mix64(master_seed ^ 0x243f6a8885a308d3ULL), replica))
{
}

std::uint64_t ClockSchedule::key_hash(std::int64_t key) const
{
    return combine(base_, static_cast<std::uint64_t>(key));
}

double ClockSchedule::next_ring_after(std::int64_t key, double time) const
{
    if (!(time >= 0.0))
        throw std::invalid_argument("next_ring_after: time must be >= 0");
    const std::uint64_t kh = key_hash(key);
    auto block = static_cast<std::int64_t>(std::floor(time));
    std::array<double, 16> small;
    std::vector<double> large;
    for (;; ++block) {
        const std::uint64_t bh = combine(kh, static_cast<std::uint64_t>(block) * kBlockSalt);
        const int n = poisson_one(to_unit(mix64(bh)));
        if (n == 0)
            continue;
        double* rings = small.data();
        if (n > static_cast<int>(small.size())) {
            large.resize(n);
            rings = large.data();
        }
        for (int i = 0; i < n; ++i)
            rings[i] = static_cast<double>(block) + to_unit(mix64(bh + static_cast<std::uint64_t>(i + 1) * 0x9e3779b97f4a7c15ULL));
        std::sort(rings, rings + n);
        for (int i = 0; i < n; ++i)
            if (rings[i] > time)
                return rings[i];
    }
}

}
