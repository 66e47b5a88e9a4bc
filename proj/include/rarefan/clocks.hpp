#pragma once

#include <cstdint>
#include <random>

namespace rarefan {

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b)
{
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// 53-bit uniform on [0,1)
constexpr double to_unit(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(Rng& rng) { return to_unit(rng()); }

// uniform on (0,1]
inline double uniform_open0(Rng& rng) { return 1.0 - to_unit(rng()); }

// Independent streams for initial-state sampling; `domain` separates uses
// within one replica.
Rng make_rng(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t domain);

// Per-site unit-rate Poisson clocks. A site's ring times are a pure function
// of (master seed, replica, key): time is cut into unit blocks, block k holds
// a Poisson(1) number of rings at k + sorted uniforms, each block drawn from
// its own hash. Any ring can be located without replaying earlier ones.
class ClockSchedule {
public:
    ClockSchedule(std::uint64_t master_seed, std::uint64_t replica);

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t replica() const { return replica_; }

    // first ring of `key` strictly after `time` (time >= 0)
    double next_ring_after(std::int64_t key, double time) const;

    class Stream {
    public:
        double next()
        {
            last_ = owner_->next_ring_after(key_, last_);
            return last_;
        }
    private:
        friend class ClockSchedule;
        Stream(const ClockSchedule* owner, std::int64_t key) : owner_(owner), key_(key) {}
        const ClockSchedule* owner_;
        std::int64_t key_;
        double last_ = 0.0;
    };

    // successive rings of one key; the n-th call returns the n-th ring time
    Stream stream(std::int64_t key) const { return Stream(this, key); }

private:
    std::uint64_t key_hash(std::int64_t key) const;

    std::uint64_t seed_;
    std::uint64_t replica_;
    std::uint64_t base_;
};

}
