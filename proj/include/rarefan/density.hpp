#pragma once

#include <limits>
#include <stdexcept>

namespace rarefan {

// A particle density that may be infinite (the reservoir state).
class Density {
public:
    constexpr Density(double value) : value_(value), infinite_(false)
    {
        if (!(value >= 0.0) || value == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("density must be finite and >= 0; use Density::infinite()");
    }

    static constexpr Density infinite() { return Density(); }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr double value() const
    {
        if (infinite_)
            throw std::domain_error("infinite density has no finite value");
        return value_;
    }

    constexpr bool operator==(const Density&) const = default;

    // strict order with infinity on top
    friend constexpr bool operator<(const Density& a, const Density& b)
    {
        if (a.infinite_)
            return false;
        return b.infinite_ || a.value_ < b.value_;
    }
    friend constexpr bool operator>(const Density& a, const Density& b) { return b < a; }

private:
    constexpr Density() : value_(0.0), infinite_(true) {}

    double value_;
    bool infinite_;
};

}
