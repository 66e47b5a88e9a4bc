#include "rarefan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rarefan {

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples))
{
    for (double v : sorted_)
        if (std::isnan(v))
            throw std::invalid_argument("EmpiricalCDF: NaN sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const
{
    if (sorted_.empty())
        return 0.0;
    const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::below(double x) const
{
    if (sorted_.empty())
        return 0.0;
    const auto k = std::lower_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::quantile(double p) const
{
    if (sorted_.empty())
        throw std::logic_error("quantile of an empty sample");
    p = std::clamp(p, 0.0, 1.0);
    auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted_.size())));
    k = std::clamp<std::size_t>(k, 1, sorted_.size());
    return sorted_[k - 1];
}

double EmpiricalCDF::sup_distance(const std::function<double(double)>& cdf) const
{
    const double n = static_cast<double>(sorted_.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted_.size()) {
        std::size_t j = i;
        while (j < sorted_.size() && sorted_[j] == sorted_[i])
            ++j;
        const double f = cdf(sorted_[i]);
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
        d = std::max(d, std::abs(static_cast<double>(j) / n - f));
        i = j;
    }
    return d;
}

std::vector<std::pair<double, double>> EmpiricalCDF::deviation_profile(const std::function<double(double)>& cdf,
                                                                       const std::vector<double>& grid) const
{
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double u : grid)
        out.emplace_back(u, (*this)(u) - cdf(u));
    return out;
}

Estimate mean_estimate(const std::vector<double>& values)
{
    Estimate e;
    e.n = values.size();
    if (values.empty())
        return e;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    e.point = sum / static_cast<double>(e.n);
    if (e.n > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - e.point) * (v - e.point);
        e.std_error = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
    }
    return e;
}

std::size_t dkw_sample_size(double epsilon, double delta)
{
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("dkw_sample_size: need 0 < epsilon < 1 and 0 < delta <= 1");
    const double n = std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon));
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

double dkw_radius(std::size_t n, double delta)
{
    if (n == 0)
        return 1.0;
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points)
{
    std::vector<double> out;
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < points; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    return out;
}

}
