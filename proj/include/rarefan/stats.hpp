#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace rarefan {

class EmpiricalCDF {
public:
    EmpiricalCDF() = default;
    explicit EmpiricalCDF(std::vector<double> samples);

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

    // fraction of samples <= x
    double operator()(double x) const;
    // fraction of samples < x
    double below(double x) const;
    double quantile(double p) const;

    // sup_x |F_N(x) - F(x)| for a continuous F, checking both sides of every jump
    double sup_distance(const std::function<double(double)>& cdf) const;
    // (u, F_N(u) - F(u)) on a grid
    std::vector<std::pair<double, double>> deviation_profile(const std::function<double(double)>& cdf,
                                                             const std::vector<double>& grid) const;

private:
    std::vector<double> sorted_;
};

struct Estimate {
    double point = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::size_t violations = 0;
};

// sample mean with the standard error of the mean
Estimate mean_estimate(const std::vector<double>& values);

// ceil(ln(2/delta) / (2 eps^2)), at least 1
std::size_t dkw_sample_size(double epsilon, double delta);
// sup-distance radius guaranteed with probability 1 - delta for n samples
double dkw_radius(std::size_t n, double delta);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

}
