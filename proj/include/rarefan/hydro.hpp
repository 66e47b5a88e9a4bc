#pragma once

#include "rarefan/density.hpp"
#include "rarefan/dynamics.hpp"

#include <memory>

namespace rarefan {

// Macroscopic flux of a conservation law d_t rho + d_x phi(rho) = 0.
class Flux {
public:
    enum class Kind { ZeroRange, Exclusion, GeneralRate };

    static Flux zero_range();
    static Flux exclusion();
    // phi = E[g] under the Geometric product measure; fan speeds come from
    // inverting its derivative numerically
    static Flux general_rate(RateFunction g);

    Kind kind() const { return kind_; }
    double phi(Density rho) const;
    double phi_prime(Density rho) const;
    // inverse of phi_prime; infinite density at speed 0 for zero range
    Density psi(double v) const;

private:
    explicit Flux(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::shared_ptr<const RateFunction> g_;
};

// zero-range shortcuts
double phi(Density rho);
double phi_prime(Density rho);
Density psi(double v);

// entropy solution at (t, u) for decreasing step data rho on u <= 0, lambda on u > 0
Density entropy_solution(double t, double u, Density rho, Density lambda, const Flux& flux = Flux::zero_range());

// straight characteristic from u0 with slope phi'(rho0)
double characteristic(double u0, Density rho0, double t, const Flux& flux = Flux::zero_range());

// limit law of X2(t)/t from the infinite step: sqrt(u) on [0,1]
double law_x_cdf(double u);
// same law through 1 - phi(rho(1,u))
double law_x_cdf_identity(double u);

// limit law of X2(t)/t from the perturbed step (rho, lambda)
double law_z_cdf(double u, double rho, double lambda, const Flux& flux = Flux::zero_range());

// limit law of J2(t)/t from the infinite step: sqrt(a) on [0,1]
double law_j2_cdf(double a);
inline constexpr double kInfiniteStepMeanCurrent = 1.0 / 3.0;

// uniform CDF on [lo, hi]; a point mass at lo when lo == hi
double uniform_cdf(double u, double lo, double hi);

// (1 + rho + lambda) (rho(1,u) - lambda), the limit of the weighted sum over
// stacked second-class particles
double weighted_sum_limit(double u, double rho, double lambda);

// limit of E[J2(t)/t] from the perturbed step, closed form
double perturbed_mean_current(double rho, double lambda);
// the same quantity by adaptive quadrature of the fan integral
double perturbed_mean_current_quadrature(double rho, double lambda, double tol = 1e-10);

}
