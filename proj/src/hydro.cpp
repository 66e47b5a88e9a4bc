#include "rarefan/hydro.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace rarefan {

Flux Flux::zero_range() { return Flux(Kind::ZeroRange); }

Flux Flux::exclusion() { return Flux(Kind::Exclusion); }

Flux Flux::general_rate(RateFunction g)
{
    g.validate();
    Flux f(Kind::GeneralRate);
    f.g_ = std::make_shared<const RateFunction>(std::move(g));
    return f;
}

namespace {

void check_exclusion_density(Density rho)
{
    if (rho.is_infinite() || rho.value() > 1.0)
        throw std::domain_error("exclusion density must lie in [0,1]");
}

}

double Flux::phi(Density rho) const
{
    switch (kind_) {
    case Kind::ZeroRange:
        return rho.is_infinite() ? 1.0 : rho.value() / (1.0 + rho.value());
    case Kind::Exclusion:
        check_exclusion_density(rho);
        return rho.value() * (1.0 - rho.value());
    case Kind::GeneralRate:
        return g_tilde(rho.value(), *g_);
    }
    return 0.0;
}

double Flux::phi_prime(Density rho) const
{
    switch (kind_) {
    case Kind::ZeroRange: {
        if (rho.is_infinite())
            return 0.0;
        const double a = 1.0 + rho.value();
        return 1.0 / (a * a);
    }
    case Kind::Exclusion:
        check_exclusion_density(rho);
        return 1.0 - 2.0 * rho.value();
    case Kind::GeneralRate:
        return g_tilde_prime(rho.value(), *g_);
    }
    return 0.0;
}

Density Flux::psi(double v) const
{
    switch (kind_) {
    case Kind::ZeroRange: {
        if (!(v > 0.0))
            throw std::domain_error("psi: speed 0 corresponds to infinite density");
        if (v > 1.0)
            throw std::domain_error("psi: speed above 1 is outside the fan");
        const double s = std::sqrt(v);
        return Density((1.0 - s) / s);
    }
    case Kind::Exclusion:
        if (!(v >= -1.0 && v <= 1.0))
            throw std::domain_error("psi: exclusion speeds lie in [-1,1]");
        return Density((1.0 - v) / 2.0);
    case Kind::GeneralRate: {
        const double top = g_tilde_prime(0.0, *g_);
        if (!(v > 0.0) || v > top)
            throw std::domain_error("psi: speed outside (0, phi'(0)]");
        double lo = 0.0;
        double hi = 1.0;
        while (g_tilde_prime(hi, *g_) > v) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e5)
                throw std::domain_error("psi: density above the numerically supported range");
        }
        for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            if (g_tilde_prime(mid, *g_) > v)
                lo = mid;
            else
                hi = mid;
        }
        return Density(0.5 * (lo + hi));
    }
    }
    return Density(0.0);
}

double phi(Density rho) { return Flux::zero_range().phi(rho); }
double phi_prime(Density rho) { return Flux::zero_range().phi_prime(rho); }
Density psi(double v) { return Flux::zero_range().psi(v); }

Density entropy_solution(double t, double u, Density rho, Density lambda, const Flux& flux)
{
    if (!(t > 0.0))
        throw std::invalid_argument("entropy_solution: t must be > 0");
    if (lambda.is_infinite() || !(rho > lambda))
        throw std::invalid_argument("rho must exceed lambda");
    if (rho.is_infinite() && u <= 0.0)
        return rho;
    const double left = flux.phi_prime(rho) * t;
    const double right = flux.phi_prime(lambda) * t;
    if (u <= left)
        return rho;
    if (u >= right)
        return lambda;
    return flux.psi(u / t);
}

double characteristic(double u0, Density rho0, double t, const Flux& flux)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("characteristic: t must be >= 0");
    return u0 + flux.phi_prime(rho0) * t;
}

double law_x_cdf(double u)
{
    return std::sqrt(std::clamp(u, 0.0, 1.0));
}

double law_x_cdf_identity(double u)
{
    return 1.0 - phi(entropy_solution(1.0, u, Density::infinite(), 0.0));
}

double law_z_cdf(double u, double rho, double lambda, const Flux& flux)
{
    if (!(rho > lambda))
        throw std::invalid_argument("rho must exceed lambda");
    if (u <= flux.phi_prime(rho))
        return 0.0;
    if (u >= flux.phi_prime(lambda))
        return 1.0;
    const double r = entropy_solution(1.0, u, rho, lambda, flux).value();
    return std::clamp((rho - r) / (rho - lambda), 0.0, 1.0);
}

double law_j2_cdf(double a)
{
    return std::sqrt(std::clamp(a, 0.0, 1.0));
}

double uniform_cdf(double u, double lo, double hi)
{
    if (hi < lo)
        throw std::invalid_argument("uniform_cdf: hi < lo");
    if (hi == lo)
        return u < lo ? 0.0 : 1.0;
    return std::clamp((u - lo) / (hi - lo), 0.0, 1.0);
}

double weighted_sum_limit(double u, double rho, double lambda)
{
    return (1.0 + rho + lambda) * (entropy_solution(1.0, u, rho, lambda).value() - lambda);
}

namespace {

void check_perturbed(double rho, double lambda)
{
    if (!(lambda >= 0.0 && rho > lambda && std::isfinite(rho)))
        throw std::invalid_argument("rho must exceed lambda");
}

}

double perturbed_mean_current(double rho, double lambda)
{
    check_perturbed(rho, lambda);
    const double eps = rho - lambda;
    return 1.0 + 2.0 / eps * std::log1p(-eps / (1.0 + rho)) + 1.0 / ((1.0 + lambda) * (1.0 + rho));
}

double perturbed_mean_current_quadrature(double rho, double lambda, double tol)
{
    check_perturbed(rho, lambda);
    const double eps = rho - lambda;
    auto f = [eps](double u) {
        const double s = std::sqrt(u);
        return (1.0 - s) * (1.0 - s) / (2.0 * eps * u * s);
    };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, phi_prime(rho), phi_prime(lambda), 20,
                                                                          tol, &err);
}

}
