#include <doctest.h>

#include <rarefan/hydro.hpp>

#include <cmath>
#include <stdexcept>

using namespace rarefan;

namespace {

const Density kInf = Density::infinite();

}

TEST_CASE("zero-range flux values")
{
    CHECK(phi(1.0) == 0.5);
    CHECK(phi_prime(1.0) == 0.25);
    CHECK(phi(0.0) == 0.0);
    CHECK(phi(kInf) == 1.0);
    CHECK(phi_prime(kInf) == 0.0);
    CHECK(phi_prime(0.0) == 1.0);
    for (double r = 0.1; r <= 10.0; r += 0.1)
        CHECK(psi(phi_prime(r)).value() == doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS_AS(psi(0.0), std::domain_error);
    CHECK_THROWS_AS(psi(1.5), std::domain_error);
    CHECK(psi(1.0).value() == 0.0);
}

TEST_CASE("flux is concave with decreasing derivative")
{
    for (const Flux& f : {Flux::zero_range(), Flux::exclusion()}) {
        const double top = f.kind() == Flux::Kind::Exclusion ? 1.0 : 20.0;
        double prev = f.phi_prime(0.0);
        for (double r = 0.01; r <= top; r += 0.01) {
            const double d = f.phi_prime(r);
            CHECK(d < prev);
            prev = d;
            const double h = 1e-6;
            if (r + h <= top)
                CHECK(f.phi_prime(r) == doctest::Approx((f.phi(r + h) - f.phi(r - h)) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("entropy solution examples")
{
    CHECK(entropy_solution(1.0, 0.49, 1.0, 0.0).value() == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
    CHECK(entropy_solution(1.0, 0.25, kInf, 0.0).value() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(entropy_solution(1.0, 1.5, 1.0, 0.5).value() == 0.5);
    CHECK(entropy_solution(1.0, 0.1, 1.0, 0.5).value() == 1.0);
    CHECK(entropy_solution(1.0, 0.0, kInf, 0.0).is_infinite());
    CHECK(entropy_solution(1.0, -3.0, kInf, 0.0).is_infinite());
    CHECK(entropy_solution(1.0, 1.0, kInf, 0.0).value() == 0.0);
    // scaling: rho(t, u) = rho(1, u/t)
    CHECK(entropy_solution(400.0, 196.0, 1.0, 0.0).value() == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
    CHECK_THROWS_AS(entropy_solution(0.0, 0.5, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(entropy_solution(1.0, 0.5, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("entropy solution is continuous at both fan edges")
{
    const double t = 7.0;
    const double rho = 2.0;
    const double lam = 0.4;
    const double eps = 1e-8 * t;
    const double left = phi_prime(rho) * t;
    const double right = phi_prime(lam) * t;
    CHECK(std::abs(entropy_solution(t, left + eps, rho, lam).value() - rho) < 1e-6);
    CHECK(std::abs(entropy_solution(t, left - eps, rho, lam).value() - rho) < 1e-6);
    CHECK(std::abs(entropy_solution(t, right - eps, rho, lam).value() - lam) < 1e-6);
    CHECK(std::abs(entropy_solution(t, right + eps, rho, lam).value() - lam) < 1e-6);
}

TEST_CASE("entropy solution is non-increasing in u")
{
    double prev = INFINITY;
    for (int i = 0; i <= 10000; ++i) {
        const double u = -0.5 + 2.0 * i / 10000.0;
        const double v = entropy_solution(1.0, u, 3.0, 0.2).value();
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("characteristics")
{
    CHECK(characteristic(0.0, 1.0, 4.0) == 1.0);
    CHECK(characteristic(2.5, 3.0, 0.0) == 2.5);
    CHECK(characteristic(1.0, 0.0, 3.0) == 4.0);
}

TEST_CASE("second-class speed law from the infinite step")
{
    CHECK(law_x_cdf(0.25) == 0.5);
    CHECK(law_x_cdf(0.0) == 0.0);
    CHECK(law_x_cdf(1.0) == 1.0);
    CHECK(law_x_cdf(-1.0) == 0.0);
    CHECK(law_x_cdf(2.0) == 1.0);
    for (int i = 0; i <= 1000; ++i) {
        const double u = i / 1000.0;
        CHECK(std::abs(law_x_cdf_identity(u) - std::sqrt(u)) < 1e-12);
        // ((1+U)/2)^2 <= u  iff  U <= 2 sqrt(u) - 1
        CHECK(std::abs(uniform_cdf(2 * std::sqrt(u) - 1, -1.0, 1.0) - law_x_cdf(u)) < 1e-12);
    }
}

TEST_CASE("current law from the infinite step")
{
    CHECK(law_j2_cdf(0.25) == 0.5);
    CHECK(law_j2_cdf(1.0) == 1.0);
    CHECK(law_j2_cdf(0.0) == 0.0);
    // mean of (1 - sqrt X)^2 with F_X = sqrt: integrate 1 - F over [0,1]
    double mean = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        mean += (1.0 - law_j2_cdf((i + 0.5) / n)) / n;
    CHECK(mean == doctest::Approx(kInfiniteStepMeanCurrent).epsilon(1e-6));
    CHECK(kInfiniteStepMeanCurrent == 1.0 / 3.0);
}

TEST_CASE("perturbed-step speed law")
{
    CHECK(law_z_cdf(0.36, 1.0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(law_z_cdf(phi_prime(1.0), 1.0, 0.5) == 0.0);
    CHECK(law_z_cdf(phi_prime(0.5), 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phi_prime(0.5) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(law_z_cdf(0.2, 1.0, 0.5) == 0.0);
    CHECK(law_z_cdf(0.5, 1.0, 0.5) == 1.0);
    CHECK_THROWS_AS(law_z_cdf(0.3, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("exclusion flux turns the perturbed law into a uniform one")
{
    const Flux ex = Flux::exclusion();
    const double pairs[][2] = {{1.0, 0.0}, {0.8, 0.2}, {0.6, 0.5}};
    for (const auto& p : pairs)
        for (int i = 0; i <= 400; ++i) {
            const double u = -1.2 + 2.4 * i / 400.0;
            CHECK(law_z_cdf(u, p[0], p[1], ex) ==
                  doctest::Approx(uniform_cdf(u, 1 - 2 * p[0], 1 - 2 * p[1])).epsilon(1e-12));
        }
    CHECK(uniform_cdf(0.3, 0.3, 0.3) == 1.0);
    CHECK(uniform_cdf(0.29, 0.3, 0.3) == 0.0);
}

TEST_CASE("general-rate flux with unit rate matches the zero-range flux")
{
    const Flux g = Flux::general_rate(RateFunction::unit());
    for (double r : {0.2, 1.0, 4.0}) {
        CHECK(g.phi(r) == doctest::Approx(phi(r)).epsilon(1e-10));
        CHECK(g.phi_prime(r) == doctest::Approx(phi_prime(r)).epsilon(1e-9));
    }
    for (double v : {0.1, 0.25, 0.7})
        CHECK(g.psi(v).value() == doctest::Approx(psi(v).value()).epsilon(1e-6));
}

TEST_CASE("weighted-sum limit")
{
    CHECK(weighted_sum_limit(0.49, 1.0, 0.0) == doctest::Approx(6.0 / 7.0).epsilon(1e-14));
    CHECK(weighted_sum_limit(0.2, 1.0, 0.0) == 2.0);
    CHECK(weighted_sum_limit(1.2, 1.0, 0.0) == 0.0);
    CHECK(weighted_sum_limit(0.1, 2.0, 0.5) == doctest::Approx(3.5 * 1.5));
}

TEST_CASE("perturbed mean current: closed form and quadrature")
{
    const double expect = 4.0 / 3.0 + 4.0 * std::log(0.75);
    CHECK(perturbed_mean_current(1.0, 0.5) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::abs(perturbed_mean_current(1.0, 0.5) - 0.182605) < 5e-7);
    int points = 0;
    for (double rho : {0.5, 1.0, 2.0, 3.0, 5.0})
        for (double frac : {0.0, 0.25, 0.5, 0.75}) {
            const double lam = frac * rho;
            CHECK(std::abs(perturbed_mean_current(rho, lam) - perturbed_mean_current_quadrature(rho, lam)) < 1e-8);
            ++points;
        }
    CHECK(points == 20);
}

TEST_CASE("perturbed mean current tends to phi(rho)^2 as lambda approaches rho")
{
    for (double rho : {0.5, 1.0, 3.0}) {
        const double limit = phi(rho) * phi(rho);
        CHECK(std::abs(perturbed_mean_current(rho, rho - 1e-4) - limit) < 1e-4);
        CHECK(std::abs(perturbed_mean_current(rho, rho - 1e-7) - limit) < 1e-6);
    }
}
