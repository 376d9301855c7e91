#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "volrate/curves.hpp"
#include "volrate/driver.hpp"
#include "volrate/kernel.hpp"
#include "volrate/numerics.hpp"

using volrate::DriverSpec;
using volrate::KernelSpec;
using volrate::ThetaCurve;
using volrate::central_difference;
using volrate::integrate;

namespace {

std::vector<KernelSpec> all_kernel_variants() {
    return {KernelSpec::exponential(1.3, 0.7),
            KernelSpec::riemann_liouville(0.3, 1.0),
            KernelSpec::riemann_liouville(0.7, 0.8),
            KernelSpec::tabulated({{0.0, 1.2}, {0.5, 0.9}, {1.5, 0.7}, {3.0, 0.4}, {10.0, 0.2}}, 1.1)};
}

}  // namespace

TEST_CASE("phi: pointwise values") {
    CHECK(KernelSpec::exponential(1.0).phi(0.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(KernelSpec::riemann_liouville(0.5).phi(2.7) == Catch::Approx(1.0).margin(1e-15));
    CHECK(KernelSpec::exponential(2.0).phi(0.5) ==
          Catch::Approx(0.36787944117144233).margin(1e-15));
}

TEST_CASE("phi: Riemann-Liouville singularity and degenerate endpoint") {
    CHECK_THROWS_AS(KernelSpec::riemann_liouville(0.2).phi(0.0), std::domain_error);
    CHECK(KernelSpec::riemann_liouville(0.8).phi(0.0) == 0.0);
    CHECK_THROWS_AS(KernelSpec::exponential(1.0).phi(-0.1), std::invalid_argument);
}

TEST_CASE("xi: empty integral and closed forms") {
    for (const auto& k : all_kernel_variants()) {
        CHECK(k.xi(1.5, 1.5, 0.7) == Catch::Approx(0.0).margin(1e-15));
    }
    // exponential diagonal: Xi_tau(t,t) = (e^{-alpha(tau-t)} - 1)/alpha
    CHECK(KernelSpec::exponential(1.0).xi_diag(2.0, 1.0) ==
          Catch::Approx(-0.6321205588285577).margin(1e-15));
    // Riemann-Liouville with H = 1/2: Xi_tau(t,t) = -(tau-t)
    CHECK(KernelSpec::riemann_liouville(0.5).xi_diag(3.0, 1.0) ==
          Catch::Approx(-2.0).margin(1e-14));
    CHECK_THROWS_AS(KernelSpec::exponential(1.0).xi(1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("sigma_vol: values and sign") {
    CHECK(KernelSpec::riemann_liouville(0.3).sigma_vol(0.4, 2.0, 2.0) == 0.0);
    // RL with H=1/2: ((tau-t) - (T-t))/1
    CHECK(KernelSpec::riemann_liouville(0.5).sigma_vol(0.0, 3.0, 2.0) ==
          Catch::Approx(-1.0).margin(1e-14));
    // alpha -> 0 limit of the exponential closed form approaches tau - T
    CHECK(KernelSpec::exponential(1e-6).sigma_vol(0.0, 3.0, 2.0) ==
          Catch::Approx(-1.0).margin(1e-5));
    CHECK_THROWS_AS(KernelSpec::exponential(1.0).sigma_vol(2.5, 2.0, 3.0), std::invalid_argument);
}

TEST_CASE("sigma_vol: sign equals sign(tau - T) across kernels") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (const auto& k : all_kernel_variants()) {
        for (int rep = 0; rep < 100; ++rep) {
            const double t = u(rng);
            const double T = t + u(rng) + 1e-3;
            const double tau = t + u(rng) + 2e-3;
            const double s = k.sigma_vol(t, T, tau);
            if (tau > T) CHECK(s > 0.0);
            if (tau < T) CHECK(s < 0.0);
        }
    }
}

TEST_CASE("Phi' = -phi by central finite differences, all variants") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (const auto& k : all_kernel_variants()) {
        for (int rep = 0; rep < 100; ++rep) {
            const double z = u(rng);
            const double fd =
                central_difference([&](double x) { return k.antiderivative(x); }, z, 1e-7);
            CHECK(fd == Catch::Approx(-k.phi(z)).epsilon(1e-6));
        }
    }
}

TEST_CASE("Xi additivity: Xi_T(t,u) = Xi_S(t,u) + Xi_T(S,u)") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (const auto& k : all_kernel_variants()) {
        for (int rep = 0; rep < 50; ++rep) {
            const double uu = u(rng);
            const double t = uu + u(rng);
            const double S = t + u(rng);
            const double T = S + u(rng);
            const double lhs = k.xi(T, t, uu);
            const double rhs = k.xi(S, t, uu) + k.xi(T, S, uu);
            CHECK(lhs == Catch::Approx(rhs).margin(1e-12));
        }
    }
}

TEST_CASE("tabulated kernel: interpolation, extrapolation, exact antiderivative") {
    const auto k = KernelSpec::tabulated({{0.0, 2.0}, {1.0, 1.0}, {2.0, 0.5}});
    CHECK(k.phi(0.5) == Catch::Approx(1.5).margin(1e-15));
    CHECK(k.phi(5.0) == Catch::Approx(0.5).margin(1e-15));  // flat tail
    // Phi(z) = -int_0^z phi: cross-check against quadrature
    for (double z : {0.3, 1.0, 1.7, 2.0, 4.5}) {
        const double quad = integrate([&](double x) { return k.phi(x); }, 0.0, z).value;
        CHECK(k.antiderivative(z) == Catch::Approx(-quad).margin(1e-12));
    }
    CHECK_THROWS_AS(k.antiderivative(-0.5), std::domain_error);
    CHECK_THROWS_AS(KernelSpec::tabulated({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::tabulated({{0.0, 1.0}, {1.0, -2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::tabulated({{1.0, 1.0}, {0.5, 2.0}}), std::invalid_argument);
}

TEST_CASE("Riemann-Liouville Phi rejects negative arguments") {
    CHECK_THROWS_AS(KernelSpec::riemann_liouville(0.3).antiderivative(-0.1), std::domain_error);
}

TEST_CASE("theta: constant and empty integrals") {
    const auto c = ThetaCurve::constant(0.06);
    CHECK(c.integral(0.0, 1.0) == Catch::Approx(0.06).margin(1e-15));
    CHECK(c.integral(0.7, 0.7) == 0.0);
    CHECK_THROWS_AS(c.integral(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("theta: Vasicek closed-form integral matches quadrature") {
    const auto v = ThetaCurve::vasicek(0.05, 1.0, 0.03);
    const double quad = integrate([&](double s) { return v(s); }, 0.0, 2.0).value;
    CHECK(v.integral(0.0, 2.0) == Catch::Approx(quad).margin(1e-10));
    const double quad2 = integrate([&](double s) { return v(s); }, 0.4, 1.3).value;
    CHECK(v.integral(0.4, 1.3) == Catch::Approx(quad2).margin(1e-10));
}

TEST_CASE("theta: table evaluation, flat tails, exact integral") {
    const auto tc = ThetaCurve::table({{0.5, 0.02}, {1.0, 0.04}, {2.0, 0.03}});
    CHECK(tc(0.75) == Catch::Approx(0.03).margin(1e-15));
    CHECK(tc(0.0) == Catch::Approx(0.02).margin(1e-15));   // flat head
    CHECK(tc(10.0) == Catch::Approx(0.03).margin(1e-15));  // flat tail
    const double quad = integrate([&](double s) { return tc(s); }, 0.2, 3.1).value;
    CHECK(tc.integral(0.2, 3.1) == Catch::Approx(quad).margin(1e-10));
    CHECK_THROWS_AS(ThetaCurve::table({{0.0, 0.02}}), std::invalid_argument);
    CHECK_THROWS_AS(ThetaCurve::table({{1.0, 0.02}, {1.0, 0.03}}), std::invalid_argument);
}

TEST_CASE("driver: gamma and gamma' closed forms") {
    const auto b = DriverSpec::brownian();
    CHECK(b.gamma_prime(3.7) == 1.0);
    CHECK(b.gamma(3.7) == Catch::Approx(3.7).margin(1e-15));

    CHECK(DriverSpec::ou(1.0).gamma_prime(0.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(DriverSpec::ou(0.5).gamma(2.0) == Catch::Approx(0.8646647167633873).margin(1e-15));

    const auto s = DriverSpec::scaled(0.4);
    CHECK(s.gamma_prime(1.0) == Catch::Approx(0.16).margin(1e-15));
    CHECK(s.gamma(2.5) == Catch::Approx(0.4).margin(1e-15));
}

TEST_CASE("driver: gamma closed forms match quadrature of gamma'") {
    const std::vector<DriverSpec> drivers{
        DriverSpec::brownian(), DriverSpec::scaled(0.7), DriverSpec::ou(0.8),
        DriverSpec::scaled_table({{0.0, 0.5}, {1.0, 0.8}, {2.5, 0.6}})};
    for (const auto& d : drivers) {
        for (double t : {0.3, 1.0, 2.2, 4.0}) {
            const double quad = integrate([&](double s) { return d.gamma_prime(s); }, 0.0, t).value;
            CHECK(d.gamma(t) == Catch::Approx(quad).margin(1e-10));
        }
    }
}

TEST_CASE("driver: gamma is increasing and gamma' positive") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    const std::vector<DriverSpec> drivers{
        DriverSpec::brownian(), DriverSpec::scaled(1.4), DriverSpec::ou(2.0),
        DriverSpec::scaled_table({{0.0, 0.5}, {2.0, 1.5}})};
    for (const auto& d : drivers) {
        CHECK(d.gamma(0.0) == 0.0);
        for (int rep = 0; rep < 50; ++rep) {
            double t1 = u(rng), t2 = u(rng);
            if (t1 > t2) std::swap(t1, t2);
            if (t1 == t2) continue;
            CHECK(d.gamma(t2) > d.gamma(t1));
            CHECK(d.gamma_prime(t1) > 0.0);
        }
    }
}

TEST_CASE("driver: contract errors") {
    CHECK_THROWS_AS(DriverSpec::ou(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DriverSpec::scaled(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DriverSpec::scaled_table({{0.0, 0.5}, {1.0, -0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(DriverSpec::brownian().gamma(-1.0), std::invalid_argument);
}
