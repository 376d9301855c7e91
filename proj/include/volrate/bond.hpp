#pragma once

// Time-0 and on-path zero-coupon bond prices and the instantaneous forward
// rate for the Gaussian Volterra short rate:
//
//   P_{0,T} = exp{ -Theta_{0,T} + 1/2 int_0^T Xi_T(u)^2 gamma'(u) du }
//   P_{t,T} = exp{ -Theta_{t,T} + 1/2 int_t^T Xi_T(u)^2 gamma'(u) du + I }
//   f_{0,T} = theta(T) + int_0^T phi(T-u) Xi_T(u) gamma'(u) du
//
// where I is the realized stochastic integral (Xi_T(t,.) o W)_t supplied by
// the simulation engine.  With the Brownian driver (gamma' = 1) these are
// exactly the displayed formulas; the gamma' weight is the variance of the
// Gaussian integral for the general deterministic-variance driver.

#include <cmath>
#include <stdexcept>

#include "volrate/model.hpp"
#include "volrate/numerics.hpp"

namespace volrate {

struct BondQuote {
    double t = 0.0;
    double T = 0.0;
    double price = 1.0;
    double log_price = 0.0;
};

namespace detail {

/// 1/2 int_t^T Xi_T(u)^2 gamma'(u) du.  The integrand is smooth for every
/// kernel variant (the Riemann-Liouville Xi_T(u) ~ (T-u)^{H+1/2} vanishes at
/// the upper endpoint), so plain adaptive quadrature applies.
inline double half_variance(const RateModel& m, double t, double T,
                            const QuadratureSettings& settings) {
    if (t == T) return 0.0;
    const auto integrand = [&](double u) {
        const double x = m.kernel.xi_diag(T, u);
        return x * x * m.driver.gamma_prime(u);
    };
    return 0.5 * integrate(integrand, t, T, settings).value;
}

}  // namespace detail

/// P_{0,T}: deterministic time-0 zero-coupon bond price.
inline BondQuote zcb_price_initial(const RateModel& m, double T,
                                   const QuadratureSettings& settings = {}) {
    if (!(T >= 0.0)) throw std::invalid_argument("zcb_price_initial: T must be >= 0");
    BondQuote q;
    q.t = 0.0;
    q.T = T;
    q.log_price = -m.theta.integral(0.0, T) + detail::half_variance(m, 0.0, T, settings);
    q.price = std::exp(q.log_price);
    return q;
}

/// P_{t,T} on a simulated path; stoch_integral is the realized value of
/// (Xi_T(t,.) o W)_t from the simulation engine.
inline BondQuote zcb_price_on_path(const RateModel& m, double t, double T,
                                   double stoch_integral,
                                   const QuadratureSettings& settings = {}) {
    if (!(0.0 <= t && t <= T))
        throw std::invalid_argument("zcb_price_on_path: requires 0 <= t <= T");
    BondQuote q;
    q.t = t;
    q.T = T;
    q.log_price = -m.theta.integral(t, T) + detail::half_variance(m, t, T, settings) +
                  stoch_integral;
    q.price = std::exp(q.log_price);
    return q;
}

/// f_{0,T} = -d/dT log P_{0,T}: instantaneous forward rate off the initial
/// curve.  For Riemann-Liouville kernels the integrand phi(T-u) Xi_T(u) is
/// integrably singular at u = T when H < 1/2; the substitution
/// u = T - v^{1/H_plus} removes it exactly: phi(T-u) du = -(sigma/H_plus) dv
/// and Xi_T(u) = -sigma v / H_plus is linear in v.
inline double forward_rate_initial(const RateModel& m, double T,
                                   const QuadratureSettings& settings = {}) {
    if (!(T > 0.0)) throw std::invalid_argument("forward_rate_initial: T must be > 0");
    double convexity_term = 0.0;
    if (m.kernel.variant() == KernelSpec::Variant::riemann_liouville) {
        const double sigma = m.kernel.scale();
        const double hp = m.kernel.hurst_plus();
        const auto integrand = [&](double v) {
            const double u = T - std::pow(v, 1.0 / hp);
            const double xi = -sigma * v / hp;
            return (sigma / hp) * xi * m.driver.gamma_prime(std::max(u, 0.0));
        };
        convexity_term = integrate(integrand, 0.0, std::pow(T, hp), settings).value;
    } else {
        const auto integrand = [&](double u) {
            return m.kernel.phi(T - u) * m.kernel.xi_diag(T, u) * m.driver.gamma_prime(u);
        };
        convexity_term = integrate(integrand, 0.0, T, settings).value;
    }
    return m.theta(T) + convexity_term;
}

}  // namespace volrate
