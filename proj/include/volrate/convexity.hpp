#pragma once

// Convexity adjustment factor c_t^tau(t1, t2) defined through
//
//   log c = int_0^t (Sigma_s^{t2,tau} - Sigma_s^{t1,tau}) Sigma_s^{t2,tau}
//           gamma'(s) ds
//
// so that E^{Q^tau}[P_{t,t1}/P_{t,t2}] = (P_{0,t1}/P_{0,t2}) c.  Evaluated by
// adaptive quadrature for any kernel/driver, in closed form for the
// exponential kernel under the Brownian driver, and by the small-t
// asymptotic for the Riemann-Liouville kernel.

#include <cmath>
#include <stdexcept>

#include "volrate/model.hpp"
#include "volrate/numerics.hpp"

namespace volrate {

struct ConvexityQuery {
    double t = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double tau = 0.0;

    void validate() const {
        if (!(t >= 0.0 && t1 >= 0.0 && t2 >= 0.0 && tau >= 0.0))
            throw std::invalid_argument("ConvexityQuery: all times must be >= 0");
        if (!(t <= t1 && t <= t2))
            throw std::invalid_argument("ConvexityQuery: requires t <= min(t1, t2)");
    }
};

enum class ConvexityMethod { closed_form, quadrature, asymptotic_small_t };

/// Method preference for convexity_adjustment.  auto_select takes the closed
/// form when the kernel is exponential under the Brownian driver and
/// quadrature otherwise.
enum class ConvexityMethodChoice { auto_select, closed_form, quadrature, asymptotic_small_t };

struct ConvexityResult {
    double log_adjustment = 0.0;
    double adjustment = 1.0;
    ConvexityMethod method = ConvexityMethod::quadrature;
    double error_estimate = 0.0;
};

enum class ConvexitySign { negative, zero, positive };

namespace detail {

inline ConvexityResult make_result(double log_adj, ConvexityMethod m, double err) {
    ConvexityResult r;
    r.log_adjustment = log_adj;
    r.adjustment = std::exp(log_adj);
    r.method = m;
    r.error_estimate = err;
    return r;
}

/// The three degenerate cases in which c = 1 exactly: no elapsed time, equal
/// numerator/denominator maturities, or tau equal to the denominator
/// maturity (the Q^tau-martingale case).
inline bool degenerate_query(const ConvexityQuery& q) {
    return q.t == 0.0 || q.t1 == q.t2 || q.tau == q.t2;
}

}  // namespace detail

/// Closed-form log-adjustment for the bare exponential kernel phi = e^{-alpha x}
/// under the Brownian driver:
///
///   log c = (e^{2 alpha t} - 1)/(2 alpha^3)
///           { (e^{-alpha t1} - e^{-alpha t2}) e^{-alpha tau}
///             + e^{-2 alpha t2} - e^{-alpha(t1+t2)} }
///
/// evaluated in the algebraically identical factored form
///   expm1(2 alpha t)/(2 alpha^3) e^{-2 alpha t2}
///     (1 - e^{-alpha(t1-t2)}) (1 - e^{-alpha(tau-t2)})
/// which is stable as alpha -> 0 (each factor is O(alpha)).
inline ConvexityResult convexity_exponential_closed_form(double alpha, const ConvexityQuery& q) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("convexity_exponential_closed_form: alpha must be > 0");
    q.validate();
    const double f1 = -std::expm1(-alpha * (q.t1 - q.t2));
    const double f2 = -std::expm1(-alpha * (q.tau - q.t2));
    const double log_adj = std::expm1(2.0 * alpha * q.t) / (2.0 * alpha * alpha * alpha) *
                           std::exp(-2.0 * alpha * q.t2) * f1 * f2;
    return detail::make_result(log_adj, ConvexityMethod::closed_form, 0.0);
}

/// alpha -> 0 limit of the exponential closed form: c = exp{(t2-t1)(t2-tau) t}.
inline ConvexityResult convexity_alpha_zero_limit(const ConvexityQuery& q) {
    q.validate();
    const double log_adj = (q.t2 - q.t1) * (q.t2 - q.tau) * q.t;
    return detail::make_result(log_adj, ConvexityMethod::closed_form, 0.0);
}

/// First-order small-t asymptotic for the bare Riemann-Liouville kernel:
///
///   log c = (t / H_plus^2)(t2^{H_plus} - t1^{H_plus})(t2^{H_plus} - tau^{H_plus})
///           + O(t^2)
///
/// When cross_check is set, error_estimate carries |quadrature - asymptotic|
/// computed with a bare RL kernel and Brownian driver.
inline ConvexityResult convexity_rl_small_t(double hurst, const ConvexityQuery& q,
                                            bool cross_check = false,
                                            const QuadratureSettings& settings = {});

/// log c by adaptive quadrature of the defining integral, for any kernel and
/// driver.  Riemann-Liouville and tabulated kernels restrict Phi to
/// non-negative arguments, so they additionally require tau >= t.
inline ConvexityResult convexity_quadrature(const RateModel& m, const ConvexityQuery& q,
                                            const QuadratureSettings& settings = {}) {
    q.validate();
    if (m.kernel.variant() != KernelSpec::Variant::exponential && q.tau < q.t)
        throw std::domain_error(
            "convexity: tau >= t required for kernels with Phi restricted to non-negative arguments");
    if (detail::degenerate_query(q))
        return detail::make_result(0.0, ConvexityMethod::quadrature, 0.0);
    const auto integrand = [&](double s) {
        // Sigma_s^{t2,tau} - Sigma_s^{t1,tau} = Phi(t2-s) - Phi(t1-s)
        const double phi_t2 = m.kernel.antiderivative(q.t2 - s);
        const double diff = phi_t2 - m.kernel.antiderivative(q.t1 - s);
        const double sig2 = phi_t2 - m.kernel.antiderivative(q.tau - s);
        return diff * sig2 * m.driver.gamma_prime(s);
    };
    const auto out = integrate(integrand, 0.0, q.t, settings);
    return detail::make_result(out.value, ConvexityMethod::quadrature, out.err_est);
}

/// Main entry point: dispatches per the method choice.  The closed form (and
/// the RL asymptotic) are stated for bare kernels, so the kernel scale sigma
/// multiplies their log-adjustment by sigma^2; quadrature picks the scale up
/// from Phi directly.
inline ConvexityResult convexity_adjustment(
    const RateModel& m, const ConvexityQuery& q,
    ConvexityMethodChoice choice = ConvexityMethodChoice::auto_select,
    const QuadratureSettings& settings = {}) {
    q.validate();
    const bool closed_ok = m.kernel.variant() == KernelSpec::Variant::exponential &&
                           m.driver.variant() == DriverSpec::Variant::brownian;
    if (choice == ConvexityMethodChoice::auto_select)
        choice = closed_ok ? ConvexityMethodChoice::closed_form : ConvexityMethodChoice::quadrature;

    switch (choice) {
        case ConvexityMethodChoice::closed_form: {
            if (!closed_ok)
                throw std::invalid_argument(
                    "convexity_adjustment: closed form requires an exponential kernel and Brownian driver");
            ConvexityResult r = convexity_exponential_closed_form(m.kernel.alpha(), q);
            const double s2 = m.kernel.scale() * m.kernel.scale();
            return detail::make_result(s2 * r.log_adjustment, ConvexityMethod::closed_form, 0.0);
        }
        case ConvexityMethodChoice::quadrature:
            return convexity_quadrature(m, q, settings);
        case ConvexityMethodChoice::asymptotic_small_t: {
            if (m.kernel.variant() != KernelSpec::Variant::riemann_liouville)
                throw std::invalid_argument(
                    "convexity_adjustment: asymptotic method requires a Riemann-Liouville kernel");
            ConvexityResult r = convexity_rl_small_t(m.kernel.hurst(), q);
            const double s2 = m.kernel.scale() * m.kernel.scale();
            return detail::make_result(s2 * r.log_adjustment,
                                       ConvexityMethod::asymptotic_small_t, 0.0);
        }
        case ConvexityMethodChoice::auto_select:
            break;  // resolved above
    }
    throw std::logic_error("convexity_adjustment: unreachable");
}

inline ConvexityResult convexity_rl_small_t(double hurst, const ConvexityQuery& q,
                                            bool cross_check,
                                            const QuadratureSettings& settings) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("convexity_rl_small_t: hurst must lie in (0,1)");
    q.validate();
    const double hp = hurst + 0.5;
    const double log_adj = q.t / (hp * hp) * (std::pow(q.t2, hp) - std::pow(q.t1, hp)) *
                           (std::pow(q.t2, hp) - std::pow(q.tau, hp));
    double err = 0.0;
    if (cross_check) {
        const RateModel bare{ThetaCurve::constant(0.0), KernelSpec::riemann_liouville(hurst),
                             DriverSpec::brownian()};
        const ConvexityResult quad = convexity_quadrature(bare, q, settings);
        err = std::abs(quad.log_adjustment - log_adj);
    }
    return detail::make_result(log_adj, ConvexityMethod::asymptotic_small_t, err);
}

/// Sign of log c predicted by the sign table: sign(t1-t2) * sign(tau-t2),
/// zero in the degenerate cases (and for a degenerate sigma = 0 kernel, whose
/// log c vanishes identically).
inline ConvexitySign convexity_sign(const RateModel& m, const ConvexityQuery& q) {
    q.validate();
    if (detail::degenerate_query(q) || m.kernel.scale() == 0.0) return ConvexitySign::zero;
    const int s = (q.t1 > q.t2 ? 1 : -1) * (q.tau > q.t2 ? 1 : -1);
    return s > 0 ? ConvexitySign::positive : ConvexitySign::negative;
}

}  // namespace volrate
