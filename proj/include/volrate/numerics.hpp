#pragma once

// Shared numerical kernels: adaptive quadrature (Gauss-Kronrod 15 and
// adaptive Simpson), ordinary least squares, monotone cubic interpolation
// (Fritsch-Carlson), and central finite differences.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace volrate {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

enum class QuadratureRule { gauss_kronrod_15, simpson_adaptive };

/// Settings for the adaptive integrator.  The absolute tolerance applies to
/// the whole interval; each bisection splits its budget between the halves.
struct QuadratureSettings {
    double abs_tol = 1e-10;
    int max_depth = 50;
    QuadratureRule rule = QuadratureRule::gauss_kronrod_15;
};

/// Thrown when the adaptive scheme exhausts max_depth without meeting the
/// tolerance.  Carries the best value obtained so far and the achieved error
/// estimate so callers can decide whether the partial result is usable.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double partial, double estimate)
        : std::runtime_error(what), partial_value(partial), error_estimate(estimate) {}

    double partial_value;
    double error_estimate;
};

struct QuadratureOutcome {
    double value = 0.0;
    double err_est = 0.0;
};

namespace detail {

// 15-point Kronrod abscissae on [-1,1] (positive half) and weights; the
// embedded 7-point Gauss rule sits on the odd-indexed abscissae.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

/// One Gauss-Kronrod 15(7) panel over [a,b]; the error estimate is the
/// difference between the Kronrod and embedded Gauss values.
template <class F>
QuadratureOutcome gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * kGK15Nodes[i];
        const double fsum = (i == 7) ? f(c) : f(c - x) + f(c + x);
        kronrod += kGK15WeightsK[i] * fsum;
        if (i % 2 == 1) gauss += kGK15WeightsG[i / 2] * fsum;
    }
    return {h * kronrod, std::abs(h * (kronrod - gauss))};
}

/// Simpson value over [a,b] given endpoint/midpoint evaluations.
inline double simpson_value(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

struct AdaptiveState {
    double value = 0.0;  // accumulated integral
    double err = 0.0;    // accumulated error estimate
};

template <class F>
void gk15_adaptive(F&& f, double a, double b, double tol, int depth,
                   const QuadratureSettings& s, AdaptiveState& st) {
    const QuadratureOutcome panel = gk15_panel(f, a, b);
    if (panel.err_est <= tol || depth >= s.max_depth) {
        st.value += panel.value;
        st.err += panel.err_est;
        return;
    }
    const double m = 0.5 * (a + b);
    gk15_adaptive(f, a, m, 0.5 * tol, depth + 1, s, st);
    gk15_adaptive(f, m, b, 0.5 * tol, depth + 1, s, st);
}

template <class F>
void simpson_adaptive(F&& f, double a, double m, double b, double fa, double fm,
                      double fb, double whole, double tol, int depth,
                      const QuadratureSettings& s, AdaptiveState& st) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_value(fa, flm, fm, a, m);
    const double right = simpson_value(fm, frm, fb, m, b);
    const double err = std::abs(left + right - whole) / 15.0;
    if (err <= tol || depth >= s.max_depth) {
        st.value += left + right + (left + right - whole) / 15.0;
        st.err += err;
        return;
    }
    simpson_adaptive(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, s, st);
    simpson_adaptive(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, s, st);
}

}  // namespace detail

/// Adaptive quadrature of f over [a,b].  Returns the value and the achieved
/// error estimate.  Integrable endpoint singularities must be removed by the
/// caller through a substitution wrapper; the integrand is never evaluated at
/// the endpoints by the Gauss-Kronrod rule (open nodes), but convergence is
/// only guaranteed for integrands the rule can resolve.
///
/// Throws QuadratureError (carrying the partial value and the achieved
/// estimate) if max_depth is exhausted before the tolerance is met.
template <class F>
QuadratureOutcome integrate(F&& f, double a, double b,
                            const QuadratureSettings& settings = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (settings.abs_tol <= 0.0) throw std::invalid_argument("integrate: abs_tol must be > 0");
    if (settings.max_depth < 1) throw std::invalid_argument("integrate: max_depth must be >= 1");
    if (a == b) return {0.0, 0.0};

    detail::AdaptiveState st;
    if (settings.rule == QuadratureRule::gauss_kronrod_15) {
        detail::gk15_adaptive(f, a, b, settings.abs_tol, 0, settings, st);
    } else {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        const double whole = detail::simpson_value(fa, fm, fb, a, b);
        detail::simpson_adaptive(f, a, m, b, fa, fm, fb, whole, settings.abs_tol, 0,
                                 settings, st);
    }
    // failure is judged on the accumulated estimate: panels that bottom out
    // at max_depth contribute their estimate, and only a total above the
    // requested tolerance is a non-convergence
    if (st.err > settings.abs_tol) {
        throw QuadratureError("integrate: tolerance not met within max_depth",
                              st.value, st.err);
    }
    return {st.value, st.err};
}

// ---------------------------------------------------------------------------
// Ordinary least squares
// ---------------------------------------------------------------------------

/// Slope/intercept fit of y against x; houses the Hurst regression
/// log m(delta) = 2H log(delta) + c.
struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Exact normal-equations least squares of ys against xs.
/// Requires at least two points with non-identical abscissae.
inline RegressionFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("ols_fit: size mismatch between xs and ys");
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("ols_fit: need at least two points");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate fit, all xs equal");

    RegressionFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy <= 0.0) {
        fit.r_squared = 1.0;  // constant ys: the horizontal line fits exactly
    } else {
        fit.r_squared = std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation (Fritsch-Carlson)
// ---------------------------------------------------------------------------

/// Monotone cubic Hermite interpolant through strictly increasing knots;
/// constant (flat) extrapolation outside the knot range.  Monotone input data
/// yields a monotone interpolant; collinear data reproduces the line.
class MonotoneCubic {
  public:
    explicit MonotoneCubic(std::vector<std::pair<double, double>> knots)
        : knots_(std::move(knots)) {
        const std::size_t n = knots_.size();
        if (n < 2) throw std::invalid_argument("MonotoneCubic: need at least two knots");
        for (std::size_t i = 1; i < n; ++i) {
            if (!(knots_[i - 1].first < knots_[i].first))
                throw std::invalid_argument("MonotoneCubic: abscissae must be strictly increasing");
        }
        slopes_ = fit_slopes(knots_);
    }

    double operator()(double x) const {
        const std::size_t n = knots_.size();
        if (x <= knots_.front().first) return knots_.front().second;  // flat
        if (x >= knots_.back().first) return knots_.back().second;    // flat
        // locate the segment [x_i, x_{i+1}) containing x
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (knots_[mid].first <= x)
                lo = mid;
            else
                hi = mid;
        }
        const double h = knots_[hi].first - knots_[lo].first;
        const double t = (x - knots_[lo].first) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * knots_[lo].second + h10 * h * slopes_[lo] +
               h01 * knots_[hi].second + h11 * h * slopes_[hi];
    }

  private:
    static std::vector<double> fit_slopes(const std::vector<std::pair<double, double>>& k) {
        const std::size_t n = k.size();
        std::vector<double> h(n - 1), d(n - 1), m(n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = k[i + 1].first - k[i].first;
            d[i] = (k[i + 1].second - k[i].second) / h[i];
        }
        if (n == 2) {
            m[0] = m[1] = d[0];
            return m;
        }
        // interior slopes: weighted harmonic mean when the secants agree in
        // sign, zero otherwise (the Fritsch-Carlson monotonicity condition)
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0.0) != (d[i] > 0.0)) {
                m[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        m[0] = edge_slope(h[0], h[1], d[0], d[1]);
        m[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        return m;
    }

    // one-sided three-point endpoint slope, clamped to preserve monotonicity
    static double edge_slope(double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) {
            m = 0.0;
        } else if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m) > 3.0 * std::abs(d0)) {
            m = 3.0 * d0;
        }
        return m;
    }

    std::vector<std::pair<double, double>> knots_;
    std::vector<double> slopes_;
};

/// One-shot convenience wrapper around MonotoneCubic.
inline double spline_interpolate(const std::vector<std::pair<double, double>>& knots,
                                 double query) {
    return MonotoneCubic(knots)(query);
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Central finite difference (f(x+h) - f(x-h)) / 2h.
template <class F>
double central_difference(F&& f, double x, double h) {
    if (h <= 0.0) throw std::invalid_argument("central_difference: h must be > 0");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace volrate
