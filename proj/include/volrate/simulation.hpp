#pragma once

// Monte Carlo engine for the Gaussian Volterra short rate.  The stochastic
// integral (Xi_T(t_i,.) o W)_{t_i} is discretized by the left-point
// triangular kernel-matrix scheme
//
//   integral_i = sum_{k<i} Xi_T(t_i, t_k) dW_k,
//   short_rate_i = theta(t_i) + sum_{k<i} phi(t_i - t_k) dW_k,
//
// with independent Gaussian increments dW_k of variance gamma(t_{k+1}) -
// gamma(t_k).  Under the forward measure Q^tau each increment gains the
// Girsanov drift Xi_tau(t_k,t_k) gamma'(t_k) dt_k.
//
// Reproducibility: every path derives its own counter-based RNG stream from
// (seed, path_index), so results do not depend on how paths are distributed
// across workers; reductions use a fixed pairwise order.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "volrate/bond.hpp"
#include "volrate/convexity.hpp"
#include "volrate/model.hpp"

namespace volrate {

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

struct SimGrid {
    std::vector<double> times;  // t_0 = 0 < t_1 < ... < horizon

    explicit SimGrid(std::vector<double> ts) : times(std::move(ts)) {
        if (times.size() < 2) throw std::invalid_argument("SimGrid: need at least one step");
        if (times.front() != 0.0) throw std::invalid_argument("SimGrid: grid must start at 0");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i - 1] < times[i]))
                throw std::invalid_argument("SimGrid: times must be strictly increasing");
    }

    static SimGrid uniform(double horizon, std::size_t n_steps) {
        if (!(horizon > 0.0)) throw std::invalid_argument("SimGrid: horizon must be > 0");
        if (n_steps < 1) throw std::invalid_argument("SimGrid: need at least one step");
        std::vector<double> ts(n_steps + 1);
        for (std::size_t i = 0; i <= n_steps; ++i)
            ts[i] = horizon * static_cast<double>(i) / static_cast<double>(n_steps);
        ts.back() = horizon;
        return SimGrid(std::move(ts));
    }

    std::size_t n_steps() const { return times.size() - 1; }
    double horizon() const { return times.back(); }
};

// ---------------------------------------------------------------------------
// Counter-based RNG streams
// ---------------------------------------------------------------------------

namespace rng {

/// splitmix64 step: advances the state and returns a mixed 64-bit output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Acklam's rational approximation to the standard normal quantile
/// (relative error below 1.2e-9 across the open unit interval); uses only
/// +,*,/ and sqrt/log so the draw sequence is identical across platforms.
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Per-path stream: deterministically derived from (seed, path_index), so a
/// path's draws are the same no matter which worker generates it.
class PathStream {
  public:
    PathStream(std::uint64_t seed, std::uint64_t path_index) {
        state_ = seed ^ (0x632BE59BD9B4E019ULL * (path_index + 1));
        // one warm-up mix so adjacent path indices decorrelate immediately
        state_ = splitmix64(state_);
    }

    /// Uniform draw in the open interval (0,1).
    double uniform() {
        return (static_cast<double>(splitmix64(state_) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF.
    double normal() { return inverse_normal_cdf(uniform()); }

  private:
    std::uint64_t state_;
};

}  // namespace rng

// ---------------------------------------------------------------------------
// Deterministic pairwise reduction
// ---------------------------------------------------------------------------

namespace detail {

inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v, 0, v.size()); }

/// Returns the common spacing when the grid is (numerically) uniform, and a
/// negative value otherwise.
inline double uniform_spacing(const std::vector<double>& times) {
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (std::abs(times[k + 1] - times[k] - dt) > 1e-9 * dt) return -1.0;
    return dt;
}

/// Runs fn(path_index) over [0, n_paths) on n_workers threads in disjoint
/// contiguous slices.  fn must only write to per-path storage.
template <class Fn>
void for_each_path(std::size_t n_paths, unsigned n_workers, Fn&& fn) {
    if (n_workers <= 1 || n_paths < 2 * n_workers) {
        for (std::size_t p = 0; p < n_paths; ++p) fn(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (n_paths + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n_paths, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t p = lo; p < hi; ++p) fn(p);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Path containers
// ---------------------------------------------------------------------------

enum class Measure { risk_neutral, forward };

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Simulated paths, row-major per path.  increments has n_steps entries per
/// path; short_rate and stoch_integral have n_steps+1 (values on the grid).
struct PathSet {
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> times;
    Measure measure = Measure::risk_neutral;
    double forward_tau = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> increments;
    std::vector<double> short_rate;
    std::vector<double> stoch_integral;

    double increment(std::size_t path, std::size_t k) const {
        return increments[path * (times.size() - 1) + k];
    }
    double short_rate_at(std::size_t path, std::size_t i) const {
        return short_rate[path * times.size() + i];
    }
    double stoch_integral_at(std::size_t path, std::size_t i) const {
        return stoch_integral[path * times.size() + i];
    }
};

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

/// Lower-triangular matrix with entry (i,k) = Xi_T(t_i, t_k) for k < i; row i
/// of the result has exactly i entries.  For Riemann-Liouville kernels every
/// entry evaluates Phi at strictly positive arguments, so no singular
/// evaluation occurs.
inline std::vector<std::vector<double>> build_kernel_matrix(const RateModel& m,
                                                            const SimGrid& grid, double T) {
    if (!(grid.horizon() <= T))
        throw std::invalid_argument("build_kernel_matrix: grid horizon must not exceed T");
    const std::size_t n = grid.times.size();
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].resize(i);
        for (std::size_t k = 0; k < i; ++k)
            rows[i][k] = m.kernel.xi(T, grid.times[i], grid.times[k]);
    }
    return rows;
}

/// Simulates driver increments, stochastic-integral paths for maturity
/// T_for_integral, and short-rate paths on the grid.  Under
/// Measure::forward, forward_tau must satisfy tau >= horizon.  n_workers only
/// affects scheduling, never values.
///
/// On uniform grids the triangular sums are lag convolutions, so only O(N)
/// kernel values are tabulated; irregular grids materialize the O(N^2)
/// triangular matrices.
inline PathSet simulate(const RateModel& m, const SimGrid& grid, std::size_t n_paths,
                        std::uint64_t seed, Measure measure, double T_for_integral,
                        double forward_tau = std::numeric_limits<double>::quiet_NaN(),
                        unsigned n_workers = 1) {
    if (n_paths < 1) throw std::invalid_argument("simulate: need at least one path");
    if (!(grid.horizon() <= T_for_integral))
        throw std::invalid_argument("simulate: grid horizon must not exceed T_for_integral");
    if (measure == Measure::forward) {
        if (!(forward_tau >= grid.horizon()))
            throw std::invalid_argument("simulate: forward measure requires tau >= horizon");
    }

    const std::size_t N = grid.n_steps();
    const auto& t = grid.times;

    // per-step constants: sqrt of the increment variance and the measure drift
    std::vector<double> sd(N), drift(N, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
        const double dgamma = m.driver.gamma(t[k + 1]) - m.driver.gamma(t[k]);
        sd[k] = std::sqrt(dgamma);
        if (measure == Measure::forward) {
            drift[k] = m.kernel.xi_diag(forward_tau, t[k]) * m.driver.gamma_prime(t[k]) *
                       (t[k + 1] - t[k]);
        }
    }

    PathSet out;
    out.n_paths = n_paths;
    out.seed = seed;
    out.times = t;
    out.measure = measure;
    out.forward_tau = forward_tau;
    out.increments.resize(n_paths * N);
    out.short_rate.resize(n_paths * t.size());
    out.stoch_integral.resize(n_paths * t.size());

    const double dt = detail::uniform_spacing(t);
    if (dt > 0.0) {
        // lag tables: phi(m dt), Phi(m dt), and the exact Phi(T - t_k); then
        //   short_rate_i - theta(t_i) = sum_{k<i} phi((i-k) dt) dW_k
        //   integral_i = sum_{k<i} Phi(T-t_k) dW_k - sum_{k<i} Phi((i-k) dt) dW_k
        std::vector<double> phi_tab(N + 1, 0.0), phi_int_tab(N + 1, 0.0), phi_T(N);
        for (std::size_t lag = 1; lag <= N; ++lag) {
            phi_tab[lag] = m.kernel.phi(static_cast<double>(lag) * dt);
            phi_int_tab[lag] = m.kernel.antiderivative(static_cast<double>(lag) * dt);
        }
        for (std::size_t k = 0; k < N; ++k) phi_T[k] = m.kernel.antiderivative(T_for_integral - t[k]);

        detail::for_each_path(n_paths, n_workers, [&](std::size_t p) {
            rng::PathStream stream(seed, p);
            double* dw = &out.increments[p * N];
            double* sr = &out.short_rate[p * t.size()];
            double* si = &out.stoch_integral[p * t.size()];
            for (std::size_t k = 0; k < N; ++k) dw[k] = drift[k] + sd[k] * stream.normal();
            sr[0] = m.theta(t[0]);
            si[0] = 0.0;
            double prefix = 0.0;  // running sum of Phi(T - t_k) dW_k
            for (std::size_t i = 1; i < t.size(); ++i) {
                double conv_phi = 0.0, conv_int = 0.0;
                for (std::size_t k = 0; k < i; ++k) {
                    conv_phi += phi_tab[i - k] * dw[k];
                    conv_int += phi_int_tab[i - k] * dw[k];
                }
                prefix += phi_T[i - 1] * dw[i - 1];
                sr[i] = m.theta(t[i]) + conv_phi;
                si[i] = prefix - conv_int;
            }
        });
        return out;
    }

    const auto xi_rows = build_kernel_matrix(m, grid, T_for_integral);
    // phi(t_i - t_k) arranged like the kernel matrix
    std::vector<std::vector<double>> phi_rows(t.size());
    for (std::size_t i = 1; i < t.size(); ++i) {
        phi_rows[i].resize(i);
        for (std::size_t k = 0; k < i; ++k) phi_rows[i][k] = m.kernel.phi(t[i] - t[k]);
    }

    detail::for_each_path(n_paths, n_workers, [&](std::size_t p) {
        rng::PathStream stream(seed, p);
        double* dw = &out.increments[p * N];
        double* sr = &out.short_rate[p * t.size()];
        double* si = &out.stoch_integral[p * t.size()];
        for (std::size_t k = 0; k < N; ++k) dw[k] = drift[k] + sd[k] * stream.normal();
        sr[0] = m.theta(t[0]);
        si[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            double acc_xi = 0.0, acc_phi = 0.0;
            const auto& xr = xi_rows[i];
            const auto& pr = phi_rows[i];
            for (std::size_t k = 0; k < i; ++k) {
                acc_xi += xr[k] * dw[k];
                acc_phi += pr[k] * dw[k];
            }
            si[i] = acc_xi;
            sr[i] = m.theta(t[i]) + acc_phi;
        }
    });
    return out;
}

/// Monte Carlo estimate of E^{Q^tau}[P_{t,t1}/P_{t,t2}] on the given grid
/// (horizon = q.t) with 10^5-path-scale streaming: only the terminal row of
/// each kernel matrix is needed, so paths are never materialized.
inline MCEstimate estimate_ratio_expectation(const RateModel& m, const ConvexityQuery& q,
                                             const SimGrid& grid, std::size_t n_paths,
                                             std::uint64_t seed,
                                             const QuadratureSettings& settings = {},
                                             unsigned n_workers = 1) {
    q.validate();
    if (n_paths < 2) throw std::invalid_argument("estimate_ratio_expectation: need >= 2 paths");
    if (!(q.tau >= q.t))
        throw std::invalid_argument("estimate_ratio_expectation: requires tau >= t");

    // t = 0: the ratio is a constant, no randomness to estimate
    if (q.t == 0.0) {
        const double ratio = zcb_price_initial(m, q.t1, settings).price /
                             zcb_price_initial(m, q.t2, settings).price;
        return {ratio, 0.0, n_paths};
    }

    if (std::abs(grid.horizon() - q.t) > 1e-12 * std::max(1.0, q.t))
        throw std::invalid_argument("estimate_ratio_expectation: grid horizon must equal q.t");

    const std::size_t N = grid.n_steps();
    const auto& t = grid.times;

    std::vector<double> sd(N), drift(N), c(N);
    for (std::size_t k = 0; k < N; ++k) {
        sd[k] = std::sqrt(m.driver.gamma(t[k + 1]) - m.driver.gamma(t[k]));
        drift[k] =
            m.kernel.xi_diag(q.tau, t[k]) * m.driver.gamma_prime(t[k]) * (t[k + 1] - t[k]);
        // log-ratio loading: Xi_{t1}(t, t_k) - Xi_{t2}(t, t_k)
        c[k] = m.kernel.xi(q.t1, q.t, t[k]) - m.kernel.xi(q.t2, q.t, t[k]);
    }

    // deterministic part of log(P_{t,t1}/P_{t,t2}) (the stochastic integrals
    // are added per path)
    const double det_diff =
        (-m.theta.integral(q.t, q.t1) + detail::half_variance(m, q.t, q.t1, settings)) -
        (-m.theta.integral(q.t, q.t2) + detail::half_variance(m, q.t, q.t2, settings));

    std::vector<double> ratio(n_paths);
    detail::for_each_path(n_paths, n_workers, [&](std::size_t p) {
        rng::PathStream stream(seed, p);
        double g = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            const double dw = drift[k] + sd[k] * stream.normal();
            g += c[k] * dw;
        }
        ratio[p] = std::exp(det_diff + g);
    });

    MCEstimate est;
    est.n_paths = n_paths;
    est.mean = detail::pairwise_sum(ratio) / static_cast<double>(n_paths);
    std::vector<double> sq(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double d = ratio[p] - est.mean;
        sq[p] = d * d;
    }
    const double var = detail::pairwise_sum(sq) / static_cast<double>(n_paths - 1);
    est.std_error = std::sqrt(var / static_cast<double>(n_paths));
    return est;
}

}  // namespace volrate
