#pragma once

// Convolution kernel phi of the Gaussian Volterra short rate and the derived
// quantities built from its antiderivative Phi (with Phi' = -phi):
//
//   Xi_T(t,u)      = Phi(T-u) - Phi(t-u)          (bond-volatility block)
//   Xi_T(u)        = Xi_T(u,u)                    (diagonal)
//   Sigma_t^{T,tau} = Phi(T-t) - Phi(tau-t)       (ratio log-volatility)
//
// Variants: Exponential (sigma e^{-alpha x}, Ornstein-Uhlenbeck rate),
// Riemann-Liouville (sigma x^{H-1/2}, fractional rate), and a tabulated
// kernel with linear interpolation.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace volrate {

class KernelSpec {
  public:
    enum class Variant { exponential, riemann_liouville, tabulated };

    /// Exponential kernel phi(x) = sigma e^{-alpha x}; alpha > 0, sigma >= 0.
    static KernelSpec exponential(double alpha, double sigma = 1.0) {
        if (!(alpha > 0.0)) throw std::invalid_argument("KernelSpec: alpha must be > 0");
        if (!(sigma >= 0.0)) throw std::invalid_argument("KernelSpec: sigma must be >= 0");
        KernelSpec k;
        k.variant_ = Variant::exponential;
        k.alpha_ = alpha;
        k.sigma_ = sigma;
        return k;
    }

    /// Riemann-Liouville kernel phi(x) = sigma x^{H-1/2}; H in (0,1).
    static KernelSpec riemann_liouville(double hurst, double sigma = 1.0) {
        if (!(hurst > 0.0 && hurst < 1.0))
            throw std::invalid_argument("KernelSpec: hurst must lie in (0,1)");
        if (!(sigma >= 0.0)) throw std::invalid_argument("KernelSpec: sigma must be >= 0");
        KernelSpec k;
        k.variant_ = Variant::riemann_liouville;
        k.hurst_ = hurst;
        k.sigma_ = sigma;
        return k;
    }

    /// Tabulated kernel: strictly positive phi values on a strictly
    /// increasing grid, linearly interpolated; flat extrapolation beyond the
    /// last node (and before the first when the grid starts after 0).
    static KernelSpec tabulated(std::vector<std::pair<double, double>> points,
                                double sigma = 1.0) {
        if (points.size() < 2) throw std::invalid_argument("KernelSpec: table needs >= 2 points");
        if (!(points.front().first >= 0.0))
            throw std::invalid_argument("KernelSpec: table abscissae must be >= 0");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i > 0 && !(points[i - 1].first < points[i].first))
                throw std::invalid_argument("KernelSpec: table abscissae must be strictly increasing");
            if (!(points[i].second > 0.0))
                throw std::invalid_argument("KernelSpec: table values must be > 0 (phi is strictly positive)");
        }
        if (!(sigma >= 0.0)) throw std::invalid_argument("KernelSpec: sigma must be >= 0");
        KernelSpec k;
        k.variant_ = Variant::tabulated;
        k.points_ = std::move(points);
        k.sigma_ = sigma;
        k.build_cumulative();
        return k;
    }

    Variant variant() const { return variant_; }
    double alpha() const { return alpha_; }
    double hurst() const { return hurst_; }
    double hurst_plus() const { return hurst_ + 0.5; }
    double scale() const { return sigma_; }

    /// phi(x) for x >= 0.  The Riemann-Liouville kernel with H < 1/2 is
    /// singular at x = 0 and signals the singular evaluation.
    double phi(double x) const {
        if (!(x >= 0.0)) throw std::invalid_argument("KernelSpec: phi requires x >= 0");
        switch (variant_) {
            case Variant::exponential:
                return sigma_ * std::exp(-alpha_ * x);
            case Variant::riemann_liouville: {
                const double p = hurst_ - 0.5;
                if (x == 0.0) {
                    if (p < 0.0) throw std::domain_error("KernelSpec: phi singular at x = 0 for H < 1/2");
                    if (p == 0.0) return sigma_;
                    return 0.0;
                }
                return sigma_ * std::pow(x, p);
            }
            case Variant::tabulated:
                return sigma_ * table_value(x);
        }
        throw std::logic_error("KernelSpec: unreachable");
    }

    /// Antiderivative Phi with Phi' = -phi.  Exponential: sigma e^{-alpha z}
    /// / alpha, defined for every real z (needed when tau < t).  Riemann-
    /// Liouville: -sigma z^{H+1/2} / (H+1/2), z >= 0.  Tabulated: -int_0^z
    /// phi, z >= 0, exact on the piecewise-linear representation.
    double antiderivative(double z) const {
        switch (variant_) {
            case Variant::exponential:
                return sigma_ * std::exp(-alpha_ * z) / alpha_;
            case Variant::riemann_liouville: {
                if (!(z >= 0.0))
                    throw std::domain_error("KernelSpec: Riemann-Liouville Phi requires z >= 0");
                const double hp = hurst_plus();
                return -sigma_ * std::pow(z, hp) / hp;
            }
            case Variant::tabulated: {
                if (!(z >= 0.0)) throw std::domain_error("KernelSpec: tabulated Phi requires z >= 0");
                return -sigma_ * table_cumulative(z);
            }
        }
        throw std::logic_error("KernelSpec: unreachable");
    }

    /// Xi_T(t,u) = Phi(T-u) - Phi(t-u) for u <= t <= T.
    double xi(double T, double t, double u) const {
        if (!(u <= t && t <= T)) throw std::invalid_argument("KernelSpec: xi requires u <= t <= T");
        return antiderivative(T - u) - antiderivative(t - u);
    }

    /// Diagonal Xi_T(u) = Xi_T(u,u).
    double xi_diag(double T, double u) const { return xi(T, u, u); }

    /// Sigma_t^{T,tau} = Phi(T-t) - Phi(tau-t) for t <= min(T,tau); its sign
    /// is the sign of tau - T because phi > 0 makes Phi decreasing.
    double sigma_vol(double t, double T, double tau) const {
        if (!(t <= T && t <= tau))
            throw std::invalid_argument("KernelSpec: sigma_vol requires t <= min(T,tau)");
        return antiderivative(T - t) - antiderivative(tau - t);
    }

  private:
    KernelSpec() = default;

    double table_value(double x) const {
        if (x <= points_.front().first) return points_.front().second;
        if (x >= points_.back().first) return points_.back().second;
        std::size_t lo = 0, hi = points_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (points_[mid].first <= x)
                lo = mid;
            else
                hi = mid;
        }
        const double w = (x - points_[lo].first) / (points_[hi].first - points_[lo].first);
        return (1.0 - w) * points_[lo].second + w * points_[hi].second;
    }

    // cumulative_[i] = int_0^{x_i} phi_table(x) dx (unscaled)
    void build_cumulative() {
        cumulative_.assign(points_.size(), 0.0);
        cumulative_[0] = points_.front().first * points_.front().second;  // flat head
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            const double width = points_[i + 1].first - points_[i].first;
            cumulative_[i + 1] =
                cumulative_[i] + width * 0.5 * (points_[i].second + points_[i + 1].second);
        }
    }

    // int_0^z phi_table(x) dx, exact for the piecewise-linear representation
    double table_cumulative(double z) const {
        if (z <= points_.front().first) return z * points_.front().second;
        if (z >= points_.back().first)
            return cumulative_.back() + (z - points_.back().first) * points_.back().second;
        std::size_t lo = 0, hi = points_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (points_[mid].first <= z)
                lo = mid;
            else
                hi = mid;
        }
        return cumulative_[lo] + (z - points_[lo].first) * 0.5 * (points_[lo].second + table_value(z));
    }

    Variant variant_ = Variant::exponential;
    double alpha_ = 1.0;
    double hurst_ = 0.5;
    double sigma_ = 1.0;
    std::vector<std::pair<double, double>> points_;
    std::vector<double> cumulative_;
};

}  // namespace volrate
