#pragma once

// Gaussian martingale driver, described through the derivative gamma'(t) of
// its quadratic variation gamma(t) = E[W_t^2]:
//
//   Brownian           gamma' = 1            gamma(t) = t
//   DeterministicScale gamma' = sigma(t)^2   (constant or piecewise-linear sigma)
//   OUWeight           gamma' = e^{-2 beta t}, gamma(t) = (1 - e^{-2 beta t}) / (2 beta)

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace volrate {

class DriverSpec {
  public:
    enum class Variant { brownian, deterministic_scale, ou_weight };

    /// Standard Brownian driver, gamma' identically 1.
    static DriverSpec brownian() {
        DriverSpec d;
        d.variant_ = Variant::brownian;
        return d;
    }

    /// Deterministic constant volatility scale, gamma'(t) = sigma^2.
    static DriverSpec scaled(double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("DriverSpec: scale sigma must be > 0");
        DriverSpec d;
        d.variant_ = Variant::deterministic_scale;
        d.points_ = {{0.0, sigma}};
        return d;
    }

    /// Deterministic time-varying scale sigma(t) as a piecewise-linear table
    /// (flat extrapolation); gamma'(t) = sigma(t)^2, gamma integrated exactly
    /// segment by segment.
    static DriverSpec scaled_table(std::vector<std::pair<double, double>> points) {
        if (points.size() < 2) throw std::invalid_argument("DriverSpec: table needs >= 2 points");
        if (!(points.front().first >= 0.0))
            throw std::invalid_argument("DriverSpec: table abscissae must be >= 0");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i > 0 && !(points[i - 1].first < points[i].first))
                throw std::invalid_argument("DriverSpec: table abscissae must be strictly increasing");
            if (!(points[i].second > 0.0))
                throw std::invalid_argument("DriverSpec: scale values must be > 0 (gamma' > 0)");
        }
        DriverSpec d;
        d.variant_ = Variant::deterministic_scale;
        d.points_ = std::move(points);
        return d;
    }

    /// Ornstein-Uhlenbeck weighting, gamma'(t) = e^{-2 beta t}.
    static DriverSpec ou(double beta) {
        if (!(beta > 0.0)) throw std::invalid_argument("DriverSpec: beta must be > 0");
        DriverSpec d;
        d.variant_ = Variant::ou_weight;
        d.beta_ = beta;
        return d;
    }

    Variant variant() const { return variant_; }
    double beta() const { return beta_; }

    /// gamma'(t) > 0 for t >= 0.
    double gamma_prime(double t) const {
        if (!(t >= 0.0)) throw std::invalid_argument("DriverSpec: gamma_prime requires t >= 0");
        switch (variant_) {
            case Variant::brownian:
                return 1.0;
            case Variant::deterministic_scale: {
                const double s = scale_value(t);
                return s * s;
            }
            case Variant::ou_weight:
                return std::exp(-2.0 * beta_ * t);
        }
        throw std::logic_error("DriverSpec: unreachable");
    }

    /// gamma(t) = int_0^t gamma'(s) ds, exact per variant.
    double gamma(double t) const {
        if (!(t >= 0.0)) throw std::invalid_argument("DriverSpec: gamma requires t >= 0");
        switch (variant_) {
            case Variant::brownian:
                return t;
            case Variant::deterministic_scale:
                return scale_square_integral(t);
            case Variant::ou_weight:
                return -std::expm1(-2.0 * beta_ * t) / (2.0 * beta_);
        }
        throw std::logic_error("DriverSpec: unreachable");
    }

  private:
    DriverSpec() = default;

    double scale_value(double t) const {
        if (points_.size() == 1 || t <= points_.front().first) return points_.front().second;
        if (t >= points_.back().first) return points_.back().second;
        std::size_t lo = 0, hi = points_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (points_[mid].first <= t)
                lo = mid;
            else
                hi = mid;
        }
        const double w = (t - points_[lo].first) / (points_[hi].first - points_[lo].first);
        return (1.0 - w) * points_[lo].second + w * points_[hi].second;
    }

    // int_0^t sigma(s)^2 ds; sigma is linear on each segment, so each piece
    // integrates a quadratic exactly via (a^2 + ab + b^2)/3 * width
    double scale_square_integral(double t) const {
        if (points_.size() == 1) {
            const double s = points_.front().second;
            return s * s * t;
        }
        auto segment = [](double sa, double sb, double width) {
            return width * (sa * sa + sa * sb + sb * sb) / 3.0;
        };
        const double x0 = points_.front().first;
        const double s0 = points_.front().second;
        if (t <= x0) return s0 * s0 * t;
        double acc = s0 * s0 * x0;  // flat head
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            const double xa = points_[i].first, xb = points_[i + 1].first;
            if (t <= xa) break;
            const double upper = std::min(t, xb);
            acc += segment(points_[i].second, scale_value(upper), upper - xa);
        }
        if (t > points_.back().first) {
            const double s = points_.back().second;
            acc += s * s * (t - points_.back().first);
        }
        return acc;
    }

    Variant variant_ = Variant::brownian;
    double beta_ = 1.0;
    std::vector<std::pair<double, double>> points_;
};

}  // namespace volrate
