#pragma once

// Deterministic short-rate drift curve theta(t) and its exact integral
// Theta_{t,T} = int_t^T theta(s) ds in the three supported representations:
// constant level, Vasicek form, and piecewise-linear table.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace volrate {

class ThetaCurve {
  public:
    enum class Variant { constant, vasicek, table };

    /// Constant level theta(t) = rate.
    static ThetaCurve constant(double rate) {
        ThetaCurve c;
        c.variant_ = Variant::constant;
        c.rate_ = rate;
        return c;
    }

    /// Vasicek form theta(t) = r0 e^{-kappa t} + mu (1 - e^{-kappa t}),
    /// the deterministic part of the Vasicek short rate.
    static ThetaCurve vasicek(double r0, double kappa, double mu) {
        if (!(kappa > 0.0)) throw std::invalid_argument("ThetaCurve: kappa must be > 0");
        ThetaCurve c;
        c.variant_ = Variant::vasicek;
        c.r0_ = r0;
        c.kappa_ = kappa;
        c.mu_ = mu;
        return c;
    }

    /// Piecewise-linear table of (time, rate) points with strictly increasing
    /// abscissae; flat extrapolation outside the tabulated range.
    static ThetaCurve table(std::vector<std::pair<double, double>> points) {
        if (points.size() < 2) throw std::invalid_argument("ThetaCurve: table needs >= 2 points");
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (!(points[i - 1].first < points[i].first))
                throw std::invalid_argument("ThetaCurve: table abscissae must be strictly increasing");
        }
        ThetaCurve c;
        c.variant_ = Variant::table;
        c.points_ = std::move(points);
        return c;
    }

    Variant variant() const { return variant_; }

    /// theta(t).
    double operator()(double t) const {
        switch (variant_) {
            case Variant::constant:
                return rate_;
            case Variant::vasicek:
                return mu_ + (r0_ - mu_) * std::exp(-kappa_ * t);
            case Variant::table:
                return table_value(t);
        }
        throw std::logic_error("ThetaCurve: unreachable");
    }

    /// Theta_{t,T} = int_t^T theta(s) ds, exact per representation.
    double integral(double t, double T) const {
        if (!(0.0 <= t && t <= T)) throw std::invalid_argument("ThetaCurve: requires 0 <= t <= T");
        switch (variant_) {
            case Variant::constant:
                return rate_ * (T - t);
            case Variant::vasicek:
                // int mu + (r0-mu) e^{-kappa s} ds
                return mu_ * (T - t) + (r0_ - mu_) * (std::exp(-kappa_ * t) - std::exp(-kappa_ * T)) / kappa_;
            case Variant::table:
                return table_integral(T) - table_integral(t);
        }
        throw std::logic_error("ThetaCurve: unreachable");
    }

  private:
    ThetaCurve() = default;

    double table_value(double t) const {
        if (t <= points_.front().first) return points_.front().second;
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

    // int_0^t theta(s) ds for the table variant: exact trapezoids over the
    // covered segments, flat tails outside the tabulated range
    double table_integral(double t) const {
        const double x0 = points_.front().first;
        double acc = 0.0;
        if (t <= x0) return points_.front().second * t;
        acc += points_.front().second * x0;
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            const double xa = points_[i].first, xb = points_[i + 1].first;
            if (t <= xa) break;
            const double upper = std::min(t, xb);
            acc += (upper - xa) * 0.5 * (points_[i].second + table_value(upper));
        }
        if (t > points_.back().first) acc += (t - points_.back().first) * points_.back().second;
        return acc;
    }

    Variant variant_ = Variant::constant;
    double rate_ = 0.0;
    double r0_ = 0.0, kappa_ = 1.0, mu_ = 0.0;
    std::vector<std::pair<double, double>> points_;
};

}  // namespace volrate
