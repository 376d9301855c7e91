#pragma once

// OIS-style compounded-rate products: the simple compounded rate over a
// reset schedule, and present values of a compounded-rate cashflow under a
// payment delay or a reset delay, both expressed through the convexity
// adjustment factor c_t^{tau}(T_RS, T_RE).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "volrate/bond.hpp"
#include "volrate/convexity.hpp"
#include "volrate/model.hpp"

namespace volrate {

// ---------------------------------------------------------------------------
// Schedules and day counts
// ---------------------------------------------------------------------------

enum class DayCount { yearfrac_exact, act_365f, act_360 };

/// Reset and accrual date grids (year fractions) plus the payment date.  The
/// compounded rate fixes on the reset dates; accrual dates only enter through
/// their day-count fraction.
struct Schedule {
    std::vector<double> reset_dates;    // t_0^R < ... < t_n^R
    std::vector<double> accrual_dates;  // t_0^A < ... < t_n^A, same length
    double payment_date = 0.0;          // T_p >= t_n^R
    DayCount day_count = DayCount::yearfrac_exact;

    void validate() const {
        if (reset_dates.size() < 2)
            throw std::invalid_argument("Schedule: need at least 2 reset dates");
        if (accrual_dates.size() != reset_dates.size())
            throw std::invalid_argument("Schedule: reset and accrual lists must have equal length");
        for (std::size_t i = 1; i < reset_dates.size(); ++i) {
            if (!(reset_dates[i - 1] < reset_dates[i]))
                throw std::invalid_argument("Schedule: reset dates must be strictly increasing");
            if (!(accrual_dates[i - 1] < accrual_dates[i]))
                throw std::invalid_argument("Schedule: accrual dates must be strictly increasing");
        }
        if (!(payment_date >= reset_dates.back()))
            throw std::invalid_argument("Schedule: payment date must be >= last reset date");
    }

    double reset_start() const { return reset_dates.front(); }   // T_RS
    double reset_end() const { return reset_dates.back(); }      // T_RE
    bool reset_equals_accrual() const { return reset_dates == accrual_dates; }
};

/// Day-count fraction D(a,b) under the given convention.  The ACT conventions
/// treat the year-fraction inputs as exact day counts (365 days per year
/// fraction), rounded to whole days.
inline double day_count_fraction(DayCount convention, double a, double b) {
    if (!(a <= b)) throw std::invalid_argument("day_count_fraction: requires a <= b");
    switch (convention) {
        case DayCount::yearfrac_exact:
            return b - a;
        case DayCount::act_365f:
            return std::round((b - a) * 365.0) / 365.0;
        case DayCount::act_360:
            return std::round((b - a) * 365.0) / 360.0;
    }
    throw std::invalid_argument("day_count_fraction: unknown convention");
}

inline double day_count_fraction(const Schedule& schedule, double a, double b) {
    return day_count_fraction(schedule.day_count, a, b);
}

// ---------------------------------------------------------------------------
// Simple compounded rate
// ---------------------------------------------------------------------------

/// r^S(t_0, t_n) = (prod_i 1/P_{t_i, t_{i+1}} - 1) / D(t_0, t_n) over the
/// reset schedule; bond_prices[i] is P observed for the i-th reset period.
inline double simple_compounded_rate(const std::vector<double>& bond_prices,
                                     const Schedule& schedule) {
    schedule.validate();
    if (bond_prices.size() != schedule.reset_dates.size() - 1)
        throw std::invalid_argument("simple_compounded_rate: need one price per reset period");
    double growth = 1.0;
    for (const double p : bond_prices) {
        if (!(p > 0.0))
            throw std::invalid_argument("simple_compounded_rate: bond prices must be > 0");
        growth /= p;
    }
    const double D = day_count_fraction(schedule, schedule.reset_start(), schedule.reset_end());
    if (!(D > 0.0))
        throw std::invalid_argument("simple_compounded_rate: day-count fraction must be > 0");
    return (growth - 1.0) / D;
}

// ---------------------------------------------------------------------------
// Present values
// ---------------------------------------------------------------------------

/// PV together with the ingredients worth reporting alongside it.
struct PVBreakdown {
    double pv = 0.0;
    double convexity_factor = 1.0;           // c_t^{T_p}(T_RS, T_RE)
    double p0_ratio = 1.0;                   // P_{0,T_RS} / P_{0,T_RE}
};

namespace detail {

inline PVBreakdown pv_ingredients(const RateModel& m, const Schedule& schedule, double t,
                                  const QuadratureSettings& settings) {
    ConvexityQuery q;
    q.t = t;
    q.t1 = schedule.reset_start();
    q.t2 = schedule.reset_end();
    q.tau = schedule.payment_date;
    const ConvexityResult c = convexity_adjustment(m, q, ConvexityMethodChoice::auto_select,
                                                   settings);
    PVBreakdown out;
    out.convexity_factor = c.adjustment;
    out.p0_ratio = zcb_price_initial(m, q.t1, settings).price /
                   zcb_price_initial(m, q.t2, settings).price;
    return out;
}

}  // namespace detail

/// Payment-delay PV (reset dates = accrual dates, payment at T_p >= T_RE):
///
///   PV = P_{0,T_p} ( (P_{0,T_RS}/P_{0,T_RE}) c_t^{T_p}(T_RS,T_RE) - 1 ).
///
/// When c = 1 (t = 0 or T_p = T_RE) this collapses to the classical forward
/// identity P_{0,T_RS} - P_{0,T_RE}.
inline PVBreakdown pv_flow_payment_delay_breakdown(const RateModel& m, const Schedule& schedule,
                                                   double t,
                                                   const QuadratureSettings& settings = {}) {
    schedule.validate();
    if (!schedule.reset_equals_accrual())
        throw std::invalid_argument(
            "pv_flow_payment_delay: reset and accrual schedules must coincide");
    if (!(t <= schedule.reset_start()))
        throw std::invalid_argument("pv_flow_payment_delay: requires t <= first reset date");
    PVBreakdown out = detail::pv_ingredients(m, schedule, t, settings);
    const double p0_pay = zcb_price_initial(m, schedule.payment_date, settings).price;
    out.pv = p0_pay * (out.p0_ratio * out.convexity_factor - 1.0);
    return out;
}

inline double pv_flow_payment_delay(const RateModel& m, const Schedule& schedule, double t,
                                    const QuadratureSettings& settings = {}) {
    return pv_flow_payment_delay_breakdown(m, schedule, t, settings).pv;
}

/// Reset-delay PV: accrual dates differ from reset dates and the time-0
/// compounded-rate observation r0_S enters directly:
///
///   PV = P_{0,T_p} (D^A / D^R) { (P_{0,T_RS}/P_{0,T_RE}) (c - 1) + D^R r0_S },
///
/// where D^R and D^A are the day-count fractions of the full reset and
/// accrual periods.  With equal schedules and r0_S implied from the initial
/// curve this reproduces pv_flow_payment_delay exactly.
inline PVBreakdown pv_flow_reset_delay_breakdown(const RateModel& m, const Schedule& schedule,
                                                 double t, double r0_S,
                                                 const QuadratureSettings& settings = {}) {
    schedule.validate();
    if (!(t <= schedule.reset_start()))
        throw std::invalid_argument("pv_flow_reset_delay: requires t <= first reset date");
    const double D_R = day_count_fraction(schedule, schedule.reset_start(), schedule.reset_end());
    const double D_A =
        day_count_fraction(schedule, schedule.accrual_dates.front(), schedule.accrual_dates.back());
    if (!(D_R > 0.0))
        throw std::invalid_argument("pv_flow_reset_delay: reset day-count fraction must be > 0");
    PVBreakdown out = detail::pv_ingredients(m, schedule, t, settings);
    const double p0_pay = zcb_price_initial(m, schedule.payment_date, settings).price;
    out.pv = p0_pay * (D_A / D_R) *
             (out.p0_ratio * (out.convexity_factor - 1.0) + D_R * r0_S);
    return out;
}

inline double pv_flow_reset_delay(const RateModel& m, const Schedule& schedule, double t,
                                  double r0_S, const QuadratureSettings& settings = {}) {
    return pv_flow_reset_delay_breakdown(m, schedule, t, r0_S, settings).pv;
}

}  // namespace volrate
