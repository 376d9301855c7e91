#pragma once

// Yield-curve empirics: CSV panel ingestion, monotone-cubic interpolation
// across maturity, and Hurst-exponent estimation per maturity from the
// increment-moment regression
//
//   log m(Delta) = 2H log(Delta) + c,   m(Delta) = mean |r_{t+Delta} - r_t|^2,
//
// with Delta counted in observation steps and missing observations excluded
// pairwise (imputation would bias m(Delta) toward smoothness).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "volrate/numerics.hpp"

namespace volrate {

// ---------------------------------------------------------------------------
// Panel container
// ---------------------------------------------------------------------------

/// Date-by-maturity matrix of rates; missing cells are NaN.  Dates are
/// ISO-8601 strings, so lexicographic order is chronological order.
struct YieldPanel {
    std::vector<std::string> dates;   // strictly increasing
    std::vector<double> maturities;   // strictly increasing year fractions
    std::vector<double> rates;        // row-major date x maturity
    std::size_t duplicate_warnings = 0;

    double rate_at(std::size_t date_idx, std::size_t mat_idx) const {
        return rates[date_idx * maturities.size() + mat_idx];
    }
    double& rate_at(std::size_t date_idx, std::size_t mat_idx) {
        return rates[date_idx * maturities.size() + mat_idx];
    }
    bool has(std::size_t date_idx, std::size_t mat_idx) const {
        return !std::isnan(rate_at(date_idx, mat_idx));
    }
};

// ---------------------------------------------------------------------------
// CSV ingestion / export
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool parse_full_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

/// Reads a `date,maturity,rate` CSV into a panel.  Duplicate (date, maturity)
/// cells keep the last occurrence and bump duplicate_warnings; a malformed
/// row aborts with its line number.
inline YieldPanel ingest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("ingest_csv: empty input");
    if (detail::trim_ws(line) != "date,maturity,rate")
        throw std::invalid_argument("ingest_csv: expected header 'date,maturity,rate'");

    // date -> maturity -> rate; std::map keeps both axes sorted as we insert
    std::map<std::string, std::map<double, double>> cells;
    std::map<double, bool> maturity_set;
    std::size_t warnings = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = detail::trim_ws(line);
        if (row.empty()) continue;
        const std::size_t c1 = row.find(',');
        const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : row.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            row.find(',', c2 + 1) != std::string::npos)
            throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                        ": expected 3 comma-separated fields");
        const std::string date = detail::trim_ws(row.substr(0, c1));
        const std::string mat_s = detail::trim_ws(row.substr(c1 + 1, c2 - c1 - 1));
        const std::string rate_s = detail::trim_ws(row.substr(c2 + 1));
        double maturity = 0.0, rate = 0.0;
        if (!detail::is_iso_date(date))
            throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                        ": malformed ISO date '" + date + "'");
        if (!detail::parse_full_double(mat_s, maturity) || !std::isfinite(maturity))
            throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                        ": malformed maturity '" + mat_s + "'");
        if (!detail::parse_full_double(rate_s, rate) || !std::isfinite(rate))
            throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                        ": malformed rate '" + rate_s + "'");
        auto& by_mat = cells[date];
        auto [it, inserted] = by_mat.emplace(maturity, rate);
        if (!inserted) {
            it->second = rate;  // last occurrence wins
            ++warnings;
        }
        maturity_set[maturity] = true;
    }
    if (cells.empty()) throw std::invalid_argument("ingest_csv: no data rows");

    YieldPanel panel;
    panel.duplicate_warnings = warnings;
    panel.maturities.reserve(maturity_set.size());
    for (const auto& [m, _] : maturity_set) panel.maturities.push_back(m);
    panel.dates.reserve(cells.size());
    panel.rates.assign(cells.size() * panel.maturities.size(),
                       std::numeric_limits<double>::quiet_NaN());
    std::size_t di = 0;
    for (const auto& [date, by_mat] : cells) {
        panel.dates.push_back(date);
        for (std::size_t mi = 0; mi < panel.maturities.size(); ++mi) {
            auto it = by_mat.find(panel.maturities[mi]);
            if (it != by_mat.end()) panel.rates[di * panel.maturities.size() + mi] = it->second;
        }
        ++di;
    }
    return panel;
}

inline YieldPanel ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("ingest_csv: cannot open '" + path + "'");
    return ingest_csv(in);
}

/// Writes the non-missing cells back as CSV, sorted by (date, maturity),
/// with %.17g formatting so ingest(export(panel)) round-trips bit-exactly.
inline void export_csv(const YieldPanel& panel, std::ostream& out) {
    out << "date,maturity,rate\n";
    for (std::size_t di = 0; di < panel.dates.size(); ++di)
        for (std::size_t mi = 0; mi < panel.maturities.size(); ++mi)
            if (panel.has(di, mi))
                out << panel.dates[di] << ',' << detail::format_g17(panel.maturities[mi]) << ','
                    << detail::format_g17(panel.rate_at(di, mi)) << '\n';
}

// ---------------------------------------------------------------------------
// Curve interpolation
// ---------------------------------------------------------------------------

/// Monotone cubic through the observed (maturity, rate) points of one date,
/// evaluated at the targets; flat beyond the observed range.
inline std::vector<double> interpolate_curve(const YieldPanel& panel, std::size_t date_idx,
                                             const std::vector<double>& target_maturities) {
    if (date_idx >= panel.dates.size())
        throw std::invalid_argument("interpolate_curve: date index out of range");
    std::vector<std::pair<double, double>> knots;
    for (std::size_t mi = 0; mi < panel.maturities.size(); ++mi)
        if (panel.has(date_idx, mi))
            knots.emplace_back(panel.maturities[mi], panel.rate_at(date_idx, mi));
    if (knots.size() < 2)
        throw std::invalid_argument("interpolate_curve: fewer than 2 observations on " +
                                    panel.dates[date_idx]);
    const MonotoneCubic spline(std::move(knots));
    std::vector<double> out(target_maturities.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spline(target_maturities[i]);
    return out;
}

inline std::vector<double> interpolate_curve(const YieldPanel& panel, const std::string& date,
                                             const std::vector<double>& target_maturities) {
    for (std::size_t di = 0; di < panel.dates.size(); ++di)
        if (panel.dates[di] == date) return interpolate_curve(panel, di, target_maturities);
    throw std::invalid_argument("interpolate_curve: date '" + date + "' not in panel");
}

// ---------------------------------------------------------------------------
// Hurst regression
// ---------------------------------------------------------------------------

struct HurstEstimate {
    double maturity = std::numeric_limits<double>::quiet_NaN();
    double hurst = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    std::vector<int> lags_used;
    std::size_t n_obs = 0;  // non-missing observations in the series

    /// True when estimation failed (degenerate series) and this entry is an
    /// error marker rather than an estimate.
    bool failed() const { return std::isnan(hurst); }
};

inline const std::vector<int>& default_hurst_lags() {
    static const std::vector<int> lags{1, 2, 4, 8, 16};
    return lags;
}

/// Increment-moment regression on an equally-spaced series (NaN = missing):
/// H = slope/2 of log m(Delta) against log Delta.  Throws on a constant
/// series (some m(Delta) = 0) or when a lag has no valid pair.
inline HurstEstimate estimate_hurst(const std::vector<double>& series,
                                    const std::vector<int>& lags = default_hurst_lags(),
                                    double maturity = std::numeric_limits<double>::quiet_NaN()) {
    if (lags.size() < 2)
        throw std::invalid_argument("estimate_hurst: need at least 2 lags for the regression");
    int max_lag = 0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        if (lags[i] < 1) throw std::invalid_argument("estimate_hurst: lags must be >= 1");
        for (std::size_t j = 0; j < i; ++j)
            if (lags[i] == lags[j]) throw std::invalid_argument("estimate_hurst: lags must be distinct");
        max_lag = std::max(max_lag, lags[i]);
    }
    if (series.size() < static_cast<std::size_t>(max_lag) + 2)
        throw std::invalid_argument("estimate_hurst: need at least max(lags)+2 observations");

    std::vector<double> log_lag, log_m;
    for (const int lag : lags) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < series.size(); ++i) {
            const double a = series[i];
            const double b = series[i + static_cast<std::size_t>(lag)];
            if (std::isnan(a) || std::isnan(b)) continue;  // pairwise skip
            const double d = b - a;
            sum += d * d;
            ++count;
        }
        if (count == 0)
            throw std::invalid_argument("estimate_hurst: no valid pairs at lag " +
                                        std::to_string(lag));
        const double m = sum / static_cast<double>(count);
        if (m <= 0.0)
            throw std::invalid_argument("estimate_hurst: degenerate series (m(" +
                                        std::to_string(lag) + ") = 0)");
        log_lag.push_back(std::log(static_cast<double>(lag)));
        log_m.push_back(std::log(m));
    }

    const RegressionFit fit = ols_fit(log_lag, log_m);
    HurstEstimate est;
    est.maturity = maturity;
    est.hurst = 0.5 * fit.slope;
    est.intercept = fit.intercept;
    est.r_squared = fit.r_squared;
    est.lags_used = lags;
    for (const double r : series)
        if (!std::isnan(r)) ++est.n_obs;
    return est;
}

/// Interpolates every date's curve onto the target maturities, then runs the
/// Hurst regression down each maturity column.  Dates with fewer than two
/// observations contribute missing values; maturities whose series are
/// degenerate come back as error markers (NaN fields), never dropped.
inline std::vector<HurstEstimate> hurst_by_maturity(
    const YieldPanel& panel, const std::vector<double>& maturities,
    const std::vector<int>& lags = default_hurst_lags()) {
    std::vector<HurstEstimate> out;
    if (maturities.empty()) return out;

    const std::size_t n_dates = panel.dates.size();
    std::vector<std::vector<double>> columns(maturities.size(),
                                             std::vector<double>(n_dates,
                                                 std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t di = 0; di < n_dates; ++di) {
        try {
            const std::vector<double> row = interpolate_curve(panel, di, maturities);
            for (std::size_t mi = 0; mi < maturities.size(); ++mi) columns[mi][di] = row[mi];
        } catch (const std::invalid_argument&) {
            // date unusable (fewer than 2 observations); leave the row missing
        }
    }

    out.reserve(maturities.size());
    for (std::size_t mi = 0; mi < maturities.size(); ++mi) {
        try {
            out.push_back(estimate_hurst(columns[mi], lags, maturities[mi]));
        } catch (const std::invalid_argument&) {
            HurstEstimate marker;
            marker.maturity = maturities[mi];
            marker.lags_used = lags;
            for (const double r : columns[mi])
                if (!std::isnan(r)) ++marker.n_obs;
            out.push_back(marker);
        }
    }
    return out;
}

}  // namespace volrate
