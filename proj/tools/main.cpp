// volrate CLI: JSON for scalar queries, CSV for sweeps and paths.
//
// Exit codes: 0 success; 2 usage or configuration error (message on stderr);
// 1 numerical failure (JSON error object on stdout).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volrate/volrate.hpp"

namespace {

using volrate::detail::format_g17;

// ---------------------------------------------------------------------- util

struct GridSpec {
    double t0 = 0.0, t1 = 0.0;
    std::size_t n = 0;
};

GridSpec parse_grid_spec(const std::string& text) {
    GridSpec g;
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("grid spec must look like t0:t1:n, got '" + text + "'");
    try {
        std::size_t pos = 0;
        g.t0 = std::stod(text.substr(0, c1), &pos);
        g.t1 = std::stod(text.substr(c1 + 1, c2 - c1 - 1), &pos);
        const long n = std::stol(text.substr(c2 + 1), &pos);
        if (n < 1) throw std::invalid_argument("count");
        g.n = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid spec must look like t0:t1:n, got '" + text + "'");
    }
    if (g.n > 1 && !(g.t0 < g.t1))
        throw std::invalid_argument("grid spec needs t0 < t1 for more than one point");
    return g;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

struct SweepSpec {
    std::string param;  // "alpha" or "hurst"
    GridSpec grid;
};

SweepSpec parse_sweep_spec(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("sweep spec must look like name=start:end:count");
    SweepSpec s;
    s.param = text.substr(0, eq);
    if (s.param != "alpha" && s.param != "hurst")
        throw std::invalid_argument("sweep parameter must be 'alpha' or 'hurst', got '" + s.param +
                                    "'");
    s.grid = parse_grid_spec(text.substr(eq + 1));
    return s;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const double v : parse_double_list(text)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) throw std::invalid_argument("lags must be integers");
        out.push_back(i);
    }
    return out;
}

const char* method_name(volrate::ConvexityMethod m) {
    switch (m) {
        case volrate::ConvexityMethod::closed_form: return "closed_form";
        case volrate::ConvexityMethod::quadrature: return "quadrature";
        case volrate::ConvexityMethod::asymptotic_small_t: return "asymptotic_small_t";
    }
    return "unknown";
}

volrate::ConvexityMethodChoice method_choice(const std::string& name) {
    if (name == "auto") return volrate::ConvexityMethodChoice::auto_select;
    if (name == "closed") return volrate::ConvexityMethodChoice::closed_form;
    if (name == "quad") return volrate::ConvexityMethodChoice::quadrature;
    if (name == "asymptotic") return volrate::ConvexityMethodChoice::asymptotic_small_t;
    throw std::invalid_argument("unknown method '" + name + "'");
}

volrate::DayCount day_count_from_string(const std::string& name) {
    if (name == "YEARFRAC_EXACT") return volrate::DayCount::yearfrac_exact;
    if (name == "ACT_365F") return volrate::DayCount::act_365f;
    if (name == "ACT_360") return volrate::DayCount::act_360;
    throw std::invalid_argument("unknown day_count '" + name + "'");
}

volrate::Schedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open schedule file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("schedule: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("reset") || !j.contains("payment"))
        throw std::invalid_argument("schedule: need at least 'reset' and 'payment' fields");
    volrate::Schedule s;
    for (const auto& v : j.at("reset")) s.reset_dates.push_back(v.get<double>());
    if (j.contains("accrual"))
        for (const auto& v : j.at("accrual")) s.accrual_dates.push_back(v.get<double>());
    else
        s.accrual_dates = s.reset_dates;
    s.payment_date = j.at("payment").get<double>();
    if (j.contains("day_count")) s.day_count = day_count_from_string(j.at("day_count"));
    s.validate();
    return s;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    return file;
}

// ------------------------------------------------------------- subcommands

struct PriceArgs {
    std::string config;
    std::optional<double> maturity;
    std::string grid;
};

int run_price(const PriceArgs& a) {
    const volrate::RateModel model = volrate::load_model(a.config);
    if (!a.grid.empty()) {
        const GridSpec g = parse_grid_spec(a.grid);
        if (g.t0 < 0.0) throw std::invalid_argument("price: grid maturities must be >= 0");
        std::cout << "maturity,P0T,f0T\n";
        for (const double T : linspace(g.t0, g.t1, g.n)) {
            const double p = volrate::zcb_price_initial(model, T).price;
            const double f =
                (T > 0.0) ? volrate::forward_rate_initial(model, T) : model.theta(0.0);
            std::cout << format_g17(T) << ',' << format_g17(p) << ',' << format_g17(f) << '\n';
        }
        return 0;
    }
    if (!a.maturity) throw std::invalid_argument("price: need --maturity or --grid");
    const double T = *a.maturity;
    nlohmann::json out;
    out["P0T"] = volrate::zcb_price_initial(model, T).price;
    out["f0T"] = (T > 0.0) ? volrate::forward_rate_initial(model, T) : model.theta(0.0);
    std::cout << out.dump() << '\n';
    return 0;
}

struct ConvexityArgs {
    std::string config;
    double t = 0.0, t1 = 0.0, t2 = 0.0, tau = 0.0;
    std::string method = "auto";
    std::string sweep;
};

int run_convexity(const ConvexityArgs& a) {
    const volrate::RateModel model = volrate::load_model(a.config);
    const volrate::ConvexityQuery q{a.t, a.t1, a.t2, a.tau};
    const volrate::ConvexityMethodChoice choice = method_choice(a.method);

    if (a.sweep.empty()) {
        const volrate::ConvexityResult r = volrate::convexity_adjustment(model, q, choice);
        nlohmann::json out;
        out["log_adjustment"] = r.log_adjustment;
        out["adjustment"] = r.adjustment;
        out["method"] = method_name(r.method);
        if (std::isfinite(r.error_estimate)) out["error_estimate"] = r.error_estimate;
        std::cout << out.dump() << '\n';
        return 0;
    }

    const SweepSpec sweep = parse_sweep_spec(a.sweep);
    std::cout << sweep.param << ",log_adjustment,adjustment,method\n";
    for (const double v : linspace(sweep.grid.t0, sweep.grid.t1, sweep.grid.n)) {
        // swap in a kernel of the swept family, keeping the configured scale
        volrate::KernelSpec kernel =
            (sweep.param == "alpha")
                ? volrate::KernelSpec::exponential(v, model.kernel.scale())
                : volrate::KernelSpec::riemann_liouville(v, model.kernel.scale());
        const volrate::RateModel swept{model.theta, std::move(kernel), model.driver};
        const volrate::ConvexityResult r = volrate::convexity_adjustment(swept, q, choice);
        std::cout << format_g17(v) << ',' << format_g17(r.log_adjustment) << ','
                  << format_g17(r.adjustment) << ',' << method_name(r.method) << '\n';
    }
    return 0;
}

struct SimulateArgs {
    std::string config;
    double horizon = 0.0;
    std::size_t steps = 0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::string measure = "rn";
    std::string out;
    unsigned workers = 1;
};

int run_simulate(const SimulateArgs& a) {
    const volrate::RateModel model = volrate::load_model(a.config);
    volrate::Measure measure = volrate::Measure::risk_neutral;
    double tau = std::numeric_limits<double>::quiet_NaN();
    if (a.measure != "rn") {
        if (a.measure.rfind("fwd:", 0) != 0)
            throw std::invalid_argument("--measure must be 'rn' or 'fwd:TAU'");
        measure = volrate::Measure::forward;
        std::size_t pos = 0;
        const std::string tail = a.measure.substr(4);
        tau = std::stod(tail, &pos);
        if (pos != tail.size()) throw std::invalid_argument("bad tau in --measure fwd:TAU");
    }
    const volrate::SimGrid grid = volrate::SimGrid::uniform(a.horizon, a.steps);
    const volrate::PathSet paths = volrate::simulate(model, grid, a.paths, a.seed, measure,
                                                     a.horizon, tau, a.workers);
    std::ofstream file;
    std::ostream& os = open_output(file, a.out);
    os << "path_id,time,short_rate,stoch_integral\n";
    for (std::size_t p = 0; p < paths.n_paths; ++p)
        for (std::size_t i = 0; i < paths.times.size(); ++i)
            os << p << ',' << format_g17(paths.times[i]) << ','
               << format_g17(paths.short_rate_at(p, i)) << ','
               << format_g17(paths.stoch_integral_at(p, i)) << '\n';
    return 0;
}

struct McConvexityArgs {
    std::string config;
    double t = 0.0, t1 = 0.0, t2 = 0.0, tau = 0.0;
    std::size_t steps = 0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

int run_mc_convexity(const McConvexityArgs& a) {
    const volrate::RateModel model = volrate::load_model(a.config);
    const volrate::ConvexityQuery q{a.t, a.t1, a.t2, a.tau};
    q.validate();
    const volrate::SimGrid grid = (a.t > 0.0) ? volrate::SimGrid::uniform(a.t, a.steps)
                                              : volrate::SimGrid::uniform(1.0, 1);
    const volrate::MCEstimate est =
        volrate::estimate_ratio_expectation(model, q, grid, a.paths, a.seed, {}, a.workers);
    const volrate::ConvexityResult adj =
        volrate::convexity_adjustment(model, q, volrate::ConvexityMethodChoice::auto_select);
    const double ratio = volrate::zcb_price_initial(model, q.t1).price /
                         volrate::zcb_price_initial(model, q.t2).price;
    const double closed = ratio * adj.adjustment;
    nlohmann::json out;
    out["mean"] = est.mean;
    out["std_error"] = est.std_error;
    out["closed_form"] = closed;
    out["z_score"] = (est.std_error > 0.0) ? (est.mean - closed) / est.std_error : 0.0;
    std::cout << out.dump() << '\n';
    return 0;
}

struct HurstArgs {
    std::string data;
    std::string maturities;
    std::string lags;
    std::string out;
};

int run_hurst(const HurstArgs& a) {
    const volrate::YieldPanel panel = volrate::ingest_csv_file(a.data);
    const std::vector<double> maturities =
        a.maturities.empty() ? panel.maturities : parse_double_list(a.maturities);
    const std::vector<int> lags =
        a.lags.empty() ? volrate::default_hurst_lags() : parse_int_list(a.lags);
    const std::vector<volrate::HurstEstimate> estimates =
        volrate::hurst_by_maturity(panel, maturities, lags);
    std::ofstream file;
    std::ostream& os = open_output(file, a.out);
    os << "maturity,hurst,intercept,r_squared,n_obs\n";
    for (const auto& e : estimates)
        os << format_g17(e.maturity) << ',' << format_g17(e.hurst) << ','
           << format_g17(e.intercept) << ',' << format_g17(e.r_squared) << ',' << e.n_obs << '\n';
    return 0;
}

struct ProductsArgs {
    std::string config;
    std::string schedule;
    bool reset_delay = false;
    double r0s = 0.0;
    bool r0s_set = false;
    std::optional<double> t;
};

int run_products(const ProductsArgs& a) {
    const volrate::RateModel model = volrate::load_model(a.config);
    const volrate::Schedule schedule = load_schedule(a.schedule);
    // default observation time: the start of the reset period
    const double t = a.t.value_or(schedule.reset_start());
    volrate::PVBreakdown b;
    if (a.reset_delay) {
        if (!a.r0s_set)
            throw std::invalid_argument("products pv: --reset-delay requires --r0s");
        b = volrate::pv_flow_reset_delay_breakdown(model, schedule, t, a.r0s);
    } else {
        b = volrate::pv_flow_payment_delay_breakdown(model, schedule, t);
    }
    nlohmann::json out;
    out["pv"] = b.pv;
    out["convexity_factor"] = b.convexity_factor;
    out["p0_ratio"] = b.p0_ratio;
    std::cout << out.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"volrate: Gaussian Volterra short-rate toolkit"};
    app.require_subcommand(1);

    PriceArgs price_args;
    auto* price = app.add_subcommand("price", "Initial bond prices and forward rates");
    price->add_option("--config", price_args.config, "model JSON file")->required();
    double maturity_val = 0.0;
    auto* mat_opt = price->add_option("--maturity", maturity_val, "maturity T");
    price->add_option("--grid", price_args.grid, "CSV curve over t0:t1:n instead of a point");

    ConvexityArgs conv_args;
    auto* conv = app.add_subcommand("convexity", "Convexity adjustment factor");
    conv->add_option("--config", conv_args.config, "model JSON file")->required();
    conv->add_option("--t", conv_args.t, "observation time t")->required();
    conv->add_option("--t1", conv_args.t1, "first bond maturity")->required();
    conv->add_option("--t2", conv_args.t2, "second bond maturity")->required();
    conv->add_option("--tau", conv_args.tau, "measure maturity tau")->required();
    conv->add_option("--method", conv_args.method, "auto|closed|quad|asymptotic")
        ->default_val("auto");
    conv->add_option("--sweep", conv_args.sweep,
                     "alpha=start:end:count or hurst=start:end:count (CSV output)");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Simulate short-rate paths");
    sim->add_option("--config", sim_args.config, "model JSON file")->required();
    sim->add_option("--horizon", sim_args.horizon, "simulation horizon")->required();
    sim->add_option("--steps", sim_args.steps, "number of grid steps")->required();
    sim->add_option("--paths", sim_args.paths, "number of paths")->required();
    sim->add_option("--seed", sim_args.seed, "RNG seed")->required();
    sim->add_option("--measure", sim_args.measure, "rn or fwd:TAU")->default_val("rn");
    sim->add_option("--out", sim_args.out, "output CSV file (default stdout)");
    sim->add_option("--workers", sim_args.workers, "worker threads (values are unaffected)")
        ->default_val(1u);

    McConvexityArgs mc_args;
    auto* mc = app.add_subcommand("mc-convexity", "Monte Carlo check of the adjustment");
    mc->add_option("--config", mc_args.config, "model JSON file")->required();
    mc->add_option("--t", mc_args.t, "observation time t")->required();
    mc->add_option("--t1", mc_args.t1, "first bond maturity")->required();
    mc->add_option("--t2", mc_args.t2, "second bond maturity")->required();
    mc->add_option("--tau", mc_args.tau, "measure maturity tau")->required();
    mc->add_option("--steps", mc_args.steps, "grid steps on [0,t]")->required();
    mc->add_option("--paths", mc_args.paths, "number of paths")->required();
    mc->add_option("--seed", mc_args.seed, "RNG seed")->required();
    mc->add_option("--workers", mc_args.workers, "worker threads (values are unaffected)")
        ->default_val(1u);

    HurstArgs hurst_args;
    auto* hurst = app.add_subcommand("hurst", "Hurst estimates from a yield panel");
    hurst->add_option("--data", hurst_args.data, "panel CSV (date,maturity,rate)")->required();
    hurst->add_option("--maturities", hurst_args.maturities,
                      "comma-separated target maturities (default: panel maturities)");
    hurst->add_option("--lags", hurst_args.lags, "comma-separated lags (default 1,2,4,8,16)");
    hurst->add_option("--out", hurst_args.out, "output CSV file")->required();

    ProductsArgs prod_args;
    auto* products = app.add_subcommand("products", "Compounded-rate product pricing");
    products->require_subcommand(1);
    auto* pv = products->add_subcommand("pv", "PV of a compounded-rate flow");
    pv->add_option("--config", prod_args.config, "model JSON file")->required();
    pv->add_option("--schedule", prod_args.schedule, "schedule JSON file")->required();
    pv->add_flag("--reset-delay", prod_args.reset_delay, "price the reset-delay variant");
    auto* r0s_opt = pv->add_option("--r0s", prod_args.r0s, "observed compounded rate r0^S");
    double prod_t_val = 0.0;
    auto* prod_t_opt =
        pv->add_option("--t", prod_t_val, "ratio observation time (default: first reset date)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    if (mat_opt->count() > 0) price_args.maturity = maturity_val;
    if (prod_t_opt->count() > 0) prod_args.t = prod_t_val;
    prod_args.r0s_set = r0s_opt->count() > 0;

    try {
        if (app.got_subcommand(price)) return run_price(price_args);
        if (app.got_subcommand(conv)) return run_convexity(conv_args);
        if (app.got_subcommand(sim)) return run_simulate(sim_args);
        if (app.got_subcommand(mc)) return run_mc_convexity(mc_args);
        if (app.got_subcommand(hurst)) return run_hurst(hurst_args);
        if (app.got_subcommand(products)) return run_products(prod_args);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const volrate::QuadratureError& e) {
        nlohmann::json err;
        err["error"] = {{"kind", "quadrature"},
                        {"message", e.what()},
                        {"partial_value", e.partial_value},
                        {"error_estimate", e.error_estimate}};
        std::cout << err.dump() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = {{"kind", "runtime"}, {"message", e.what()}};
        std::cout << err.dump() << '\n';
        return 1;
    }
}
