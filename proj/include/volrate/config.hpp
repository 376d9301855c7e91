#pragma once

// JSON model configuration.  A model document has three tagged sections:
//
//   {
//     "theta":  {"type":"constant","rate":0.06}
//             | {"type":"vasicek","r0":...,"kappa":...,"mu":...}
//             | {"type":"table","points":[[t,r],...]},
//     "kernel": {"type":"exponential","alpha":...,"sigma":...}
//             | {"type":"riemann_liouville","hurst":...,"sigma":...}
//             | {"type":"table","points":[[x,phi],...],"sigma":...},
//     "driver": {"type":"brownian"}
//             | {"type":"scaled","sigma":...}            (or "points":[[t,s],...])
//             | {"type":"ou","beta":...}
//   }
//
// All shape or value problems surface as std::invalid_argument with a path
// hint, so the CLI can report them as configuration errors.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "volrate/model.hpp"

namespace volrate {

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument("config: missing field '" + std::string(key) + "' in " + where);
    return *it;
}

inline double require_number(const nlohmann::json& j, const char* key, const std::string& where) {
    const nlohmann::json& v = require_field(j, key, where);
    if (!v.is_number())
        throw std::invalid_argument("config: field '" + std::string(key) + "' in " + where +
                                    " must be a number");
    return v.get<double>();
}

inline std::string require_type_tag(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object())
        throw std::invalid_argument("config: " + where + " must be an object");
    const nlohmann::json& t = require_field(j, "type", where);
    if (!t.is_string())
        throw std::invalid_argument("config: 'type' in " + where + " must be a string");
    return t.get<std::string>();
}

inline std::vector<std::pair<double, double>> require_points(const nlohmann::json& j,
                                                             const std::string& where) {
    const nlohmann::json& pts = require_field(j, "points", where);
    if (!pts.is_array())
        throw std::invalid_argument("config: 'points' in " + where + " must be an array");
    std::vector<std::pair<double, double>> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw std::invalid_argument("config: each entry of 'points' in " + where +
                                        " must be a [number, number] pair");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

}  // namespace detail

inline ThetaCurve theta_from_json(const nlohmann::json& j) {
    const std::string type = detail::require_type_tag(j, "theta");
    if (type == "constant") return ThetaCurve::constant(detail::require_number(j, "rate", "theta"));
    if (type == "vasicek")
        return ThetaCurve::vasicek(detail::require_number(j, "r0", "theta"),
                                   detail::require_number(j, "kappa", "theta"),
                                   detail::require_number(j, "mu", "theta"));
    if (type == "table") return ThetaCurve::table(detail::require_points(j, "theta"));
    throw std::invalid_argument("config: unknown theta type '" + type + "'");
}

inline KernelSpec kernel_from_json(const nlohmann::json& j) {
    const std::string type = detail::require_type_tag(j, "kernel");
    if (type == "exponential")
        return KernelSpec::exponential(detail::require_number(j, "alpha", "kernel"),
                                       detail::require_number(j, "sigma", "kernel"));
    if (type == "riemann_liouville")
        return KernelSpec::riemann_liouville(detail::require_number(j, "hurst", "kernel"),
                                             j.contains("sigma")
                                                 ? detail::require_number(j, "sigma", "kernel")
                                                 : 1.0);
    if (type == "table") {
        const double sigma = j.contains("sigma") ? detail::require_number(j, "sigma", "kernel") : 1.0;
        return KernelSpec::tabulated(detail::require_points(j, "kernel"), sigma);
    }
    throw std::invalid_argument("config: unknown kernel type '" + type + "'");
}

inline DriverSpec driver_from_json(const nlohmann::json& j) {
    const std::string type = detail::require_type_tag(j, "driver");
    if (type == "brownian") return DriverSpec::brownian();
    if (type == "scaled") {
        if (j.contains("points")) return DriverSpec::scaled_table(detail::require_points(j, "driver"));
        return DriverSpec::scaled(detail::require_number(j, "sigma", "driver"));
    }
    if (type == "ou") return DriverSpec::ou(detail::require_number(j, "beta", "driver"));
    throw std::invalid_argument("config: unknown driver type '" + type + "'");
}

/// Builds a model from a parsed JSON document.
inline RateModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: document must be a JSON object");
    return RateModel{theta_from_json(detail::require_field(j, "theta", "document")),
                     kernel_from_json(detail::require_field(j, "kernel", "document")),
                     driver_from_json(detail::require_field(j, "driver", "document"))};
}

/// Parses a JSON string; parse errors are reported as std::invalid_argument.
inline RateModel parse_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    return model_from_json(j);
}

/// Loads and parses a model configuration file.
inline RateModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

}  // namespace volrate
