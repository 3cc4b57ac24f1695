#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "polymer/curve.hpp"
#include "polymer/environment.hpp"
#include "polymer/variational.hpp"

namespace polymer {

using json = nlohmann::json;

// Locale-independent shortest round-trip formatting for CSV cells; JSON goes
// through nlohmann, which already prints round-trip-exact doubles.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Curve <-> JSON array of [x, y] pairs, x ascending.
inline json to_json(const Curve& c) {
    json arr = json::array();
    for (const Point& p : c.breakpoints()) arr.push_back(json::array({p.x, p.y}));
    return arr;
}

inline Curve curve_from_json(const json& j) {
    std::vector<Point> pts;
    pts.reserve(j.size());
    for (const auto& pair : j) pts.push_back(Point{pair.at(0).get<double>(), pair.at(1).get<double>()});
    return Curve::from_breakpoints(std::move(pts));
}

// Environment <-> {kind, n?, alpha, seed?, masses: [[w, x, y], ...]} with
// masses sorted by weight descending.
inline json to_json(const Environment& env) {
    json j;
    j["kind"] = env.kind == EnvKind::lattice ? "lattice" : "continuum";
    if (env.kind == EnvKind::lattice) j["n"] = env.n;
    j["alpha"] = env.alpha;
    if (env.seed) j["seed"] = *env.seed;
    json masses = json::array();
    for (const Mass& m : env.masses) masses.push_back(json::array({m.weight, m.x, m.y}));
    j["masses"] = std::move(masses);
    return j;
}

inline Environment environment_from_json(const json& j) {
    Environment env;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "lattice") {
        env.kind = EnvKind::lattice;
        env.n = j.at("n").get<int>();
    } else if (kind == "continuum") {
        env.kind = EnvKind::continuum;
    } else {
        throw std::invalid_argument("environment_from_json: unknown kind '" + kind + "'");
    }
    env.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) env.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("masses"))
        env.masses.push_back(
            Mass{row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
    for (std::size_t i = 0; i + 1 < env.masses.size(); ++i)
        if (env.masses[i].weight < env.masses[i + 1].weight)
            throw std::invalid_argument("environment_from_json: masses not sorted by weight");
    return env;
}

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::finite_limit: return "finite-limit";
        case Regime::infinite_limit: return "infinite-limit";
        case Regime::zero_temperature: return "zero-temperature";
    }
    return "finite-limit";
}

inline Regime regime_from_name(const std::string& name) {
    if (name == "finite-limit") return Regime::finite_limit;
    if (name == "infinite-limit") return Regime::infinite_limit;
    if (name == "zero-temperature") return Regime::zero_temperature;
    throw std::invalid_argument("unknown regime '" + name + "'");
}

// beta may be infinite; JSON numbers cannot be, so +inf round-trips as "inf".
inline json beta_to_json(double beta) {
    if (std::isinf(beta)) return "inf";
    return beta;
}

inline double beta_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("beta_from_json: expected number or \"inf\"");
    }
    return j.get<double>();
}

inline json to_json(const Solution& sol) {
    json j;
    j["index_set"] = sol.index_set.indices;
    j["curve"] = to_json(sol.curve);
    j["value"] = sol.value;
    j["regime"] = regime_name(sol.regime);
    j["beta"] = beta_to_json(sol.beta);
    return j;
}

}  // namespace polymer
