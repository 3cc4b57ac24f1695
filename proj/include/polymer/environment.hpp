#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polymer/rng.hpp"

namespace polymer {

// One point mass: positive weight at a position strictly inside the rotated
// unit square D = {|y| <= min(x, 1-x)} minus the two corners.
struct Mass {
    double weight = 0.0;
    double x = 0.0;
    double y = 0.0;
};

enum class EnvKind { lattice, continuum };

// Weighted point configuration, masses ordered by non-increasing weight.
// Two weight-0 sentinels at (0,0) and (1,0) are implicit: node index 0 is the
// start sentinel, 1..mass_count() the masses by weight rank, end_index() the
// end sentinel.
struct Environment {
    EnvKind kind = EnvKind::continuum;
    int n = 0;  // lattice size (even), 0 for continuum
    double alpha = 0.0;
    std::optional<std::uint64_t> seed;
    std::vector<Mass> masses;

    std::size_t mass_count() const { return masses.size(); }
    std::size_t end_index() const { return masses.size() + 1; }

    Mass node(std::size_t idx) const {
        if (idx == 0) return Mass{0.0, 0.0, 0.0};
        if (idx == end_index()) return Mass{0.0, 1.0, 0.0};
        if (idx > masses.size()) throw std::out_of_range("environment node index");
        return masses[idx - 1];
    }
};

// Number of interior lattice sites of the slab: points (i/n, j/n) with
// i + j even inside D, minus the two corners. Counting columns gives
// (n/2 + 1)^2 - 2 for even n.
inline std::size_t site_count(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("site_count: n must be even and >= 2");
    const std::size_t half = static_cast<std::size_t>(n) / 2 + 1;
    return half * half - 2;
}

// Temperature scaling bookkeeping. With the weight-normalizing constant
// chosen so that site_count * b_n^{-alpha} = 1, the scaled inverse
// temperature equals beta exactly at every n, not just asymptotically.
struct ScalingSchedule {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;      // target scaled inverse temperature
    double b_n = 1.0;       // weight norming constant
    double beta_n = 0.0;    // bare inverse temperature at size n
    double beta_bar = 0.0;  // (b_n/n) * beta_n, equal to beta by construction
};

inline ScalingSchedule make_schedule(int n, double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("make_schedule: alpha outside (0,2)");
    if (beta < 0.0) throw std::invalid_argument("make_schedule: beta must be >= 0");
    ScalingSchedule s;
    s.n = n;
    s.alpha = alpha;
    s.beta = beta;
    s.b_n = std::pow(static_cast<double>(site_count(n)), 1.0 / alpha);
    s.beta_n = beta * static_cast<double>(n) / s.b_n;
    s.beta_bar = beta;
    return s;
}

// i.i.d. Pareto(alpha) weight at every interior site, sorted by weight.
// Deterministic in (n, alpha, seed): sites are visited column by column and
// the sort is stable, so ties (never seen with continuous weights) would
// still resolve identically everywhere.
inline Environment sample_lattice_environment(int n, double alpha, std::uint64_t seed) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("sample_lattice_environment: n must be even and >= 2");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("sample_lattice_environment: alpha outside (0,2)");
    Environment env;
    env.kind = EnvKind::lattice;
    env.n = n;
    env.alpha = alpha;
    env.seed = seed;
    env.masses.reserve(site_count(n));
    Rng rng(seed);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int i = 0; i <= n; ++i) {
        const int m = std::min(i, n - i);
        for (int j = -m; j <= m; j += 2) {
            if (m == 0) continue;  // the two corners carry the sentinels, not masses
            env.masses.push_back(Mass{rng.pareto(alpha), i * inv_n, j * inv_n});
        }
    }
    std::stable_sort(env.masses.begin(), env.masses.end(),
                     [](const Mass& a, const Mass& b) { return a.weight > b.weight; });
    return env;
}

// Truncated limit environment: weights T_i^{-1/alpha} with T_i the partial
// sums of standard exponentials (so weights come out strictly decreasing),
// positions uniform on D via the rotation (u,v) -> ((u+v)/2, (u-v)/2).
inline Environment sample_limit_environment(int k, double alpha, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("sample_limit_environment: k must be >= 1");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("sample_limit_environment: alpha outside (0,2)");
    Environment env;
    env.kind = EnvKind::continuum;
    env.alpha = alpha;
    env.seed = seed;
    env.masses.reserve(static_cast<std::size_t>(k));
    Rng rng(seed);
    double t = 0.0;
    for (int i = 0; i < k; ++i) {
        t += rng.exponential();
        const double w = std::pow(t, -1.0 / alpha);
        const double u = rng.uniform01();
        const double v = rng.uniform01();
        env.masses.push_back(Mass{w, 0.5 * (u + v), 0.5 * (u - v)});
    }
    return env;
}

// pi_n = sigma_n / b_n: divide every weight by the norming constant.
inline Environment scale_weights(const Environment& env, const ScalingSchedule& schedule) {
    Environment out = env;
    for (Mass& m : out.masses) m.weight /= schedule.b_n;
    return out;
}

// Split into the k heaviest masses and the remainder; weight multisets
// partition the original exactly.
inline std::pair<Environment, Environment> truncate(const Environment& env, std::size_t k) {
    Environment top = env;
    Environment rest = env;
    if (k >= env.masses.size()) {
        rest.masses.clear();
    } else {
        top.masses.assign(env.masses.begin(), env.masses.begin() + static_cast<std::ptrdiff_t>(k));
        rest.masses.assign(env.masses.begin() + static_cast<std::ptrdiff_t>(k), env.masses.end());
    }
    return {std::move(top), std::move(rest)};
}

// min over node pairs (sentinels included) of min(|dx|, ||slope|-1|).
// Zero mesh signals coinciding x-coordinates or a slope-1 chord.
inline double mesh(const Environment& env) {
    const std::size_t count = env.end_index() + 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        const Mass a = env.node(i);
        for (std::size_t j = i + 1; j < count; ++j) {
            const Mass b = env.node(j);
            const double dx = std::abs(b.x - a.x);
            double val = dx;
            if (dx > 0.0) {
                const double slope = std::abs((b.y - a.y) / (b.x - a.x));
                val = std::min(dx, std::abs(slope - 1.0));
            }
            best = std::min(best, val);
        }
    }
    return best;
}

// sup over ranks of max(weight gap, position sup-norm gap); a metric on
// environments of equal cardinality.
inline double env_distance(const Environment& a, const Environment& b) {
    if (a.masses.size() != b.masses.size())
        throw std::domain_error("env_distance: environments must have equal cardinality");
    double best = 0.0;
    for (std::size_t i = 0; i < a.masses.size(); ++i) {
        best = std::max(best, std::abs(a.masses[i].weight - b.masses[i].weight));
        best = std::max(best, std::abs(a.masses[i].x - b.masses[i].x));
        best = std::max(best, std::abs(a.masses[i].y - b.masses[i].y));
    }
    return best;
}

}  // namespace polymer
