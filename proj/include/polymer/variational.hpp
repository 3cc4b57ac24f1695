#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polymer/curve.hpp"
#include "polymer/entropy.hpp"
#include "polymer/environment.hpp"
#include "polymer/index_maps.hpp"

namespace polymer {

// Which worthiness functional is maximized.
//   finite_limit:     beta * pi(curve) - E(curve)
//   infinite_limit:   pi(curve) - E(curve) / beta        (beta > 0)
//   zero_temperature: pi(curve), ties broken by minimal E
// beta = +inf always selects zero-temperature scoring.
enum class Regime { finite_limit, infinite_limit, zero_temperature };

struct Solution {
    IndexSet index_set;          // nodes of the maximizing polyline, in x order
    Curve curve = Curve::zero(); // the polyline through them
    double value = 0.0;          // maximal worthiness
    Regime regime = Regime::finite_limit;
    double beta = 0.0;
};

namespace detail {

enum class ScoreMode { finite, infinite, zero_temp };

inline ScoreMode resolve_mode(Regime regime, double beta) {
    if (beta < 0.0) throw std::invalid_argument("solve: beta must be >= 0");
    if (regime == Regime::zero_temperature || std::isinf(beta)) return ScoreMode::zero_temp;
    if (regime == Regime::infinite_limit) {
        if (beta == 0.0) throw std::invalid_argument("solve: infinite-limit regime needs beta > 0");
        return ScoreMode::infinite;
    }
    return ScoreMode::finite;
}

// Lexicographic path score. primary is the regime objective; secondary breaks
// ties deterministically (collected weight for the finite objectives, -E at
// zero temperature). Both components are additive along a path, so the
// lexicographic maximum has optimal substructure.
struct Score {
    double primary = 0.0;
    double secondary = 0.0;
};

inline bool better(const Score& a, const Score& b) {
    if (a.primary != b.primary) return a.primary > b.primary;
    return a.secondary > b.secondary;
}

struct NodeView {
    std::size_t env_idx = 0;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

inline std::vector<NodeView> make_nodes(const Environment& env) {
    std::vector<NodeView> nodes;
    nodes.reserve(env.mass_count() + 2);
    for (std::size_t idx = 0; idx <= env.end_index(); ++idx) {
        const Mass m = env.node(idx);
        nodes.push_back(NodeView{idx, m.x, m.y, m.weight});
    }
    std::sort(nodes.begin(), nodes.end(), [](const NodeView& a, const NodeView& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.env_idx < b.env_idx;
    });
    return nodes;
}

inline bool edge_admissible(const NodeView& a, const NodeView& b) {
    const double dx = b.x - a.x;
    return dx > 0.0 && std::abs(b.y - a.y) <= dx * (1.0 + kSlopeTol);
}

// Entropy cost of the chord a -> b.
inline double edge_entropy(const NodeView& a, const NodeView& b) {
    const double dx = b.x - a.x;
    return dx * pointwise_entropy((b.y - a.y) / dx);
}

// One path step: arrive at node b over an admissible edge from a. The
// floating-point operation order here is the single source of truth shared by
// the dynamic program and the exhaustive oracle, so equal paths score
// bit-identically in both.
inline Score edge_step(const Score& cur, const NodeView& a, const NodeView& b, ScoreMode mode,
                       double beta) {
    const double ent = edge_entropy(a, b);
    Score next;
    switch (mode) {
        case ScoreMode::finite:
            next.primary = (cur.primary - ent) + beta * b.w;
            next.secondary = cur.secondary + b.w;
            break;
        case ScoreMode::infinite:
            next.primary = (cur.primary - ent / beta) + b.w;
            next.secondary = cur.secondary + b.w;
            break;
        case ScoreMode::zero_temp:
            next.primary = cur.primary + b.w;
            next.secondary = cur.secondary - ent;
            break;
    }
    return next;
}

inline Solution make_solution(const Environment& env, const std::vector<NodeView>& nodes,
                              const std::vector<std::size_t>& node_path, double value,
                              Regime regime, double beta) {
    Solution sol;
    sol.value = value;
    sol.regime = regime;
    sol.beta = beta;
    std::vector<Point> pts;
    pts.reserve(node_path.size());
    sol.index_set.indices.reserve(node_path.size());
    for (std::size_t pos : node_path) {
        sol.index_set.indices.push_back(nodes[pos].env_idx);
        pts.push_back(Point{nodes[pos].x, nodes[pos].y});
    }
    sol.curve = Curve::from_breakpoints(std::move(pts));
    (void)env;
    return sol;
}

}  // namespace detail

// Exact global maximizer of the worthiness functional over Lipschitz-1
// curves. Restricting to polylines through mass positions is lossless:
// snapping any curve onto its index set never lowers the collected weight and
// never raises the entropy, so some interpolation curve attains the global
// maximum. That turns the problem into a longest-path computation on the DAG
// of admissible chords, O(k^2) transitions.
inline Solution solve(const Environment& env, double beta, Regime regime = Regime::finite_limit) {
    using namespace detail;
    const ScoreMode mode = resolve_mode(regime, beta);
    const auto nodes = make_nodes(env);
    const std::size_t count = nodes.size();
    std::vector<Score> best(count);
    std::vector<std::size_t> pred(count, 0);
    std::vector<char> reached(count, 0);
    reached[0] = 1;  // start sentinel at (0,0) sorts first
    for (std::size_t j = 1; j < count; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (!reached[i] || !edge_admissible(nodes[i], nodes[j])) continue;
            const Score cand = edge_step(best[i], nodes[i], nodes[j], mode, beta);
            if (!reached[j] || better(cand, best[j])) {
                best[j] = cand;
                pred[j] = i;
                reached[j] = 1;
            }
        }
    }
    const std::size_t end = count - 1;
    if (!reached[end]) throw std::logic_error("solve: end sentinel unreachable");
    std::vector<std::size_t> path;
    for (std::size_t cur = end; cur != 0; cur = pred[cur]) path.push_back(cur);
    path.push_back(0);
    std::reverse(path.begin(), path.end());
    return make_solution(env, nodes, path, best[end].primary, regime, beta);
}

// Exhaustive oracle: enumerate every admissible index subset and score it
// with the same arithmetic as the dynamic program. Ties resolve by the same
// (objective, tie-break, index sequence) order.
inline Solution brute_force_solve(const Environment& env, double beta,
                                  Regime regime = Regime::finite_limit) {
    using namespace detail;
    const std::size_t k = env.mass_count();
    if (k > 20) throw std::invalid_argument("brute_force_solve: more than 20 masses");
    const ScoreMode mode = resolve_mode(regime, beta);
    const auto nodes = make_nodes(env);
    // position of each env index within the x-sorted node list
    std::vector<std::size_t> node_pos(nodes.size());
    for (std::size_t pos = 0; pos < nodes.size(); ++pos) node_pos[nodes[pos].env_idx] = pos;

    bool have_best = false;
    Score best_score;
    std::vector<std::size_t> best_path;
    std::vector<std::size_t> path;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        path.clear();
        path.push_back(node_pos[0]);
        for (std::size_t b = 0; b < k; ++b)
            if (mask & (std::uint64_t{1} << b)) path.push_back(node_pos[b + 1]);
        path.push_back(node_pos[env.end_index()]);
        std::sort(path.begin(), path.end());
        bool ok = true;
        Score score;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            const NodeView& a = nodes[path[s]];
            const NodeView& b = nodes[path[s + 1]];
            if (!edge_admissible(a, b)) {
                ok = false;
                break;
            }
            score = edge_step(score, a, b, mode, beta);
        }
        if (!ok) continue;
        if (!have_best || better(score, best_score) ||
            (score.primary == best_score.primary && score.secondary == best_score.secondary &&
             path < best_path)) {
            have_best = true;
            best_score = score;
            best_path = path;
        }
    }
    if (!have_best) throw std::logic_error("brute_force_solve: no admissible subset");
    return make_solution(env, nodes, best_path, best_score.primary, regime, beta);
}

inline constexpr double kNoRestrictedMax = -std::numeric_limits<double>::infinity();

// Maximum worthiness over interpolation curves at sup-distance >= delta from
// base.curve. Two-layer DAG program over (node, escaped); an edge certifies
// escape when the segment deviates from the base curve by >= delta somewhere,
// which for polylines happens at a segment endpoint or a base breakpoint.
// Returns kNoRestrictedMax when no interpolation curve lies that far away.
// This maximizes over interpolation curves only, a lower bound for the
// supremum over all Lipschitz curves; below-mesh deltas make no difference in
// the diagnostics this feeds.
inline double restricted_max(const Environment& env, double beta, Regime regime, double delta,
                             const Solution& base) {
    using namespace detail;
    if (!(delta > 0.0)) throw std::invalid_argument("restricted_max: delta must be > 0");
    const ScoreMode mode = resolve_mode(regime, beta);
    const auto nodes = make_nodes(env);
    const auto& center = base.curve.breakpoints();

    auto edge_escapes = [&](const NodeView& a, const NodeView& b) {
        double dev = std::max(std::abs(a.y - evaluate(base.curve, a.x)),
                              std::abs(b.y - evaluate(base.curve, b.x)));
        for (const Point& p : center) {
            if (p.x <= a.x || p.x >= b.x) continue;
            dev = std::max(dev, std::abs(lerp_at(a.x, a.y, b.x, b.y, p.x) - p.y));
        }
        return dev >= delta;
    };

    const std::size_t count = nodes.size();
    std::vector<Score> best[2] = {std::vector<Score>(count), std::vector<Score>(count)};
    std::vector<char> reached[2] = {std::vector<char>(count, 0), std::vector<char>(count, 0)};
    reached[0][0] = 1;
    for (std::size_t j = 1; j < count; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (!edge_admissible(nodes[i], nodes[j])) continue;
            const bool esc = edge_escapes(nodes[i], nodes[j]);
            for (int f = 0; f < 2; ++f) {
                if (!reached[f][i]) continue;
                const int g = (f == 1 || esc) ? 1 : 0;
                const Score cand = edge_step(best[f][i], nodes[i], nodes[j], mode, beta);
                if (!reached[g][j] || better(cand, best[g][j])) {
                    best[g][j] = cand;
                    reached[g][j] = 1;
                }
            }
        }
    }
    const std::size_t end = count - 1;
    if (!reached[1][end]) return kNoRestrictedMax;
    return best[1][end].primary;
}

inline double restricted_max(const Environment& env, double beta, Regime regime, double delta) {
    return restricted_max(env, beta, regime, delta, solve(env, beta, regime));
}

// Best weight collectible along one admissible path, entropy ignored.
inline double remainder_max(const Environment& remainder) {
    return solve(remainder, std::numeric_limits<double>::infinity(), Regime::zero_temperature).value;
}

namespace detail {

// Per-environment cache of chord admissibility and entropy cost, so repeated
// maximizations at different beta (bisection) reuse the geometry.
struct EdgeCache {
    std::vector<NodeView> nodes;
    std::vector<std::vector<double>> cost;  // cost[j][i], +inf when inadmissible

    explicit EdgeCache(const Environment& env) : nodes(make_nodes(env)) {
        const std::size_t count = nodes.size();
        cost.resize(count);
        for (std::size_t j = 1; j < count; ++j) {
            cost[j].resize(j);
            for (std::size_t i = 0; i < j; ++i)
                cost[j][i] = edge_admissible(nodes[i], nodes[j])
                                 ? edge_entropy(nodes[i], nodes[j])
                                 : std::numeric_limits<double>::infinity();
        }
    }

    // max over paths of beta * (collected weight) - E
    double max_worthiness(double beta) const {
        const std::size_t count = nodes.size();
        std::vector<double> value(count, -std::numeric_limits<double>::infinity());
        value[0] = 0.0;
        for (std::size_t j = 1; j < count; ++j) {
            double inc = -std::numeric_limits<double>::infinity();
            const auto& row = cost[j];
            for (std::size_t i = 0; i < j; ++i) inc = std::max(inc, value[i] - row[i]);
            value[j] = inc + beta * nodes[j].w;
        }
        return value[count - 1];
    }
};

}  // namespace detail

// Smallest beta at which the maximal worthiness leaves zero, located by
// bisection to absolute tolerance tol. Equals the minimum of E(polyline) /
// (collected weight) over admissible index sets with positive weight.
// Sentinel-only environments never leave zero; returns +inf for those.
inline double beta_critical(const Environment& env, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("beta_critical: tol must be > 0");
    if (env.mass_count() == 0) return std::numeric_limits<double>::infinity();
    for (const Mass& m : env.masses)
        if (m.y == 0.0) return 0.0;  // an on-axis mass is free to collect

    detail::EdgeCache cache(env);
    double max_tent = 0.0;
    double max_weight = 0.0;
    for (const Mass& m : env.masses) {
        max_tent = std::max(max_tent, tent_entropy(m.x, m.y));
        max_weight = std::max(max_weight, m.weight);
    }
    double hi = (max_tent + 1.0) / max_weight;
    if (!(cache.max_worthiness(hi) > 0.0))
        throw std::logic_error("beta_critical: upper bracket not positive");
    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (cache.max_worthiness(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// (|w_hat(top k) - w_hat(full)|, beta * remainder_max): truncating the
// environment moves the maximal worthiness by at most beta times the best
// remainder collection, so first <= second.
inline std::pair<double, double> truncation_gap(const Environment& env, double beta,
                                                std::size_t k) {
    const auto parts = truncate(env, k);
    const double w_full = solve(env, beta, Regime::finite_limit).value;
    const double w_top = solve(parts.first, beta, Regime::finite_limit).value;
    const double r = remainder_max(parts.second);
    return {std::abs(w_top - w_full), beta * r};
}

// Values of the best and second-best distinct paths; the gap is a uniqueness
// diagnostic (with continuous weights, near-ties signal a bug).
inline std::pair<double, double> top_two_scores(const Environment& env, double beta,
                                                Regime regime = Regime::finite_limit) {
    using namespace detail;
    const ScoreMode mode = resolve_mode(regime, beta);
    const auto nodes = make_nodes(env);
    const std::size_t count = nodes.size();
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> first(count, neg_inf), second(count, neg_inf);
    first[0] = 0.0;
    for (std::size_t j = 1; j < count; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (first[i] == neg_inf || !edge_admissible(nodes[i], nodes[j])) continue;
            for (const double base : {first[i], second[i]}) {
                if (base == neg_inf) continue;
                const Score cand =
                    edge_step(Score{base, 0.0}, nodes[i], nodes[j], mode, beta);
                const double v = cand.primary;
                if (v > first[j]) {
                    second[j] = first[j];
                    first[j] = v;
                } else if (v > second[j]) {
                    second[j] = v;
                }
            }
        }
    }
    return {first[count - 1], second[count - 1]};
}

}  // namespace polymer
