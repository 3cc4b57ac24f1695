#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "polymer/curve.hpp"
#include "polymer/environment.hpp"

namespace polymer {

// Membership tolerance for "mass lies on the graph of a curve". Curves are
// built from mass positions, so membership is exact up to rounding; any
// positive-mesh environment makes this unambiguous.
inline constexpr double kGraphTol = 1e-9;

// Node indices of an environment (sentinels included), listed in strictly
// increasing x order. Valid sets have every chord slope of magnitude <= 1.
struct IndexSet {
    std::vector<std::size_t> indices;

    bool operator==(const IndexSet& other) const { return indices == other.indices; }
    bool contains(std::size_t idx) const {
        return std::find(indices.begin(), indices.end(), idx) != indices.end();
    }
};

inline double chord_slope(const Environment& env, std::size_t i, std::size_t j) {
    const Mass a = env.node(i);
    const Mass b = env.node(j);
    if (a.x == b.x) throw std::domain_error("chord_slope: nodes share an x-coordinate");
    return (b.y - a.y) / (b.x - a.x);
}

namespace detail {

// candidate indices sorted by x; the convention "sentinels first/last" holds
// automatically because masses live strictly inside (0,1)
inline std::vector<std::size_t> sorted_by_x(const Environment& env, std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end(), [&env](std::size_t a, std::size_t b) {
        const Mass ma = env.node(a);
        const Mass mb = env.node(b);
        if (ma.x != mb.x) return ma.x < mb.x;
        return a < b;
    });
    return idx;
}

}  // namespace detail

// True iff both sentinels are present and consecutive chord slopes (in x
// order) all have magnitude <= 1. A chord over several consecutive nodes is a
// convex combination of the consecutive slopes, so this is equivalent to the
// all-pairs condition. Coinciding x-coordinates are inadmissible.
inline bool is_admissible(const Environment& env, const std::vector<std::size_t>& candidate) {
    bool has_start = false;
    bool has_end = false;
    for (std::size_t idx : candidate) {
        if (idx == 0) has_start = true;
        if (idx == env.end_index()) has_end = true;
    }
    if (!has_start || !has_end) return false;
    const auto sorted = detail::sorted_by_x(env, candidate);
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const Mass a = env.node(sorted[i]);
        const Mass b = env.node(sorted[i + 1]);
        const double dx = b.x - a.x;
        if (dx <= 0.0) return false;
        if (std::abs(b.y - a.y) > dx * (1.0 + kSlopeTol)) return false;
    }
    return true;
}

// All node indices whose position lies on the graph of c (within kGraphTol),
// sentinels always included, sorted by x.
inline IndexSet index_set_of(const Environment& env, const Curve& c) {
    std::vector<std::size_t> idx;
    idx.push_back(0);
    for (std::size_t i = 1; i <= env.mass_count(); ++i) {
        const Mass m = env.node(i);
        if (std::abs(evaluate(c, m.x) - m.y) <= kGraphTol) idx.push_back(i);
    }
    idx.push_back(env.end_index());
    return IndexSet{detail::sorted_by_x(env, std::move(idx))};
}

// The polyline through the indexed positions in x order.
inline Curve interpolate(const Environment& env, const IndexSet& iota) {
    if (!is_admissible(env, iota.indices))
        throw std::invalid_argument("interpolate: index set is not admissible");
    const auto sorted = detail::sorted_by_x(env, iota.indices);
    std::vector<Point> pts;
    pts.reserve(sorted.size());
    for (std::size_t idx : sorted) {
        const Mass m = env.node(idx);
        pts.push_back(Point{m.x, m.y});
    }
    return Curve::from_breakpoints(std::move(pts));
}

// Snap a curve onto the environment: interpolate its own index set. Entropy
// never increases (Jensen), collected mass never decreases.
inline Curve snap(const Environment& env, const Curve& c) {
    return interpolate(env, index_set_of(env, c));
}

}  // namespace polymer
