#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polymer/curve.hpp"

namespace polymer {

// e(u) = [(1+u)log(1+u) + (1-u)log(1-u)] / 2, the large-deviation rate of a
// simple random walk step at drift u. Continuous extension e(+-1) = log 2
// via the 0*log 0 = 0 convention. log1p keeps the small-u cancellation exact
// enough for the sandwich u^2/2 <= e(u) <= u^2 to hold at grid scale.
inline double pointwise_entropy(double u) {
    const double a = std::abs(u);
    if (a > 1.0 + kSlopeTol) throw std::domain_error("pointwise_entropy: slope outside [-1,1]");
    if (a >= 1.0) return std::log(2.0);
    return 0.5 * ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u));
}

// E(curve) = integral of e(slope); an exact segment sum for polylines.
inline double curve_entropy(const Curve& c) {
    const auto& pts = c.breakpoints();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double dx = pts[i + 1].x - pts[i].x;
        const double dy = pts[i + 1].y - pts[i].y;
        total += dx * pointwise_entropy(dy / dx);
    }
    return total;
}

// Entropy of the two-segment curve (0,0) -> (x,y) -> (1,0).
inline double tent_entropy(double x, double y) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("tent_entropy: x outside (0,1)");
    if (std::abs(y) > std::min(x, 1.0 - x) * (1.0 + kSlopeTol))
        throw std::domain_error("tent_entropy: apex outside the domain");
    return x * pointwise_entropy(y / x) + (1.0 - x) * pointwise_entropy(y / (1.0 - x));
}

// Jensen coarsening: dropping breakpoints can only lower the entropy.
// `subset` holds breakpoint indices of c and must contain both endpoints.
// Returns (entropy of the coarsened polyline, entropy of c).
inline std::pair<double, double> coarsen_entropy_check(const Curve& c,
                                                       const std::vector<std::size_t>& subset) {
    const auto& pts = c.breakpoints();
    std::vector<std::size_t> idx(subset);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.empty() || idx.front() != 0 || idx.back() != pts.size() - 1)
        throw std::domain_error("coarsen_entropy_check: subset must contain both endpoints");
    std::vector<Point> coarse;
    coarse.reserve(idx.size());
    for (std::size_t i : idx) {
        if (i >= pts.size()) throw std::domain_error("coarsen_entropy_check: index out of range");
        coarse.push_back(pts[i]);
    }
    return {curve_entropy(Curve::from_breakpoints(std::move(coarse))), curve_entropy(c)};
}

}  // namespace polymer
