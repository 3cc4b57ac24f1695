#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polymer {

// Tolerance absorbing rounding in slope-(+-1) segments; geometry is otherwise exact.
inline constexpr double kSlopeTol = 1e-12;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

// Value at x of the segment through (x0,y0)-(x1,y1). Every interpolation in
// the library goes through this helper so identical inputs produce
// bit-identical values regardless of the call site.
inline double lerp_at(double x0, double y0, double x1, double y1, double x) {
    return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

// Piecewise-linear 1-Lipschitz function on [0,1] vanishing at both ends,
// stored as its breakpoints. Only the breakpoints are stored; evaluation
// interpolates on demand, which keeps sup-norm and entropy computations exact.
class Curve {
public:
    static Curve from_breakpoints(std::vector<Point> pts) {
        if (pts.size() < 2) throw std::invalid_argument("curve needs at least two breakpoints");
        if (pts.front().x != 0.0 || pts.front().y != 0.0)
            throw std::invalid_argument("curve must start at (0,0)");
        if (pts.back().x != 1.0 || pts.back().y != 0.0)
            throw std::invalid_argument("curve must end at (1,0)");
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double dx = pts[i + 1].x - pts[i].x;
            const double dy = pts[i + 1].y - pts[i].y;
            if (dx <= 0.0) throw std::invalid_argument("breakpoint x must be strictly increasing");
            if (std::abs(dy) > dx * (1.0 + kSlopeTol))
                throw std::invalid_argument("segment slope exceeds 1");
        }
        return Curve(std::move(pts));
    }

    static Curve zero() { return Curve({{0.0, 0.0}, {1.0, 0.0}}); }

    const std::vector<Point>& breakpoints() const { return pts_; }

    bool operator==(const Curve& other) const { return pts_ == other.pts_; }

private:
    explicit Curve(std::vector<Point> pts) : pts_(std::move(pts)) {}

    std::vector<Point> pts_;
};

inline double evaluate(const Curve& c, double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("evaluate: x outside [0,1]");
    const auto& pts = c.breakpoints();
    // first breakpoint with x >= query
    auto it = std::lower_bound(pts.begin(), pts.end(), x,
                               [](const Point& p, double v) { return p.x < v; });
    if (it == pts.begin()) return it->y;
    if (it == pts.end()) return pts.back().y;
    if (it->x == x) return it->y;
    const Point& a = *(it - 1);
    const Point& b = *it;
    return lerp_at(a.x, a.y, b.x, b.y, x);
}

// Exact: the difference of two piecewise-linear functions is piecewise linear
// with breakpoints in the union of both x-sets, so its max lives there.
inline double sup_distance(const Curve& a, const Curve& b) {
    double best = 0.0;
    for (const Point& p : a.breakpoints()) best = std::max(best, std::abs(p.y - evaluate(b, p.x)));
    for (const Point& p : b.breakpoints()) best = std::max(best, std::abs(evaluate(a, p.x) - p.y));
    return best;
}

// max_x |c(x)|; attained at a breakpoint
inline double sup_displacement(const Curve& c) {
    double best = 0.0;
    for (const Point& p : c.breakpoints()) best = std::max(best, std::abs(p.y));
    return best;
}

// integral of c over [0,1], trapezoid-exact for a polyline
inline double signed_area(const Curve& c) {
    const auto& pts = c.breakpoints();
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        area += 0.5 * (pts[i].y + pts[i + 1].y) * (pts[i + 1].x - pts[i].x);
    return area;
}

}  // namespace polymer
