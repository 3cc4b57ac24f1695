#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polymer/curve.hpp"
#include "polymer/environment.hpp"
#include "polymer/rng.hpp"
#include "polymer/variational.hpp"

namespace polymer {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double logaddexp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// Bridge walk on the slab: s(0) = s(n) = 0, steps +-1. Heights are in
// lattice units; dividing by n gives the corresponding curve.
struct LatticePath {
    std::vector<int> heights;  // size n+1
};

inline Curve path_to_curve(const LatticePath& path) {
    const int n = static_cast<int>(path.heights.size()) - 1;
    std::vector<Point> pts;
    pts.reserve(path.heights.size());
    for (int k = 0; k <= n; ++k)
        pts.push_back(Point{static_cast<double>(k) / n, static_cast<double>(path.heights[k]) / n});
    return Curve::from_breakpoints(std::move(pts));
}

// Log-domain forward/backward tables of the polymer measure
// mu(s) proportional to exp(n * beta_bar * pi(s)) over bridge walks.
// At step k the reachable heights are j in {-m, -m+2, ..., m} with
// m = min(k, n-k); slot (j+m)/2 indexes them. gain[k][slot] caches
// n * beta_bar * (scaled weight at the site).
struct TransferTable {
    int n = 0;
    double beta_bar = 0.0;
    std::vector<std::vector<double>> gain;
    std::vector<std::vector<double>> log_forward;
    std::vector<std::vector<double>> log_backward;
    double log_Q = kNegInf;

    int envelope(int k) const { return std::min(k, n - k); }
};

namespace detail {

// gain grid from a weight-scaled lattice environment
inline std::vector<std::vector<double>> make_gain(const Environment& env, double beta_bar) {
    const int n = env.n;
    std::vector<std::vector<double>> gain(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) gain[k].assign(static_cast<std::size_t>(std::min(k, n - k)) + 1, 0.0);
    const double scale = static_cast<double>(n) * beta_bar;
    for (const Mass& m : env.masses) {
        const int i = static_cast<int>(std::lround(m.x * n));
        const int j = static_cast<int>(std::lround(m.y * n));
        const int env_m = std::min(i, n - i);
        if (i < 0 || i > n || std::abs(j) > env_m || ((i + j) % 2) != 0)
            throw std::domain_error("gibbs: mass position is not a slab site");
        gain[i][(j + env_m) / 2] += scale * m.weight;
    }
    return gain;
}

}  // namespace detail

inline TransferTable build_transfer(const Environment& scaled_env, double beta_bar) {
    if (scaled_env.kind != EnvKind::lattice)
        throw std::domain_error("build_transfer: lattice environment required");
    if (beta_bar < 0.0) throw std::invalid_argument("build_transfer: beta_bar must be >= 0");
    TransferTable t;
    t.n = scaled_env.n;
    t.beta_bar = beta_bar;
    t.gain = detail::make_gain(scaled_env, beta_bar);
    const int n = t.n;

    t.log_forward.resize(static_cast<std::size_t>(n) + 1);
    t.log_forward[0] = {t.gain[0][0]};
    for (int k = 1; k <= n; ++k) {
        const int m = t.envelope(k);
        const int pm = t.envelope(k - 1);
        auto& cur = t.log_forward[k];
        cur.assign(static_cast<std::size_t>(m) + 1, kNegInf);
        const auto& prev = t.log_forward[k - 1];
        for (int j = -m; j <= m; j += 2) {
            double acc = kNegInf;
            for (int dj : {-1, +1}) {
                const int pj = j + dj;
                if (std::abs(pj) > pm) continue;
                acc = logaddexp(acc, prev[(pj + pm) / 2]);
            }
            cur[(j + m) / 2] = acc + t.gain[k][(j + m) / 2];
        }
    }
    t.log_Q = t.log_forward[n][0];

    t.log_backward.resize(static_cast<std::size_t>(n) + 1);
    t.log_backward[n] = {0.0};
    for (int k = n - 1; k >= 0; --k) {
        const int m = t.envelope(k);
        const int nm = t.envelope(k + 1);
        auto& cur = t.log_backward[k];
        cur.assign(static_cast<std::size_t>(m) + 1, kNegInf);
        const auto& next = t.log_backward[k + 1];
        for (int j = -m; j <= m; j += 2) {
            double acc = kNegInf;
            for (int dj : {-1, +1}) {
                const int nj = j + dj;
                if (std::abs(nj) > nm) continue;
                acc = logaddexp(acc, next[(nj + nm) / 2] + t.gain[k + 1][(nj + nm) / 2]);
            }
            cur[(j + m) / 2] = acc;
        }
    }
    return t;
}

// Entry point in bare coordinates: converts (sigma_n, beta_n) to the scaled
// pair (pi_n, beta_bar) and defers to build_transfer.
inline TransferTable build_transfer_unscaled(const Environment& raw_env, double beta_n) {
    const double b_n = std::pow(static_cast<double>(site_count(raw_env.n)), 1.0 / raw_env.alpha);
    Environment scaled = raw_env;
    for (Mass& m : scaled.masses) m.weight /= b_n;
    return build_transfer(scaled, b_n * beta_n / static_cast<double>(raw_env.n));
}

// Exact marginal distribution of the height at step k.
inline std::vector<double> height_marginals(const TransferTable& t, int k) {
    if (k < 0 || k > t.n) throw std::domain_error("height_marginals: step outside [0,n]");
    const auto& f = t.log_forward[k];
    const auto& b = t.log_backward[k];
    std::vector<double> probs(f.size());
    for (std::size_t s = 0; s < f.size(); ++s) probs[s] = std::exp(f[s] + b[s] - t.log_Q);
    return probs;
}

// Exact draw from the polymer measure by backward sampling of the forward
// table; deterministic given the seed.
inline LatticePath sample_path(const TransferTable& t, std::uint64_t seed) {
    Rng rng(seed);
    LatticePath path;
    path.heights.assign(static_cast<std::size_t>(t.n) + 1, 0);
    for (int k = t.n; k >= 1; --k) {
        const int j = path.heights[k];
        const int pm = t.envelope(k - 1);
        const auto& prev = t.log_forward[k - 1];
        double lo_val = kNegInf, hi_val = kNegInf;
        const bool lo_ok = std::abs(j - 1) <= pm;
        const bool hi_ok = std::abs(j + 1) <= pm;
        if (lo_ok) lo_val = prev[(j - 1 + pm) / 2];
        if (hi_ok) hi_val = prev[(j + 1 + pm) / 2];
        int pick;
        if (!lo_ok) {
            pick = j + 1;
        } else if (!hi_ok) {
            pick = j - 1;
        } else {
            const double p_lo = std::exp(lo_val - logaddexp(lo_val, hi_val));
            pick = (rng.uniform01() < p_lo) ? j - 1 : j + 1;
        }
        path.heights[k - 1] = pick;
    }
    return path;
}

namespace detail {

// forward recursion restricted to |j/n - center(k/n)| <= delta; returns the
// restricted log partition function (kNegInf when the tube is empty)
inline double log_tube_partition(const TransferTable& t, const Curve& center, double delta) {
    const int n = t.n;
    std::vector<double> center_at(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) center_at[k] = evaluate(center, static_cast<double>(k) / n);
    auto inside = [&](int k, int j) {
        return std::abs(static_cast<double>(j) / n - center_at[k]) <= delta;
    };
    if (!inside(0, 0) || !inside(n, 0)) return kNegInf;
    std::vector<double> prev = {t.gain[0][0]};
    for (int k = 1; k <= n; ++k) {
        const int m = t.envelope(k);
        const int pm = t.envelope(k - 1);
        std::vector<double> cur(static_cast<std::size_t>(m) + 1, kNegInf);
        for (int j = -m; j <= m; j += 2) {
            if (!inside(k, j)) continue;
            double acc = kNegInf;
            for (int dj : {-1, +1}) {
                const int pj = j + dj;
                if (std::abs(pj) > pm) continue;
                acc = logaddexp(acc, prev[(pj + pm) / 2]);
            }
            if (acc != kNegInf) cur[(j + m) / 2] = acc + t.gain[k][(j + m) / 2];
        }
        prev = std::move(cur);
    }
    return prev[0];
}

// two-layer forward recursion over (height, escaped); the escaped layer's
// terminal weight is the exact partition mass of paths leaving the tube
inline double log_escape_partition(const TransferTable& t, const Curve& center, double delta) {
    const int n = t.n;
    std::vector<double> center_at(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) center_at[k] = evaluate(center, static_cast<double>(k) / n);
    auto outside = [&](int k, int j) {
        return std::abs(static_cast<double>(j) / n - center_at[k]) > delta;
    };
    std::vector<double> in_prev = {kNegInf}, out_prev = {kNegInf};
    (outside(0, 0) ? out_prev : in_prev)[0] = t.gain[0][0];
    for (int k = 1; k <= n; ++k) {
        const int m = t.envelope(k);
        const int pm = t.envelope(k - 1);
        std::vector<double> in_cur(static_cast<std::size_t>(m) + 1, kNegInf);
        std::vector<double> out_cur(static_cast<std::size_t>(m) + 1, kNegInf);
        for (int j = -m; j <= m; j += 2) {
            double from_in = kNegInf, from_out = kNegInf;
            for (int dj : {-1, +1}) {
                const int pj = j + dj;
                if (std::abs(pj) > pm) continue;
                from_in = logaddexp(from_in, in_prev[(pj + pm) / 2]);
                from_out = logaddexp(from_out, out_prev[(pj + pm) / 2]);
            }
            const double g = t.gain[k][(j + m) / 2];
            if (outside(k, j)) {
                out_cur[(j + m) / 2] = logaddexp(from_in, from_out) + g;
            } else {
                in_cur[(j + m) / 2] = from_in + g;
                out_cur[(j + m) / 2] = from_out + g;
            }
        }
        in_prev = std::move(in_cur);
        out_prev = std::move(out_cur);
    }
    return out_prev[0];
}

}  // namespace detail

// mu(sup_k |s(k)/n - center(k/n)| <= delta), exact as a partition ratio.
inline double tube_probability(const TransferTable& t, const Curve& center, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("tube_probability: delta must be > 0");
    const double log_tube = detail::log_tube_partition(t, center, delta);
    if (log_tube == kNegInf) return 0.0;
    return std::exp(log_tube - t.log_Q);
}

// Complement of the tube, computed by its own escape recursion so the value
// stays exact even when the tube carries almost all the mass.
inline double escape_probability(const TransferTable& t, const Curve& center, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("escape_probability: delta must be > 0");
    const double log_esc = detail::log_escape_partition(t, center, delta);
    if (log_esc == kNegInf) return 0.0;
    return std::exp(log_esc - t.log_Q);
}

// -(1/n) log mu(escape from the delta-tube around the favorable curve);
// +inf when no path escapes.
inline double localization_rate(const Environment& scaled_env, double beta_bar, double delta) {
    const TransferTable t = build_transfer(scaled_env, beta_bar);
    const Solution sol = solve(scaled_env, beta_bar, Regime::finite_limit);
    const double log_esc = detail::log_escape_partition(t, sol.curve, delta);
    if (log_esc == kNegInf) return std::numeric_limits<double>::infinity();
    return -(log_esc - t.log_Q) / static_cast<double>(t.n);
}

// log C(n, k); exact 64-bit integers through n = 64, log-gamma beyond.
inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) return kNegInf;
    if (n <= 64) {
        unsigned __int128 acc = 1;
        const int kk = std::min(k, n - k);
        for (int i = 1; i <= kk; ++i) acc = acc * static_cast<unsigned>(n - kk + i) / static_cast<unsigned>(i);
        return std::log(static_cast<double>(static_cast<std::uint64_t>(acc)));
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Probability that the uniform bridge passes through every given lattice
// point (i, j), exact as a product of segment counts over C(n, n/2).
// Parity- or slope-infeasible points give probability 0.
inline double uniform_passage_probability(int n, std::vector<std::pair<int, int>> points) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("uniform_passage_probability: n must be even and >= 2");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    int pi = 0, pj = 0;
    double log_p = -log_binomial(n, n / 2);
    points.emplace_back(n, 0);
    for (const auto& [i, j] : points) {
        const int di = i - pi;
        const int dj = j - pj;
        if (di == 0 && dj == 0) continue;
        if (di <= 0 || std::abs(dj) > di || ((di + dj) % 2) != 0) return 0.0;
        log_p += log_binomial(di, (di + dj) / 2);
        pi = i;
        pj = j;
    }
    return std::exp(log_p);
}

// Nearest bridge-feasible height to y_target at column i (parity of i),
// ties rounded away from zero. Used to place continuum points on the slab.
inline int nearest_feasible_height(int n, int i, double y_target) {
    const int m = std::min(i, n - i);
    const double raw = y_target * n;
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = -m; j <= m; j += 2) {
        const double d = std::abs(j - raw);
        if (d < best_dist || (d == best_dist && std::abs(j) > std::abs(best))) {
            best = j;
            best_dist = d;
        }
    }
    return best;
}

}  // namespace polymer
