#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "polymer/entropy.hpp"
#include "polymer/environment.hpp"
#include "polymer/gibbs.hpp"
#include "polymer/rng.hpp"

using namespace polymer;

namespace {

// all bridge paths of length n (s0 = sn = 0, steps +-1)
std::vector<std::vector<int>> all_bridges(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n) + 1, 0);
    auto rec = [&](auto&& self, int k) -> void {
        if (k == n) {
            if (cur[static_cast<std::size_t>(n)] == 0) out.push_back(cur);
            return;
        }
        for (int dj : {-1, +1}) {
            const int next = cur[static_cast<std::size_t>(k)] + dj;
            if (std::abs(next) > std::min(k + 1, n - k - 1)) continue;
            cur[static_cast<std::size_t>(k) + 1] = next;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return out;
}

double path_log_weight(const std::vector<int>& heights, const Environment& env, double beta_bar) {
    const int n = env.n;
    double pi = 0.0;
    for (const Mass& m : env.masses) {
        const int i = static_cast<int>(std::lround(m.x * n));
        const int j = static_cast<int>(std::lround(m.y * n));
        if (heights[static_cast<std::size_t>(i)] == j) pi += m.weight;
    }
    return static_cast<double>(n) * beta_bar * pi;
}

// weight-scaled lattice draw; alpha >= 1 keeps n*beta_bar*pi small enough
// that log-domain roundoff stays far below the comparison tolerances
Environment random_lattice(int n, double alpha, std::uint64_t seed) {
    const Environment env = sample_lattice_environment(n, alpha, seed);
    return scale_weights(env, make_schedule(n, alpha, 1.0));
}

}  // namespace

TEST_CASE("free partition function counts bridges") {
    for (int n : {2, 4, 8, 12}) {
        const Environment env = sample_lattice_environment(n, 0.5, 99);
        const TransferTable t = build_transfer(env, 0.0);
        REQUIRE_THAT(t.log_Q, Catch::Matchers::WithinAbs(log_binomial(n, n / 2), 1e-12));
    }
}

TEST_CASE("n = 2 partition in closed form") {
    const double beta_bar = 0.7;
    const Environment env = random_lattice(2, 1.0, 5);
    const TransferTable t = build_transfer(env, beta_bar);
    // two paths, one through each site; gains are 2 * beta_bar * weight
    double w_up = 0.0, w_dn = 0.0;
    for (const Mass& m : env.masses) (m.y > 0 ? w_up : w_dn) = m.weight;
    const double expect = logaddexp(2.0 * beta_bar * w_up, 2.0 * beta_bar * w_dn);
    REQUIRE_THAT(t.log_Q, Catch::Matchers::WithinAbs(expect, 1e-12));
}

TEST_CASE("transfer table matches full enumeration") {
    const double beta_bars[] = {0.0, 0.3, 1.7};
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 4 + 4 * (trial % 3);
        const double beta_bar = beta_bars[trial % 3];
        const Environment env =
            random_lattice(n, 1.0 + 0.5 * (trial % 2), derive_seed(21, "gibbs", trial));
        const TransferTable t = build_transfer(env, beta_bar);
        const auto bridges = all_bridges(n);

        double log_q = kNegInf;
        for (const auto& path : bridges)
            log_q = logaddexp(log_q, path_log_weight(path, env, beta_bar));
        REQUIRE_THAT(t.log_Q, Catch::Matchers::WithinRel(log_q, 1e-9));

        // height marginals at every step
        for (int k = 0; k <= n; ++k) {
            const int m = std::min(k, n - k);
            std::vector<double> expect(static_cast<std::size_t>(m) + 1, 0.0);
            for (const auto& path : bridges)
                expect[static_cast<std::size_t>((path[static_cast<std::size_t>(k)] + m) / 2)] +=
                    std::exp(path_log_weight(path, env, beta_bar) - log_q);
            const auto got = height_marginals(t, k);
            REQUIRE(got.size() == expect.size());
            double total = 0.0;
            for (std::size_t s = 0; s < got.size(); ++s) {
                total += got[s];
                REQUIRE_THAT(got[s], Catch::Matchers::WithinAbs(expect[s], 1e-9));
            }
            REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-10));
        }
    }
}

TEST_CASE("tube probabilities match filtered enumeration") {
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + 4 * (trial % 3);
        const double beta_bar = 0.4 * (trial % 4);
        const Environment env =
            random_lattice(n, 1.0 + 0.5 * (trial % 2), derive_seed(22, "tube", trial));
        const TransferTable t = build_transfer(env, beta_bar);
        const Solution sol = solve(env, beta_bar, Regime::finite_limit);
        const double delta = 0.1 + 0.15 * (trial % 3);

        const auto bridges = all_bridges(n);
        double log_q = kNegInf, log_tube = kNegInf;
        for (const auto& path : bridges) {
            const double lw = path_log_weight(path, env, beta_bar);
            log_q = logaddexp(log_q, lw);
            bool inside = true;
            for (int k = 0; k <= n; ++k) {
                const double x = static_cast<double>(k) / n;
                if (std::abs(path[static_cast<std::size_t>(k)] / static_cast<double>(n) -
                             evaluate(sol.curve, x)) > delta) {
                    inside = false;
                    break;
                }
            }
            if (inside) log_tube = logaddexp(log_tube, lw);
        }
        const double expect = log_tube == kNegInf ? 0.0 : std::exp(log_tube - log_q);
        const double got = tube_probability(t, sol.curve, delta);
        REQUIRE_THAT(got, Catch::Matchers::WithinAbs(expect, 1e-9));

        const double esc = escape_probability(t, sol.curve, delta);
        REQUIRE_THAT(got + esc, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("tube around the zero curve under the uniform measure") {
    const Environment env = sample_lattice_environment(4, 0.5, 1);
    const TransferTable t = build_transfer(env, 0.0);
    // bridges with |s_k| <= 1: four of the six
    REQUIRE_THAT(tube_probability(t, Curve::zero(), 0.25),
                 Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
    REQUIRE(tube_probability(t, Curve::zero(), 1.0) == 1.0);
}

TEST_CASE("backward sampling reproduces exact path probabilities") {
    const int n = 4;
    const Environment env = random_lattice(n, 1.0, 31);
    const double beta_bar = 0.8;
    const TransferTable t = build_transfer(env, beta_bar);
    const auto bridges = all_bridges(n);
    double log_q = kNegInf;
    for (const auto& path : bridges) log_q = logaddexp(log_q, path_log_weight(path, env, beta_bar));

    std::map<std::vector<int>, int> counts;
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) counts[sample_path(t, derive_seed(77, "draw", d)).heights]++;

    for (const auto& path : bridges) {
        const double p = std::exp(path_log_weight(path, env, beta_bar) - log_q);
        const double freq = static_cast<double>(counts[path]) / draws;
        const double sigma = std::sqrt(p * (1.0 - p) / draws);
        REQUIRE(std::abs(freq - p) <= 5.0 * sigma + 1e-4);
    }
}

TEST_CASE("dominant mass pins the path") {
    // one huge on-slab weight; the measure should sit on paths through it
    Environment env = sample_lattice_environment(8, 0.5, 3);
    for (Mass& m : env.masses) m.weight = 1e-3;
    // promote the site (4, 2): feasible (4+2 even, |2| <= 4)
    for (Mass& m : env.masses)
        if (std::lround(m.x * 8) == 4 && std::lround(m.y * 8) == 2) m.weight = 5.0;
    std::stable_sort(env.masses.begin(), env.masses.end(),
                     [](const Mass& a, const Mass& b) { return a.weight > b.weight; });
    const TransferTable t = build_transfer(env, 2.0);
    const Solution sol = solve(env, 2.0, Regime::finite_limit);
    CHECK_THAT(sup_displacement(sol.curve), Catch::Matchers::WithinAbs(0.25, 1e-12));
    CHECK(tube_probability(t, sol.curve, 0.2) > 0.99);
    const double rate = localization_rate(env, 2.0, 0.2);
    CHECK(rate > 0.1);
}

TEST_CASE("log binomial crossover agrees at the boundary") {
    // n = 64 uses exact integers, n = 65 log-gamma; both must agree with an
    // exact evaluation at the crossover
    for (int k : {0, 1, 13, 32, 64}) {
        const double exact = log_binomial(64, k);
        const double via_gamma =
            std::lgamma(65.0) - std::lgamma(k + 1.0) - std::lgamma(64.0 - k + 1.0);
        REQUIRE_THAT(exact, Catch::Matchers::WithinAbs(via_gamma, 1e-10 * std::max(1.0, exact)));
    }
    CHECK(log_binomial(4, 2) == std::log(6.0));
    CHECK(log_binomial(4, 5) == kNegInf);
}

TEST_CASE("uniform passage probabilities") {
    CHECK(uniform_passage_probability(4, {}) == 1.0);
    CHECK_THAT(uniform_passage_probability(4, {{2, 0}}),
               Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
    // parity violation: (2,1) unreachable at even column
    CHECK(uniform_passage_probability(4, {{2, 1}}) == 0.0);
    // slope violation
    CHECK(uniform_passage_probability(8, {{2, 2}, {4, 0}, {5, 3}}) == 0.0);
    // two heights at one column
    CHECK(uniform_passage_probability(8, {{4, 0}, {4, 2}}) == 0.0);

    // against direct bridge counting at n = 8
    const auto bridges = all_bridges(8);
    int through = 0;
    for (const auto& path : bridges)
        if (path[2] == 2 && path[6] == 0) ++through;
    REQUIRE_THAT(uniform_passage_probability(8, {{2, 2}, {6, 0}}),
                 Catch::Matchers::WithinRel(static_cast<double>(through) / bridges.size(), 1e-12));
}

TEST_CASE("passage rate approaches the tent entropy") {
    const double target = tent_entropy(0.5, 0.25);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {20, 40, 80, 160}) {
        const int i = n / 2;
        const int j = nearest_feasible_height(n, i, 0.25);
        const double p = uniform_passage_probability(n, {{i, j}});
        REQUIRE(p > 0.0);
        const double rate = -std::log(p) / n;
        REQUIRE(rate < prev);
        prev = rate;
        if (n == 160) REQUIRE(std::abs(rate - target) <= 2.0 * std::log(160.0) / 160.0 + 0.02);
    }
}

TEST_CASE("feasible height snapping") {
    CHECK(nearest_feasible_height(40, 20, 0.25) == 10);
    CHECK(nearest_feasible_height(20, 10, 0.25) == 6);    // tie 4 vs 6 resolves away from zero
    CHECK(nearest_feasible_height(20, 10, -0.25) == -6);
    CHECK(nearest_feasible_height(100, 50, 0.25) == 26);  // 25 has the wrong parity
}

TEST_CASE("log-domain recursion survives huge exponents") {
    Environment env = sample_lattice_environment(10, 0.5, 17);
    for (Mass& m : env.masses) m.weight = 1.0;
    env.masses[0].weight = 1e4;  // n * beta_bar * w = 1e6
    std::stable_sort(env.masses.begin(), env.masses.end(),
                     [](const Mass& a, const Mass& b) { return a.weight > b.weight; });
    const TransferTable t = build_transfer(env, 10.0);
    REQUIRE(std::isfinite(t.log_Q));
    const auto marg = height_marginals(t, 5);
    double total = 0.0;
    for (double p : marg) total += p;
    // absolute log-domain error scales with the exponent, here 1e6
    REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("bare-coordinate wrapper matches manual scaling") {
    const Environment raw = sample_lattice_environment(12, 0.5, 23);
    const ScalingSchedule sched = make_schedule(12, 0.5, 1.5);
    const TransferTable a = build_transfer_unscaled(raw, sched.beta_n);
    const TransferTable b = build_transfer(scale_weights(raw, sched), sched.beta_bar);
    REQUIRE_THAT(a.log_Q, Catch::Matchers::WithinAbs(b.log_Q, 1e-9));
}
