#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polymer/entropy.hpp"
#include "polymer/rng.hpp"

using namespace polymer;

namespace {

// random polyline in the slab: Lipschitz-1, zero at both ends
Curve random_curve(Rng& rng, int segments) {
    std::vector<Point> pts{{0.0, 0.0}};
    for (int i = 1; i < segments; ++i) {
        const double x = static_cast<double>(i) / segments;
        const double prev_x = pts.back().x;
        const double prev_y = pts.back().y;
        const double dx = x - prev_x;
        const double lo = std::max(prev_y - dx, -(1.0 - x));
        const double hi = std::min(prev_y + dx, 1.0 - x);
        pts.push_back(Point{x, lo + (hi - lo) * rng.uniform01()});
    }
    pts.push_back(Point{1.0, 0.0});
    return Curve::from_breakpoints(std::move(pts));
}

Curve tent(double x, double y) {
    return Curve::from_breakpoints({{0.0, 0.0}, {x, y}, {1.0, 0.0}});
}

}  // namespace

TEST_CASE("pointwise entropy closed forms") {
    CHECK(pointwise_entropy(0.0) == 0.0);
    CHECK(pointwise_entropy(1.0) == std::log(2.0));
    CHECK(pointwise_entropy(-1.0) == std::log(2.0));
    CHECK_THAT(pointwise_entropy(0.5),
               Catch::Matchers::WithinAbs(0.13081203594113696, 1e-15));
    CHECK_THROWS_AS(pointwise_entropy(1.0 + 1e-9), std::domain_error);
    CHECK_THROWS_AS(pointwise_entropy(-2.0), std::domain_error);
}

TEST_CASE("pointwise entropy symmetry on a grid") {
    for (int i = 0; i <= 10000; ++i) {
        const double u = static_cast<double>(i) / 10000.0;
        CHECK(pointwise_entropy(u) == pointwise_entropy(-u));
    }
}

TEST_CASE("pointwise entropy strict convexity") {
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const double u1 = 2.0 * rng.uniform01() - 1.0;
        const double u2 = 2.0 * rng.uniform01() - 1.0;
        if (std::abs(u1 - u2) < 1e-6) continue;
        const double t = 0.05 + 0.9 * rng.uniform01();
        const double mid = pointwise_entropy(t * u1 + (1.0 - t) * u2);
        const double chord = t * pointwise_entropy(u1) + (1.0 - t) * pointwise_entropy(u2);
        CHECK(mid < chord);
    }
}

TEST_CASE("sandwich bound u^2/2 <= e(u) <= u^2") {
    for (int i = -10000; i <= 10000; ++i) {
        const double u = static_cast<double>(i) / 10000.0;
        const double e = pointwise_entropy(u);
        REQUIRE(e >= 0.5 * u * u - 1e-15);
        REQUIRE(e <= u * u + 1e-15);
    }
}

TEST_CASE("curve entropy on tents") {
    CHECK(curve_entropy(Curve::zero()) == 0.0);
    CHECK_THAT(curve_entropy(tent(0.5, 0.5)), Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
    CHECK_THAT(curve_entropy(tent(0.5, 0.25)),
               Catch::Matchers::WithinAbs(pointwise_entropy(0.5), 1e-15));
}

TEST_CASE("tent entropy closed forms") {
    CHECK(tent_entropy(0.5, 0.0) == 0.0);
    CHECK_THAT(tent_entropy(0.5, 0.5), Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
    CHECK_THAT(tent_entropy(0.25, 0.25),
               Catch::Matchers::WithinAbs(0.21576155433883570, 1e-14));
    CHECK_THROWS_AS(tent_entropy(0.25, 0.5), std::domain_error);
    CHECK_THROWS_AS(tent_entropy(0.0, 0.0), std::domain_error);
}

TEST_CASE("tent entropy matches curve entropy") {
    Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        const double x = 0.05 + 0.9 * rng.uniform01();
        const double cap = std::min(x, 1.0 - x);
        const double y = (2.0 * rng.uniform01() - 1.0) * cap;
        CHECK_THAT(tent_entropy(x, y),
                   Catch::Matchers::WithinAbs(curve_entropy(tent(x, y)), 1e-12));
    }
}

TEST_CASE("tent entropy sandwich with constants 1/2 and 1") {
    Rng rng(22);
    for (int trial = 0; trial < 500; ++trial) {
        const double x = 0.05 + 0.9 * rng.uniform01();
        const double cap = std::min(x, 1.0 - x);
        const double y = (2.0 * rng.uniform01() - 1.0) * cap;
        const double ref = y * y / x + y * y / (1.0 - x);
        const double e = tent_entropy(x, y);
        CHECK(e >= 0.5 * ref - 1e-12);
        CHECK(e <= ref + 1e-12);
    }
}

TEST_CASE("coarsening never raises entropy") {
    SECTION("identity subset") {
        const Curve c = tent(0.5, 0.25);
        std::vector<std::size_t> all{0, 1, 2};
        const auto [coarse, fine] = coarsen_entropy_check(c, all);
        CHECK(coarse == fine);
    }
    SECTION("endpoints only") {
        const auto [coarse, fine] = coarsen_entropy_check(tent(0.5, 0.25), {0, 2});
        CHECK(coarse == 0.0);
        CHECK_THAT(fine, Catch::Matchers::WithinAbs(pointwise_entropy(0.5), 1e-15));
    }
    SECTION("missing endpoint is an error") {
        CHECK_THROWS_AS(coarsen_entropy_check(tent(0.5, 0.25), {0, 1}), std::domain_error);
    }
    SECTION("random curves, random subsets") {
        Rng rng(33);
        for (int trial = 0; trial < 1000; ++trial) {
            const Curve c = random_curve(rng, 2 + static_cast<int>(rng.next_u64() % 10));
            const std::size_t last = c.breakpoints().size() - 1;
            std::vector<std::size_t> subset{0, last};
            for (std::size_t i = 1; i < last; ++i)
                if (rng.uniform01() < 0.5) subset.push_back(i);
            const auto [coarse, fine] = coarsen_entropy_check(c, subset);
            REQUIRE(coarse <= fine + 1e-12);
        }
    }
}

TEST_CASE("curve entropy is positive away from the zero curve") {
    Rng rng(44);
    CHECK(curve_entropy(Curve::zero()) == 0.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Curve c = random_curve(rng, 8);
        if (sup_displacement(c) > 1e-6) CHECK(curve_entropy(c) > 0.0);
    }
}
