#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "topokin/measure.hpp"
#include "topokin/trajectory.hpp"

using namespace topokin;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Trajectory scaled(const Trajectory& traj, double k) {
    Trajectory s = traj;
    auto base = traj.eval;
    s.eval = [base, k](double t) {
        Jet j = base(t);
        j.d0 = k * j.d0;
        j.d1 = k * j.d1;
        j.d2 = k * j.d2;
        j.d3 = k * j.d3;
        return j;
    };
    return s;
}

std::vector<Trajectory> catalog_all() {
    return {
        make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi),
        make_catalog_trajectory("helix", {1.0, 1.0}, 0.0, kTwoPi),
        make_catalog_trajectory("cubic_line", {}, -1.0, 1.0),
        make_catalog_trajectory("double_circle", {1.0}, 0.0, 2.0 * kTwoPi),
        make_catalog_trajectory("gerono", {1.0}, 0.0, kTwoPi),
        make_catalog_trajectory("accelerating_circle", {}, 0.0, kTwoPi * std::sqrt(2.0)),
    };
}

} // namespace

TEST_CASE("preimage of a ball on the unit circle") {
    const Trajectory c = make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi);
    // |zeta(t) - (1,0,0)| = 2 sin(t/2) < 1 iff t < pi/3 or t > 5pi/3
    const IntervalSet s = preimage_ball_intervals(c, {1.0, 0.0, 0.0}, 1.0);
    REQUIRE(s.size() == 2);
    CHECK(s.intervals[0].lo == Approx(0.0));
    CHECK(s.intervals[0].hi == Approx(kPi / 3.0).epsilon(1e-9));
    CHECK(s.intervals[1].lo == Approx(5.0 * kPi / 3.0).epsilon(1e-9));
    CHECK(s.intervals[1].hi == Approx(kTwoPi));
    CHECK(lebesgue_measure_1d(s) == Approx(kTwoPi / 3.0).epsilon(1e-9));
}

TEST_CASE("preimage of a disjoint ball is empty") {
    const Trajectory c = make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi);
    CHECK(preimage_ball_intervals(c, {0.0, 0.0, 5.0}, 1.0).empty());
}

TEST_CASE("preimage for the cubic line near its stationary point") {
    const Trajectory c = make_catalog_trajectory("cubic_line", {}, -1.0, 1.0);
    const IntervalSet s = preimage_ball_intervals(c, {0.0, 0.0, 0.0}, 1e-3);
    REQUIRE(s.size() == 1);
    CHECK(s.intervals[0].lo == Approx(-0.1).epsilon(1e-6));
    CHECK(s.intervals[0].hi == Approx(0.1).epsilon(1e-6));
    CHECK(lebesgue_measure_1d(s) == Approx(0.2).epsilon(1e-6));
}

TEST_CASE("lebesgue measure of interval sets") {
    CHECK(lebesgue_measure_1d(IntervalSet{}) == 0.0);
    IntervalSet s;
    s.add(0.0, kPi / 3.0);
    s.add(5.0 * kPi / 3.0, kTwoPi);
    CHECK(lebesgue_measure_1d(s) == Approx(kTwoPi / 3.0));
    IntervalSet one;
    one.add(-0.1, 0.1);
    CHECK(lebesgue_measure_1d(one) == Approx(0.2));
}

TEST_CASE("partition arc length of catalog curves") {
    const MeasureOptions opts;
    const LengthEstimate circ =
        partition_arc_length_whole(make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi), opts);
    CHECK(circ.converged);
    CHECK(circ.value >= kTwoPi * (1.0 - 1e-6));
    CHECK(circ.value <= kTwoPi);
    CHECK(circ.lower_bound <= circ.value);

    const LengthEstimate dbl = partition_arc_length_whole(
        make_catalog_trajectory("double_circle", {1.0}, 0.0, 2.0 * kTwoPi), opts);
    CHECK(dbl.value == Approx(2.0 * kTwoPi).epsilon(1e-5));

    const LengthEstimate hel =
        partition_arc_length_whole(make_catalog_trajectory("helix", {1.0, 1.0}, 0.0, kTwoPi), opts);
    CHECK(hel.value == Approx(kTwoPi * std::sqrt(2.0)).margin(1e-5));
}

TEST_CASE("chord sums are monotone non-decreasing under refinement") {
    for (const Trajectory& traj : catalog_all()) {
        double prev = 0.0;
        for (int n : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
            double sum = 0.0;
            Vec3 last = position(traj, traj.a);
            for (int i = 1; i <= n; ++i) {
                const Vec3 p = position(traj, traj.a + traj.span() * i / n);
                sum += dist(last, p);
                last = p;
            }
            INFO(traj.label << " n=" << n);
            CHECK(sum >= prev);
            prev = sum;
        }
    }
}

TEST_CASE("quadrature arc length matches closed forms") {
    const MeasureOptions opts;
    CHECK(quadrature_arc_length_whole(make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi), opts) ==
          Approx(kTwoPi).epsilon(1e-8));
    CHECK(quadrature_arc_length_whole(make_catalog_trajectory("cubic_line", {}, -1.0, 1.0), opts) ==
          Approx(2.0).epsilon(1e-8));
}

TEST_CASE("partition and quadrature lengths agree on injective curves") {
    const MeasureOptions opts;
    for (const Trajectory& traj : catalog_all()) {
        if (traj.label == "double_circle" || traj.label == "accelerating_circle") continue;
        const double lp = partition_arc_length_whole(traj, opts).value;
        const double lq = quadrature_arc_length_whole(traj, opts);
        INFO(traj.label);
        CHECK(lp == Approx(lq).epsilon(1e-5));
    }
}

TEST_CASE("image measure equals traversal length for injective curves") {
    const MeasureOptions opts;
    for (const Trajectory& traj : catalog_all()) {
        if (traj.label == "double_circle" || traj.label == "accelerating_circle") continue;
        const LengthEstimate lp = partition_arc_length_whole(traj, opts);
        const ImageMeasure im = image_measure_whole(traj, opts);
        INFO(traj.label);
        CHECK(im.converged);
        CHECK(im.value == Approx(lp.value).epsilon(1e-4));
    }
}

TEST_CASE("image measure counts a doubly traversed circle once") {
    const MeasureOptions opts;
    const Trajectory dbl = make_catalog_trajectory("double_circle", {1.0}, 0.0, 2.0 * kTwoPi);
    const ImageMeasure im = image_measure_whole(dbl, opts);
    CHECK(im.converged);
    CHECK(im.value == Approx(kTwoPi).epsilon(1e-4));
    const double traversal = partition_arc_length_whole(dbl, opts).value;
    CHECK(traversal / im.value == Approx(2.0).epsilon(1e-4));
}

TEST_CASE("preimage endpoints sit on the sphere of the ball") {
    std::mt19937 rng(777);
    const std::vector<Trajectory> trajs = {
        make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi),
        make_catalog_trajectory("helix", {1.0, 1.0}, 0.0, kTwoPi),
        make_catalog_trajectory("cubic_line", {}, -1.0, 1.0),
        make_catalog_trajectory("gerono", {1.0}, 0.0, kTwoPi),
    };
    int endpoint_checks = 0;
    std::uniform_real_distribution<double> radii(0.05, 1.2);
    for (int i = 0; i < 100; ++i) {
        const Trajectory& traj = trajs[i % trajs.size()];
        std::uniform_real_distribution<double> ts(traj.a, traj.b);
        const double t0 = ts(rng);
        const Vec3 center = position(traj, t0);
        const double r = radii(rng);
        const IntervalSet s = preimage_ball_intervals(traj, center, r);
        REQUIRE_FALSE(s.empty());
        for (const auto& iv : s.intervals) {
            for (double tau : {iv.lo, iv.hi}) {
                if (tau == traj.a || tau == traj.b) continue;
                CHECK(std::fabs(dist(position(traj, tau), center) - r) <= 1e-8);
                ++endpoint_checks;
            }
        }
        std::uniform_int_distribution<std::size_t> which(0, s.size() - 1);
        for (int k = 0; k < 10; ++k) {
            const auto& iv = s.intervals[which(rng)];
            std::uniform_real_distribution<double> inside(iv.lo, iv.hi);
            CHECK(dist(position(traj, inside(rng)), center) < r + 1e-9);
        }
    }
    CHECK(endpoint_checks > 50);
}

TEST_CASE("refined ball intervals match a fresh full scan") {
    const Trajectory g = make_catalog_trajectory("gerono", {1.0}, 0.0, kTwoPi);
    const Vec3 center = position(g, kPi); // self-crossing point
    const MeasureOptions opts;
    const IntervalSet big = preimage_ball_intervals(g, center, 0.2, opts);
    const IntervalSet ref = refine_ball_intervals(g, center, 0.05, big, opts);
    const IntervalSet fresh = preimage_ball_intervals(g, center, 0.05, opts);
    REQUIRE(ref.size() == fresh.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(ref.intervals[i].lo == Approx(fresh.intervals[i].lo).margin(1e-9));
        CHECK(ref.intervals[i].hi == Approx(fresh.intervals[i].hi).margin(1e-9));
    }
}

TEST_CASE("half-circle image measure is parametrization independent") {
    // same arc, uniform and quadratically accelerating parametrizations
    const Trajectory uniform = make_expression_trajectory("cos(t)", "sin(t)", "0", 0.0, kPi);
    const Trajectory reparam = make_expression_trajectory("cos(t^2/(2*pi))", "sin(t^2/(2*pi))", "0",
                                                          0.0, kPi * std::sqrt(2.0));
    const MeasureOptions opts;
    const double mu = image_measure_whole(uniform, opts).value;
    const double mr = image_measure_whole(reparam, opts).value;
    CHECK(mu == Approx(kPi).epsilon(1e-4));
    CHECK(mr == Approx(kPi).epsilon(1e-4));
    CHECK(mu == Approx(mr).epsilon(1e-4));
}

TEST_CASE("all three measures scale linearly with the coordinates") {
    const MeasureOptions opts;
    for (const char* name : {"circle", "helix"}) {
        const Trajectory base = name == std::string("circle")
                                    ? make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi)
                                    : make_catalog_trajectory("helix", {1.0, 1.0}, 0.0, kTwoPi);
        const double lp0 = partition_arc_length_whole(base, opts).value;
        const double lq0 = quadrature_arc_length_whole(base, opts);
        const double im0 = image_measure_whole(base, opts).value;
        for (double k : {0.5, 2.0, 3.0}) {
            const Trajectory s = scaled(base, k);
            INFO(name << " k=" << k);
            CHECK(partition_arc_length_whole(s, opts).value == Approx(k * lp0).epsilon(1e-9));
            CHECK(quadrature_arc_length_whole(s, opts) == Approx(k * lq0).epsilon(1e-9));
            CHECK(image_measure_whole(s, opts).value == Approx(k * im0).epsilon(1e-9));
        }
    }
}

TEST_CASE("restricted lengths respect the interval set") {
    const Trajectory c = make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi);
    IntervalSet half;
    half.add(0.0, kPi);
    const MeasureOptions opts;
    CHECK(partition_arc_length(c, half, opts).value == Approx(kPi).epsilon(1e-6));
    CHECK(quadrature_arc_length(c, half, opts) == Approx(kPi).epsilon(1e-8));
    CHECK(image_measure(c, half, opts).value == Approx(kPi).epsilon(1e-5));
}

TEST_CASE("preimage rejects a non-positive radius") {
    const Trajectory c = make_catalog_trajectory("circle", {1.0}, 0.0, kTwoPi);
    CHECK_THROWS_AS(preimage_ball_intervals(c, {1.0, 0.0, 0.0}, 0.0), Error);
}
