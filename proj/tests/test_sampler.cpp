#include <catch2/catch.hpp>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "obprm/geometry.hpp"
#include "obprm/rng.hpp"
#include "obprm/sampler.hpp"
#include "test_support.hpp"

using namespace obprm;

namespace {

PolyconvexSet unit_square_set() { return PolyconvexSet({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0})}); }

PolyconvexSet cross_set() {
    return PolyconvexSet({make_box(Vec{-10.4, -0.8}, Vec{10.4, 0.8}),
                          make_box(Vec{-0.8, -10.4}, Vec{0.8, 10.4})});
}

bool batches_equal(const NodeBatch& a, const NodeBatch& b) {
    if (a.success_count != b.success_count || a.outcomes.size() != b.outcomes.size()) return false;
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        const auto& x = a.outcomes[i];
        const auto& y = b.outcomes[i];
        if (x.status != y.status || x.iterations != y.iterations) return false;
        for (int c = 0; c < x.direction.dim(); ++c) {
            if (x.direction[c] != y.direction[c]) return false;
            if (x.status == RayOutcome::Status::FreeNode && x.node[c] != y.node[c]) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("registration point", "[sampler]") {
    auto sq = unit_square_set();
    ObprmParams params;
    params.delta = 0.01;
    params.ray_length = 4.0;

    Point c = registration_point(sq, params);
    CHECK(c[0] == Approx(0.5));
    CHECK(c[1] == Approx(0.5));

    params.registration = Registration::explicit_point(Vec{0.25, 0.25});
    Point e = registration_point(sq, params);
    CHECK(e[0] == Approx(0.25));

    params.registration = Registration::explicit_point(Vec{5.0, 5.0});
    CHECK_THROWS_AS(registration_point(sq, params), std::invalid_argument);

    SECTION("union: centroid of the largest part") {
        PolyconvexSet uneven({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0}),
                              make_box(Vec{2.0, 0.0}, Vec{6.0, 4.0})});
        ObprmParams p;
        p.delta = 0.01;
        p.ray_length = 4.0;
        Point r = registration_point(uneven, p);
        CHECK(r[0] == Approx(4.0));
        CHECK(r[1] == Approx(2.0));
    }
}

TEST_CASE("direction sampling", "[sampler]") {
    SECTION("always unit norm") {
        RngStream rng(1);
        for (int i = 0; i < 1000; ++i) {
            int n = 2 + i % 3;
            CHECK(std::abs(sample_direction(rng, n).norm() - 1.0) < 1e-12);
        }
    }

    SECTION("2D angles are uniform (chi-square over 32 bins)") {
        RngStream rng(2);
        std::vector<std::int64_t> bins(32, 0);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            Vec d = sample_direction(rng, 2);
            double a = std::atan2(d[1], d[0]) + std::numbers::pi;
            int b = std::min(31, static_cast<int>(a / (2.0 * std::numbers::pi) * 32.0));
            ++bins[b];
        }
        double stat = testsupport::chi_square_uniform(bins);
        CHECK(testsupport::chi_square_p_value(stat, 31) > 0.001);
    }

    SECTION("3D isotropy: mean vector stays near zero") {
        RngStream rng(3);
        Vec sum = Vec::zero(3);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) sum = sum + sample_direction(rng, 3);
        CHECK((sum * (1.0 / draws)).norm() < 0.01);
    }

    RngStream rng(4);
    CHECK_THROWS_AS(sample_direction(rng, 1), std::invalid_argument);
}

TEST_CASE("cast and bisect", "[sampler]") {
    auto sq = unit_square_set();
    ObprmParams params;
    params.ray_length = 8.0;
    params.delta = 1.0;

    SECTION("known boundary at t=0.5, budget 8, step 1") {
        auto out = cast_and_bisect(sq, Vec{0.5, 0.5}, Vec{1.0, 0.0}, params);
        REQUIRE(out.status == RayOutcome::Status::FreeNode);
        CHECK(out.iterations <= 3);  // ceil(log2(8/1))

        // Trace oracle: replicate the halving sequence against the exact
        // membership rule x <= 1 (boundary at t = 0.5 along this ray).
        double t_in = 0.0, t_out = 8.0;
        int iters = 0;
        while (t_out - t_in > 1.0) {
            double mid = 0.5 * (t_in + t_out);
            if (0.5 + mid <= 1.0 + kEps)
                t_in = mid;
            else
                t_out = mid;
            ++iters;
        }
        CHECK(out.iterations == iters);
        CHECK(out.t_outside == Approx(t_out));
        CHECK(out.node[0] == Approx(0.5 + t_out));
        // The free node sits past the true boundary by at most delta.
        CHECK(out.node[0] >= 1.0);
        CHECK(out.node[0] - 1.0 <= params.delta + 1e-12);
    }

    SECTION("endpoint still inside a bigger enclosing part") {
        PolyconvexSet nested({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0}),
                              make_box(Vec{-20.0, -20.0}, Vec{20.0, 20.0})});
        auto out = cast_and_bisect(nested, Vec{0.5, 0.5}, Vec{1.0, 0.0}, params);
        CHECK(out.status == RayOutcome::Status::EndpointInsideObstacle);
    }

    SECTION("postconditions of a free node") {
        auto out = cast_and_bisect(sq, Vec{0.5, 0.5}, Vec{0.0, 1.0}, params);
        REQUIRE(out.status == RayOutcome::Status::FreeNode);
        CHECK_FALSE(contains_polyconvex(sq, out.node));
        Point partner = Vec{0.5, 0.5} + Vec{0.0, 1.0} * out.t_inside;
        CHECK(contains_polyconvex(sq, partner));
        CHECK(out.t_outside - out.t_inside <= params.delta + 1e-12);
        CHECK(out.crossing_index == 0);
    }

    CHECK_THROWS_AS(cast_and_bisect(sq, Vec{5.0, 5.0}, Vec{1.0, 0.0}, params),
                    std::invalid_argument);

    SECTION("iteration bound over random convex fixtures") {
        RngStream rng(6);
        for (int round = 0; round < 2000; ++round) {
            int sides = 3 + static_cast<int>(rng.uniform01() * 8.0);
            double radius = rng.uniform(0.4, 4.0);
            Point center{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
            auto poly = make_regular_polygon(sides, radius, center)
                            .transformed(RigidMotion::rotation_2d(rng.uniform(0.0, 6.28)));
            PolyconvexSet set({poly});

            ObprmParams p;
            p.delta = rng.uniform(0.01, 0.5);
            p.ray_length = p.delta * rng.uniform(1.5, 40.0);
            p.max_iterations = 64;
            int bound = bisection_iteration_bound(p.ray_length, p.delta);

            Point origin = poly.centroid();
            Vec dir = sample_direction(rng, 2);
            auto out = cast_and_bisect(set, origin, dir, p);
            if (out.status != RayOutcome::Status::FreeNode) continue;
            CHECK(out.iterations <= bound);
            CHECK(out.t_outside - out.t_inside <= p.delta + 1e-12);
            CHECK(contains_polyconvex(set, origin + dir * out.t_inside));
            CHECK_FALSE(contains_polyconvex(set, origin + dir * out.t_outside));
        }
    }
}

TEST_CASE("node generation batches", "[sampler]") {
    SECTION("convex obstacle with a generous budget never fails") {
        auto sq = unit_square_set();
        ObprmParams params;
        params.num_rays = 200;
        params.delta = 0.01;
        params.ray_length = 2.0 * sq.diameter();
        auto batch = generate_nodes(sq, params, 42);
        CHECK(batch.success_rate == 1.0);
        CHECK(batch.success_count == 200);
    }

    SECTION("cross with a short budget fails exactly as the sweep predicts") {
        auto cross = cross_set();
        ObprmParams params;
        params.num_rays = 20000;
        params.delta = 1.0;
        params.ray_length = 4.25;
        auto batch = generate_nodes(cross, params, 7);
        CHECK(batch.success_rate < 1.0);

        // Exit distance of the union is the larger of the two analytic
        // rectangle exits; integrate the success indicator over the angle.
        const int sweep = 720000;
        std::int64_t ok = 0;
        for (int i = 0; i < sweep; ++i) {
            double theta = 2.0 * std::numbers::pi * (i + 0.5) / sweep;
            double exit = std::max(testsupport::box_exit_distance(10.4, 0.8, theta),
                                   testsupport::box_exit_distance(0.8, 10.4, theta));
            if (exit <= params.ray_length) ++ok;
        }
        double oracle = static_cast<double>(ok) / sweep;
        double se = std::sqrt(oracle * (1.0 - oracle) / params.num_rays);
        CHECK(std::abs(batch.success_rate - oracle) < 4.0 * se);
    }

    SECTION("same seed, byte-identical batch; worker count is irrelevant") {
        auto cross = cross_set();
        ObprmParams params;
        params.num_rays = 500;
        params.delta = 0.5;
        params.ray_length = 6.0;
        auto a = generate_nodes(cross, params, 99);
        auto b = generate_nodes(cross, params, 99);
        auto c = generate_nodes(cross, params, 99, 4);
        CHECK(batches_equal(a, b));
        CHECK(batches_equal(a, c));
        auto d = generate_nodes(cross, params, 100);
        CHECK_FALSE(batches_equal(a, d));
    }

    SECTION("free nodes on a disc-like obstacle spread uniformly in angle") {
        auto gon = make_regular_polygon(64, 5.0, Vec{0.0, 0.0});
        PolyconvexSet set({gon});
        ObprmParams params;
        params.num_rays = 10000;
        params.delta = 0.05;
        params.ray_length = 2.0 * set.diameter();
        auto batch = generate_nodes(set, params, 11);
        REQUIRE(batch.success_rate == 1.0);
        std::vector<std::int64_t> bins(16, 0);
        for (const auto& o : batch.outcomes) {
            double a = std::atan2(o.node[1], o.node[0]) + std::numbers::pi;
            ++bins[std::min<std::size_t>(15, static_cast<std::size_t>(
                                                 a / (2.0 * std::numbers::pi) * 16.0))];
        }
        double stat = testsupport::chi_square_uniform(bins);
        CHECK(testsupport::chi_square_p_value(stat, 15) > 0.001);
    }

    SECTION("per-ray soundness invariants") {
        auto cross = cross_set();
        ObprmParams params;
        params.num_rays = 2000;
        params.delta = 1.0;
        params.ray_length = 4.25;
        int bound = bisection_iteration_bound(params.ray_length, params.delta);
        auto batch = generate_nodes(cross, params, 5);
        Point origin = registration_point(cross, params);
        for (const auto& o : batch.outcomes) {
            if (o.status != RayOutcome::Status::FreeNode) continue;
            CHECK(o.iterations <= bound);
            CHECK_FALSE(contains_polyconvex(cross, o.node));
            CHECK(contains_polyconvex(cross, origin + o.direction * o.t_inside));
        }
    }
}

TEST_CASE("parameter validation", "[sampler]") {
    ObprmParams params;
    params.num_rays = 0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.num_rays = 10;
    params.delta = 2.0;
    params.ray_length = 1.0;  // delta >= ray_length
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.delta = 0.125;
    params.ray_length = 1.0;
    params.max_iterations = 2;  // below ceil(log2(8)) = 3
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.max_iterations = 3;
    CHECK_NOTHROW(params.validate());
}
