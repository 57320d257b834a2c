#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>

#include "obprm/geometry.hpp"
#include "obprm/rng.hpp"
#include "test_support.hpp"

using namespace obprm;

namespace {

PolyconvexSet unit_square_set() { return PolyconvexSet({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0})}); }

ConvexPolytope triangle(const Point& a, const Point& b, const Point& c) {
    return polytope_from_hull_2d(convex_hull_2d({a, b, c}));
}

}  // namespace

TEST_CASE("polytope containment", "[geometry]") {
    auto sq = make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0});
    CHECK(sq.contains(Vec{0.5, 0.5}));
    CHECK_FALSE(sq.contains(Vec{2.0, 0.0}));
    CHECK(sq.contains(Vec{1.0, 0.5}));               // boundary is inside (closed set)
    CHECK(sq.contains(Vec{1.0 + 0.5e-9, 0.5}));      // within the eps band
    CHECK_FALSE(sq.contains(Vec{1.0 + 1e-6, 0.5}));
    CHECK_THROWS_AS(sq.contains(Vec{0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("polyconvex containment over unions", "[geometry]") {
    PolyconvexSet two({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0}),
                       make_box(Vec{2.0, 2.0}, Vec{3.0, 3.0})});
    CHECK(two.contains(Vec{2.5, 2.5}));
    CHECK_FALSE(two.contains(Vec{1.5, 1.5}));

    PolyconvexSet one({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0})});
    for (double x : {0.2, 0.8, 1.2}) {
        Point p{x, 0.4};
        CHECK(one.contains(p) == one.parts()[0].contains(p));
    }
    CHECK_THROWS_AS(two.contains(Vec{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("construction rejects bad inputs", "[geometry]") {
    CHECK_THROWS_AS(HalfSpace(Vec{0.0, 0.0}, 1.0), std::invalid_argument);
    // Unbounded: only three sides of a box.
    std::vector<HalfSpace> open = {HalfSpace(Vec{1.0, 0.0}, 1.0), HalfSpace(Vec{-1.0, 0.0}, 0.0),
                                   HalfSpace(Vec{0.0, 1.0}, 1.0)};
    CHECK_THROWS_AS(ConvexPolytope(open), std::invalid_argument);
    // Empty: x <= 0 and x >= 1.
    std::vector<HalfSpace> empty = {HalfSpace(Vec{1.0, 0.0}, 0.0), HalfSpace(Vec{-1.0, 0.0}, -1.0),
                                    HalfSpace(Vec{0.0, 1.0}, 1.0), HalfSpace(Vec{0.0, -1.0}, 0.0)};
    CHECK_THROWS_AS(ConvexPolytope(empty), std::invalid_argument);
    CHECK_FALSE(ConvexPolytope::try_build(empty).has_value());
}

TEST_CASE("ray boundary hits", "[geometry]") {
    auto s = unit_square_set();

    auto exits = ray_boundary_hits(s, Vec{0.5, 0.5}, Vec{1.0, 0.0}, 2.0);
    REQUIRE(exits.size() == 1);
    CHECK(exits[0] == Approx(0.5));

    auto through = ray_boundary_hits(s, Vec{-1.0, 0.5}, Vec{1.0, 0.0}, 3.0);
    REQUIRE(through.size() == 2);
    CHECK(through[0] == Approx(1.0));
    CHECK(through[1] == Approx(2.0));

    SECTION("abutting parts make no interior flip") {
        PolyconvexSet pair({make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0}),
                            make_box(Vec{1.0, 0.0}, Vec{2.0, 1.0})});
        auto hits = ray_boundary_hits(pair, Vec{0.5, 0.5}, Vec{1.0, 0.0}, 3.0);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0] == Approx(1.5));  // exits the union at x=2
    }

    SECTION("grazing ray along a face reports no flip") {
        auto hits = ray_boundary_hits(s, Vec{-0.5, 1.0}, Vec{1.0, 0.0}, 3.0);
        CHECK(hits.empty());
    }

    SECTION("dense membership scan oracle, nonconvex union toward a corner") {
        PolyconvexSet plus({make_box(Vec{-2.0, -0.5}, Vec{2.0, 0.5}),
                            make_box(Vec{-0.5, -2.0}, Vec{0.5, 2.0})});
        Vec dir = Vec{1.0, 0.62}.normalized();
        auto got = ray_boundary_hits(plus, Vec{0.0, 0.0}, dir, 4.0);
        auto oracle = testsupport::dense_scan_hits(plus, Vec{0.0, 0.0}, dir, 4.0);
        REQUIRE(got.size() == oracle.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(std::abs(got[i] - oracle[i]) < 2e-4);
    }

    SECTION("hit parity: even outside, odd inside") {
        RngStream rng(41);
        PolyconvexSet plus({make_box(Vec{-2.0, -0.5}, Vec{2.0, 0.5}),
                            make_box(Vec{-0.5, -2.0}, Vec{0.5, 2.0})});
        for (int trial = 0; trial < 500; ++trial) {
            Point origin{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
            double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            Vec dir{std::cos(a), std::sin(a)};
            auto hits = ray_boundary_hits(plus, origin, dir, 20.0);  // reach beyond the set
            bool inside = plus.contains(origin);
            CHECK(hits.size() % 2 == (inside ? 1u : 0u));
        }
    }
}

TEST_CASE("centroid", "[geometry]") {
    auto sq = make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0});
    CHECK(sq.centroid()[0] == Approx(0.5).margin(1e-12));
    CHECK(sq.centroid()[1] == Approx(0.5).margin(1e-12));

    auto tri = triangle(Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    CHECK(tri.centroid()[0] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(tri.centroid()[1] == Approx(1.0 / 3.0).margin(1e-12));

    SECTION("asymmetric quad against rejection sampling") {
        auto quad = polytope_from_hull_2d(
            convex_hull_2d({Vec{0.0, 0.0}, Vec{2.0, 0.1}, Vec{2.4, 1.7}, Vec{0.3, 1.2}}));
        Point c = quad.centroid();
        RngStream rng(7);
        double sx = 0.0, sy = 0.0;
        std::int64_t accepted = 0;
        while (accepted < 4000000) {
            Point p{rng.uniform(0.0, 2.4), rng.uniform(0.0, 1.7)};
            if (!quad.contains(p)) continue;
            sx += p[0];
            sy += p[1];
            ++accepted;
        }
        CHECK(std::abs(sx / accepted - c[0]) < 1e-3);
        CHECK(std::abs(sy / accepted - c[1]) < 1e-3);
    }

    SECTION("degenerate polytope has no centroid") {
        std::vector<HalfSpace> seg = {HalfSpace(Vec{0.0, 1.0}, 0.0), HalfSpace(Vec{0.0, -1.0}, 0.0),
                                      HalfSpace(Vec{1.0, 0.0}, 1.0), HalfSpace(Vec{-1.0, 0.0}, 0.0)};
        ConvexPolytope degenerate(seg);
        CHECK_FALSE(degenerate.is_full_dimensional());
        CHECK_THROWS_AS(degenerate.centroid(), std::domain_error);
    }
}

TEST_CASE("diameter", "[geometry]") {
    CHECK(unit_square_set().diameter() == Approx(std::sqrt(2.0)));

    std::vector<HalfSpace> seg = {HalfSpace(Vec{0.0, 1.0}, 0.0), HalfSpace(Vec{0.0, -1.0}, 0.0),
                                  HalfSpace(Vec{1.0, 0.0}, 1.0), HalfSpace(Vec{-1.0, 0.0}, 0.0)};
    CHECK(PolyconvexSet({ConvexPolytope(seg)}).diameter() == Approx(1.0));

    SECTION("random 10-gon against the all-pairs oracle") {
        RngStream rng(11);
        for (int round = 0; round < 20; ++round) {
            std::vector<Point> pts;
            for (int i = 0; i < 10; ++i) {
                double a = 2.0 * std::numbers::pi * (i + rng.uniform(0.05, 0.45)) / 10.0;
                double r = rng.uniform(1.0, 2.0);
                pts.push_back(Vec{r * std::cos(a), r * std::sin(a)});
            }
            auto poly = polytope_from_hull_2d(convex_hull_2d(pts));
            double oracle = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    oracle = std::max(oracle, pts[i].dist(pts[j]));
            CHECK(PolyconvexSet({poly}).diameter() == Approx(oracle).margin(1e-9));
        }
    }
}

TEST_CASE("volume and surface measure", "[geometry]") {
    CHECK(make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0}).volume() == Approx(1.0));
    CHECK(make_box(Vec{0.0, 0.0}, Vec{1.0, 1.0}).surface_measure() == Approx(4.0));
    CHECK(make_box(Vec{0.0, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}).volume() == Approx(1.0));
    CHECK(make_box(Vec{0.0, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}).surface_measure() == Approx(6.0));

    // Regular hexagon with unit side: circumradius 1.
    auto hex = make_regular_polygon(6, 1.0, Vec{0.0, 0.0});
    CHECK(hex.surface_measure() == Approx(6.0));
    CHECK(hex.volume() == Approx(1.5 * std::sqrt(3.0)));

    CHECK_THROWS_AS(make_box(Vec{0.0, 0.0, 0.0, 0.0}, Vec{1.0, 1.0, 1.0, 1.0}),
                    std::domain_error);
}

TEST_CASE("rigid motions", "[geometry]") {
    Segment seg(Vec{0.0, 0.0}, Vec{1.0, 0.0});
    auto moved = apply_motion(RigidMotion::identity(2), seg);
    CHECK(moved.p.dist(seg.p) == 0.0);
    CHECK(moved.q.dist(seg.q) == 0.0);

    auto quarter = apply_motion(RigidMotion::rotation_2d(std::numbers::pi / 2.0), seg);
    CHECK(quarter.q[0] == Approx(0.0).margin(1e-12));
    CHECK(quarter.q[1] == Approx(1.0).margin(1e-12));

    RngStream rng(3);
    for (int i = 0; i < 50; ++i) {
        auto g = RigidMotion::rotation_2d(rng.uniform(0.0, 6.28),
                                          Vec{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)});
        Segment s(Vec{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)},
                  Vec{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
        CHECK(std::abs(apply_motion(g, s).length() - s.length()) < 1e-12);
    }

    CHECK_THROWS_AS(RigidMotion(2, {1.0, 0.0, 0.0, 2.0}, Vec::zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(RigidMotion(2, {0.0, 1.0, 1.0, 0.0}, Vec::zero(2)),
                    std::invalid_argument);  // reflection, det -1
}

TEST_CASE("containment is motion invariant", "[geometry]") {
    RngStream rng(17);
    auto poly = make_regular_polygon(7, 1.3, Vec{0.4, -0.2});
    for (int i = 0; i < 100; ++i) {
        Point x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        auto g = RigidMotion::rotation_2d(rng.uniform(0.0, 6.28),
                                          Vec{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)});
        // Skip the eps-shell where closed-set classification may differ.
        bool near_boundary = poly.contains(x, 1e-7) && !poly.contains(x, -1e-7);
        if (near_boundary) continue;
        CHECK(poly.contains(x) == poly.transformed(g).contains(g.apply(x)));
    }
}

TEST_CASE("volume and surface under motion and scaling", "[geometry]") {
    auto poly = make_regular_polygon(5, 2.0, Vec{1.0, 1.0});
    auto g = RigidMotion::rotation_2d(0.7, Vec{3.0, -2.0});
    CHECK(poly.transformed(g).volume() == Approx(poly.volume()).epsilon(1e-9));
    CHECK(poly.transformed(g).surface_measure() == Approx(poly.surface_measure()).epsilon(1e-9));

    auto cube = make_box(Vec{-1.0, -1.0, -1.0}, Vec{1.0, 1.0, 1.0});
    auto g3 = RigidMotion::rotation_3d(Vec{1.0, 2.0, 3.0}, 0.9, Vec{1.0, 0.0, -1.0});
    CHECK(cube.transformed(g3).volume() == Approx(cube.volume()).epsilon(1e-9));
    CHECK(cube.transformed(g3).surface_measure() == Approx(cube.surface_measure()).epsilon(1e-9));

    for (double lambda : {0.5, 2.0, 3.7}) {
        CHECK(poly.scaled(lambda).volume() == Approx(poly.volume() * lambda * lambda));
        CHECK(poly.scaled(lambda).surface_measure() == Approx(poly.surface_measure() * lambda));
        CHECK(cube.scaled(lambda).volume() ==
              Approx(cube.volume() * lambda * lambda * lambda).epsilon(1e-12));
        CHECK(cube.scaled(lambda).surface_measure() ==
              Approx(cube.surface_measure() * lambda * lambda).epsilon(1e-12));
    }

    // Growth never shrinks the diameter.
    PolyconvexSet small({poly});
    PolyconvexSet grown({poly.scaled(1.25)});
    CHECK(grown.diameter() >= small.diameter());
}

TEST_CASE("stored half-spaces are irredundant", "[geometry]") {
    std::vector<HalfSpace> with_extra = {
        HalfSpace(Vec{1.0, 0.0}, 1.0),  HalfSpace(Vec{-1.0, 0.0}, 0.0),
        HalfSpace(Vec{0.0, 1.0}, 1.0),  HalfSpace(Vec{0.0, -1.0}, 0.0),
        HalfSpace(Vec{1.0, 1.0}, 5.0),                    // far away
        HalfSpace(Vec{1.0, 1.0}, 2.0),                    // tangent at the corner
    };
    ConvexPolytope sq(with_extra);
    CHECK(sq.halfspaces().size() == 4);
    CHECK(sq.volume() == Approx(1.0));

    // Removing any stored half-space grows the set (or unbounds it).
    for (std::size_t drop = 0; drop < sq.halfspaces().size(); ++drop) {
        std::vector<HalfSpace> reduced;
        for (std::size_t i = 0; i < sq.halfspaces().size(); ++i)
            if (i != drop) reduced.push_back(sq.halfspaces()[i]);
        bool grew = false;
        try {
            ConvexPolytope smaller(reduced);
            grew = smaller.volume() > sq.volume() + 1e-9 ||
                   smaller.vertices().size() > sq.vertices().size();
        } catch (const std::invalid_argument&) {
            grew = true;  // unbounded without it
        }
        CHECK(grew);
    }
}

TEST_CASE("segment boundary intersection", "[geometry]") {
    auto s = unit_square_set();
    CHECK(segment_intersects_boundary(s, Segment(Vec{0.5, 0.5}, Vec{1.5, 0.5})));
    CHECK_FALSE(segment_intersects_boundary(s, Segment(Vec{0.3, 0.3}, Vec{0.7, 0.7})));
    CHECK_FALSE(segment_intersects_boundary(s, Segment(Vec{2.0, 2.0}, Vec{3.0, 3.0})));
    // Endpoint resting on the boundary counts.
    CHECK(segment_intersects_boundary(s, Segment(Vec{1.0, 0.5}, Vec{1.5, 0.5})));

    SECTION("grazing cases agree with the dense scan") {
        RngStream rng(29);
        PolyconvexSet plus({make_box(Vec{-2.0, -0.5}, Vec{2.0, 0.5}),
                            make_box(Vec{-0.5, -2.0}, Vec{0.5, 2.0})});
        int checked = 0;
        for (int i = 0; i < 80; ++i) {
            Segment seg(Vec{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)},
                        Vec{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)});
            if (seg.length() < 1e-6) continue;
            auto scan = testsupport::dense_scan_hits(plus, seg.p, seg.direction(), seg.length());
            bool oracle = !scan.empty();
            bool endpoint_inside_differs = plus.contains(seg.p) != plus.contains(seg.q);
            if (oracle || endpoint_inside_differs) {
                CHECK(segment_intersects_boundary(plus, seg));
                ++checked;
            }
        }
        CHECK(checked > 20);
    }
}

TEST_CASE("preconditions and normalization", "[geometry]") {
    auto s = unit_square_set();
    CHECK_THROWS_AS(ray_boundary_hits(s, Vec{0.5, 0.5}, Vec{2.0, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ray_boundary_hits(s, Vec{0.5, 0.5}, Vec{1.0, 0.0}, 0.0), std::invalid_argument);

    HalfSpace h(Vec{3.0, 0.0}, 6.0);  // normalized on construction
    CHECK(h.normal()[0] == Approx(1.0));
    CHECK(h.offset() == Approx(2.0));

    CHECK_THROWS_AS(Ball(Vec{0.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Segment(Vec{0.0, 0.0}, Vec{1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("minimum enclosing ball", "[geometry]") {
    Ball b = min_enclosing_ball(
        {Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{1.0, 1.0}, Vec{0.0, 1.0}});
    CHECK(b.center[0] == Approx(0.5));
    CHECK(b.center[1] == Approx(0.5));
    CHECK(b.radius == Approx(std::sqrt(0.5)));

    // Obtuse triangle: ball spanned by the longest edge only.
    Ball o = min_enclosing_ball({Vec{0.0, 0.0}, Vec{4.0, 0.0}, Vec{2.0, 0.2}});
    CHECK(o.radius == Approx(2.0).margin(1e-6));

    Ball c = min_enclosing_ball(make_box(Vec{0.0, 0.0, 0.0}, Vec{2.0, 2.0, 2.0}).vertices());
    CHECK(c.radius == Approx(std::sqrt(3.0)));
}
