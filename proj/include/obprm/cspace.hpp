#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "obprm/geometry.hpp"

namespace obprm {

// Rigid robot body in workspace coordinates, reference point at the origin.
struct RobotShape {
    ConvexPolytope body;

    explicit RobotShape(ConvexPolytope b) : body(std::move(b)) {
        if (!body.contains(Vec::zero(body.dimension())))
            throw std::invalid_argument("RobotShape: body must contain the origin");
    }

    int dimension() const { return body.dimension(); }
};

struct FeatureCount {
    std::int64_t robot_features = 1;
    std::int64_t obstacle_features = 1;
    int dof = 1;

    FeatureCount(std::int64_t m, std::int64_t n, int d)
        : robot_features(m), obstacle_features(n), dof(d) {
        if (m < 1 || n < 1 || d < 1) throw std::invalid_argument("FeatureCount: all fields >= 1");
    }
};

// Each robot-feature/obstacle-feature pair contributes one contact
// hypersurface: m * n of them.
inline std::int64_t contact_hypersurface_count(const FeatureCount& fc) {
    return fc.robot_features * fc.obstacle_features;
}

// (d-1)-fold contacts scale as obstacle_features^(dof-1).
inline std::int64_t fold_contact_count(const FeatureCount& fc) {
    std::int64_t r = 1;
    for (int i = 0; i + 1 < fc.dof; ++i) r *= fc.obstacle_features;
    return r;
}

// Translational C-obstacle of obstacle O for robot A under the convention
// O (+) A = { o - a }. Built through support functions: a facet normal u of
// the sum satisfies h(u) = h_O(u) + h_A(-u); candidates are both shapes'
// facet normals plus, in 3D, cross products of edge-direction pairs.
// Redundant candidates are pruned by polytope construction, so the result
// equals the hull of pairwise vertex differences.
inline ConvexPolytope minkowski_cobstacle(const ConvexPolytope& obstacle, const RobotShape& robot) {
    require_same_dim(obstacle.dimension(), robot.dimension(), "minkowski_cobstacle");
    const int dim = obstacle.dimension();
    const ConvexPolytope& body = robot.body;

    std::vector<Vec> candidates;
    auto push_dir = [&](const Vec& v) {
        double len = v.norm();
        if (len < 1e-12) return;
        Vec u = v * (1.0 / len);
        for (const auto& c : candidates)
            if ((c - u).norm() < 1e-9) return;
        candidates.push_back(u);
    };
    for (const auto& h : obstacle.halfspaces()) push_dir(h.normal());
    for (const auto& h : body.halfspaces()) push_dir(-h.normal());
    if (dim == 3) {
        auto o_edges = polytope_edges(obstacle);
        auto a_edges = polytope_edges(body);
        for (const auto& eo : o_edges) {
            Vec d_o = obstacle.vertices()[eo.second] - obstacle.vertices()[eo.first];
            for (const auto& ea : a_edges) {
                Vec d_a = body.vertices()[ea.second] - body.vertices()[ea.first];
                Vec c = cross3(d_o, d_a);
                push_dir(c);
                push_dir(-c);
            }
        }
    }

    std::vector<HalfSpace> hs;
    hs.reserve(candidates.size());
    for (const auto& u : candidates) hs.emplace_back(u, obstacle.support(u) + body.support(-u));
    return ConvexPolytope(std::move(hs));
}

// Nonconvex obstacles map part by part over the union.
inline PolyconvexSet minkowski_cobstacle(const PolyconvexSet& obstacles, const RobotShape& robot) {
    std::vector<ConvexPolytope> parts;
    parts.reserve(obstacles.parts().size());
    for (const auto& p : obstacles.parts()) parts.push_back(minkowski_cobstacle(p, robot));
    return PolyconvexSet(std::move(parts));
}

}  // namespace obprm
