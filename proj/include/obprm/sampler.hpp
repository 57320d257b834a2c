#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "obprm/geometry.hpp"
#include "obprm/rng.hpp"

namespace obprm {

// Number of halvings until a bracket of length l shrinks to at most delta.
inline int bisection_iteration_bound(double length, double delta) {
    int k = 0;
    double len = length;
    while (len > delta && k < 64) {
        len *= 0.5;
        ++k;
    }
    return k;
}

struct Registration {
    enum class Mode { Centroid, Explicit };
    Mode mode = Mode::Centroid;
    std::optional<Point> point;

    static Registration centroid() { return Registration{}; }
    static Registration explicit_point(Point p) {
        Registration r;
        r.mode = Mode::Explicit;
        r.point = std::move(p);
        return r;
    }
};

struct ObprmParams {
    int num_rays = 200;
    double ray_length = 1.0;
    double delta = 0.01;
    int max_iterations = 64;
    Registration registration;

    void validate() const {
        if (num_rays < 1) throw std::invalid_argument("ObprmParams: num_rays must be >= 1");
        if (!(ray_length > 0.0)) throw std::invalid_argument("ObprmParams: ray_length must be positive");
        if (!(delta > 0.0 && delta < ray_length))
            throw std::invalid_argument("ObprmParams: need 0 < delta < ray_length");
        if (max_iterations < bisection_iteration_bound(ray_length, delta))
            throw std::invalid_argument("ObprmParams: max_iterations below the bisection bound");
    }
};

struct RayOutcome {
    enum class Status { FreeNode, EndpointInsideObstacle, NoBoundaryCrossing };

    Vec direction;
    Status status = Status::NoBoundaryCrossing;
    Point node;          // valid for FreeNode
    int iterations = 0;  // bisection steps taken
    double t_inside = 0.0;   // bracket end known inside the obstacle
    double t_outside = 0.0;  // bracket end known free; node = origin + t_outside * dir
    int crossing_index = -1;  // which boundary crossing the bracket converged to

    RayOutcome() : direction(Vec{0.0, 0.0}), node(Vec{0.0, 0.0}) {}
};

struct NodeBatch {
    std::vector<RayOutcome> outcomes;
    int success_count = 0;
    double success_rate = 0.0;
};

// Registration point: centroid of the largest-volume part (inside by
// convexity; ties go to the first part), or a caller-supplied interior point.
inline Point registration_point(const PolyconvexSet& obstacle, const ObprmParams& params) {
    if (params.registration.mode == Registration::Mode::Explicit) {
        const Point& p = *params.registration.point;
        if (!obstacle.contains(p))
            throw std::invalid_argument("registration_point: explicit point outside the obstacle");
        return p;
    }
    const ConvexPolytope* best = nullptr;
    double best_volume = -1.0;
    for (const auto& part : obstacle.parts()) {
        double v = part.volume();
        if (v > best_volume) {
            best_volume = v;
            best = &part;
        }
    }
    return best->centroid();
}

// Isotropic unit direction on S^{n-1}.
inline Vec sample_direction(RngStream& stream, int n) {
    if (n < 2) throw std::invalid_argument("sample_direction: n must be >= 2");
    if (n == 2) {
        double a = 2.0 * std::numbers::pi * stream.uniform01();
        return Vec{std::cos(a), std::sin(a)};
    }
    while (true) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = stream.gaussian();
        double len = v.norm();
        if (len > 1e-12) return v * (1.0 / len);
    }
}

// Casts a ray of length params.ray_length from an interior origin and
// bisects the first inside->outside bracket down to delta. The endpoint
// still being inside the obstacle is the failure case; when a ray crosses
// the boundary several times, bisection settles on whichever crossing the
// halving sequence brackets.
inline RayOutcome cast_and_bisect(const PolyconvexSet& obstacle, const Point& origin,
                                  const Vec& dir, const ObprmParams& params) {
    params.validate();
    if (!obstacle.contains(origin))
        throw std::invalid_argument("cast_and_bisect: origin must lie inside the obstacle");

    RayOutcome out;
    out.direction = dir;

    const double l = params.ray_length;
    if (obstacle.contains(origin + dir * l)) {
        out.status = RayOutcome::Status::EndpointInsideObstacle;
        return out;
    }

    double t_in = 0.0;
    double t_out = l;
    int iters = 0;
    while (t_out - t_in > params.delta && iters < params.max_iterations) {
        double mid = 0.5 * (t_in + t_out);
        if (obstacle.contains(origin + dir * mid))
            t_in = mid;
        else
            t_out = mid;
        ++iters;
    }

    out.status = RayOutcome::Status::FreeNode;
    out.node = origin + dir * t_out;
    out.iterations = iters;
    out.t_inside = t_in;
    out.t_outside = t_out;

    auto hits = ray_boundary_hits(obstacle, origin, dir, l);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i] >= t_in - 1e-12 && hits[i] <= t_out + 1e-12) {
            out.crossing_index = static_cast<int>(i);
            break;
        }
    }
    return out;
}

// Full node-generation batch: one registration point, then num_rays
// independent casts. Each ray draws its direction from stream(seed, ray),
// so the batch is a pure function of (obstacle, params, seed) no matter how
// many workers execute it.
inline NodeBatch generate_nodes(const PolyconvexSet& obstacle, const ObprmParams& params,
                                std::uint64_t seed, int threads = 1) {
    params.validate();
    const Point origin = registration_point(obstacle, params);
    const int n = obstacle.dimension();
    SeededRng rng(seed);

    NodeBatch batch;
    batch.outcomes.resize(params.num_rays);

    auto run_range = [&](int begin, int end) {
        for (int ray = begin; ray < end; ++ray) {
            RngStream stream = rng.stream(stream_tag::kObprmRay, static_cast<std::uint64_t>(ray));
            Vec dir = sample_direction(stream, n);
            batch.outcomes[ray] = cast_and_bisect(obstacle, origin, dir, params);
        }
    };

    if (threads <= 1) {
        run_range(0, params.num_rays);
    } else {
        std::vector<std::thread> pool;
        int chunk = (params.num_rays + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int begin = t * chunk;
            int end = std::min(params.num_rays, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& o : batch.outcomes)
        if (o.status == RayOutcome::Status::FreeNode) ++batch.success_count;
    batch.success_rate = static_cast<double>(batch.success_count) / params.num_rays;
    return batch;
}

}  // namespace obprm
