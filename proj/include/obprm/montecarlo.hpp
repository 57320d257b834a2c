#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "obprm/geometry.hpp"
#include "obprm/rng.hpp"
#include "obprm/sampler.hpp"
#include "obprm/stats.hpp"

namespace obprm {

inline double distance_point_segment(const Point& x, const Segment& s) {
    Vec d = s.q - s.p;
    double len2 = d.norm2();
    if (len2 <= 0.0) return x.dist(s.p);
    double t = (x - s.p).dot(d) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return x.dist(s.p + d * t);
}

// Conditioning ball for segment drops: the minimum enclosing ball of the
// obstacle grown by delta. For the symmetric fixtures used throughout this
// matches diameter(A)/2 + delta exactly, i.e. the ball of diameter
// diam(A) + 2 delta; the minimum enclosing ball keeps A covered even when
// its circumradius exceeds diam/2.
inline Ball conditioning_ball(const PolyconvexSet& obstacle, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("conditioning_ball: delta must be positive");
    Ball meb = min_enclosing_ball(obstacle.all_vertices());
    return Ball(meb.center, meb.radius + delta);
}

// One uniform rigid placement of a needle of length delta, conditioned on
// hitting the ball: midpoint uniform in the ball grown by delta/2 (covering
// every hitting placement), isotropic direction, rejection until the needle
// meets the ball. This realizes the kinematic measure restricted to
// placements that intersect the conditioning ball.
inline Segment sample_conditioned_segment(RngStream& stream, const Ball& ball, double delta) {
    const int n = ball.dim();
    const double proposal_r = ball.radius + 0.5 * delta;
    while (true) {
        Vec mid(n);
        // Uniform point in the proposal ball, by rejection from its box.
        while (true) {
            for (int i = 0; i < n; ++i) mid[i] = stream.uniform(-proposal_r, proposal_r);
            if (mid.norm2() <= proposal_r * proposal_r) break;
        }
        mid = mid + ball.center;
        Vec dir = sample_direction(stream, n);
        Segment seg(mid - dir * (0.5 * delta), mid + dir * (0.5 * delta));
        if (distance_point_segment(ball.center, seg) <= ball.radius) return seg;
    }
}

// Does a randomly dropped needle hit the obstacle boundary, given that it
// hits the conditioning ball?
inline bool drop_segment_trial(const PolyconvexSet& obstacle, double delta, RngStream& stream,
                               const Ball& ball) {
    Segment seg = sample_conditioned_segment(stream, ball, delta);
    return segment_intersects_boundary(obstacle, seg);
}

inline bool drop_segment_trial(const PolyconvexSet& obstacle, double delta, RngStream& stream) {
    return drop_segment_trial(obstacle, delta, stream, conditioning_ball(obstacle, delta));
}

// Crossing count of the same experiment; its conditional mean is the
// kinematic-measure ratio, which the hit probability only approximates
// (a through-placement crosses twice but hits once).
inline int drop_segment_crossings(const PolyconvexSet& obstacle, double delta, RngStream& stream,
                                  const Ball& ball) {
    Segment seg = sample_conditioned_segment(stream, ball, delta);
    return segment_crossing_count(obstacle, seg);
}

// Aggregated hit-probability estimate with a Wilson 95% interval.
// Per-trial derived streams make the result independent of thread count.
inline TrialStats estimate_hit_probability(const PolyconvexSet& obstacle, double delta,
                                           std::int64_t trials, std::uint64_t seed, int threads = 1,
                                           const std::optional<Ball>& ball_override = std::nullopt) {
    if (trials < 1) throw std::invalid_argument("estimate_hit_probability: trials must be >= 1");
    const Ball ball = ball_override ? *ball_override : conditioning_ball(obstacle, delta);
    SeededRng rng(seed);

    std::vector<std::uint8_t> outcome(static_cast<std::size_t>(trials), 0);
    auto run_range = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            RngStream stream = rng.stream(stream_tag::kSegmentDrop, static_cast<std::uint64_t>(i));
            outcome[static_cast<std::size_t>(i)] =
                drop_segment_trial(obstacle, delta, stream, ball) ? 1 : 0;
        }
    };
    if (threads <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        std::int64_t chunk = (trials + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::int64_t begin = t * chunk;
            std::int64_t end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::int64_t successes = 0;
    for (std::uint8_t o : outcome) successes += o;
    return wilson_stats(successes, trials);
}

// Repeats generate_nodes with derived seeds and reports the mean per-ray
// success rate with a 95% t-interval over the replications.
inline TrialStats replicate_obprm(const PolyconvexSet& obstacle, const ObprmParams& params,
                                  int replications, std::uint64_t seed, int threads = 1) {
    if (replications < 1) throw std::invalid_argument("replicate_obprm: replications must be >= 1");
    params.validate();
    SeededRng rng(seed);

    std::vector<double> rates(replications, 0.0);
    std::vector<std::int64_t> counts(replications, 0);
    auto run_range = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            NodeBatch batch = generate_nodes(obstacle, params, rng.derive_seed(r));
            rates[r] = batch.success_rate;
            counts[r] = batch.success_count;
        }
    };
    if (threads <= 1) {
        run_range(0, replications);
    } else {
        std::vector<std::thread> pool;
        int chunk = (replications + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int begin = t * chunk;
            int end = std::min(replications, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::int64_t successes = 0;
    for (std::int64_t c : counts) successes += c;
    return replication_stats(rates, static_cast<std::int64_t>(replications) * params.num_rays,
                             successes);
}

}  // namespace obprm
