#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "obprm/geometry.hpp"
#include "obprm/rng.hpp"

namespace obprm {

// Volume of the unit ball in R^n.
inline double omega(int n) {
    if (n < 0) throw std::invalid_argument("omega: n must be nonnegative");
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Intrinsic volume mu_i of the n-ball of radius r:
// binom(n,i) * omega_n / omega_{n-i}, scaled by r^i (degree-i homogeneity).
inline double mu_ball(int i, int n, double r) {
    if (i < 0 || i > n) throw std::invalid_argument("mu_ball: index out of range");
    if (!(r > 0.0)) throw std::invalid_argument("mu_ball: radius must be positive");
    return binomial(n, i) * omega(n) / omega(n - i) * std::pow(r, i);
}

// Segment valuations: mu_0 = 1, mu_1 = length, everything above vanishes.
inline double mu_segment(int i, double len) {
    if (i < 0) throw std::invalid_argument("mu_segment: index must be nonnegative");
    if (len < 0.0) throw std::invalid_argument("mu_segment: negative length");
    if (i == 0) return 1.0;
    if (i == 1) return len;
    return 0.0;
}

// Boundary valuations used by the success-probability formula:
// mu_{n-1}(dA) is the full (n-1)-Hausdorff measure of the boundary
// (perimeter / facet-area sum) and mu_n(dA) = 0. Lower indices are out of
// contract for boundaries.
inline double mu_boundary(const ConvexPolytope& p, int i) {
    const int n = p.dimension();
    if (n != 2 && n != 3) throw std::domain_error("mu_boundary: supported for n in {2, 3}");
    if (i == n - 1) return p.surface_measure();
    if (i == n) return 0.0;
    throw std::invalid_argument("mu_boundary: index must be n-1 or n");
}

// The tuple (mu_0, ..., mu_n) for one shape. Entries that a factory cannot
// define are NaN; consumers must not touch them (kinematic_measure skips
// terms whose partner entry is exactly zero).
struct ValuationVector {
    int dimension = 0;
    std::vector<double> mu;

    ValuationVector(int n, std::vector<double> values) : dimension(n), mu(std::move(values)) {
        if (n < 1) throw std::invalid_argument("ValuationVector: dimension must be >= 1");
        if (mu.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("ValuationVector: needs n+1 entries");
    }

    static ValuationVector ball(int n, double r) {
        std::vector<double> v(n + 1);
        for (int i = 0; i <= n; ++i) v[i] = mu_ball(i, n, r);
        return ValuationVector(n, std::move(v));
    }

    static ValuationVector segment(int n, double len) {
        std::vector<double> v(n + 1, 0.0);
        v[0] = 1.0;
        if (n >= 1) v[1] = len;
        return ValuationVector(n, std::move(v));
    }

    static ValuationVector point(int n) {
        std::vector<double> v(n + 1, 0.0);
        v[0] = 1.0;
        return ValuationVector(n, std::move(v));
    }

    static ValuationVector convex_body(const ConvexPolytope& p);
    static ValuationVector boundary_of(const ConvexPolytope& p);
};

namespace detail {

// mu_1 of a 3D polytope: (1/2pi) * sum over edges of length * exterior angle.
inline double mu1_polytope_3d(const ConvexPolytope& p) {
    double acc = 0.0;
    auto edges = polytope_edges(p);
    for (const auto& e : edges) {
        std::vector<int> adjacent;
        for (std::size_t fi = 0; fi < p.facets().size(); ++fi) {
            const auto& ring = p.facets()[fi].ring;
            bool has_a = false, has_b = false;
            for (std::size_t i = 0; i < ring.size(); ++i) {
                int a = ring[i], b = ring[(i + 1) % ring.size()];
                if ((a == e.first && b == e.second) || (a == e.second && b == e.first))
                    has_a = has_b = true;
            }
            if (has_a && has_b) adjacent.push_back(static_cast<int>(fi));
        }
        if (adjacent.size() != 2) continue;
        const Vec& n1 = p.halfspaces()[p.facets()[adjacent[0]].halfspace].normal();
        const Vec& n2 = p.halfspaces()[p.facets()[adjacent[1]].halfspace].normal();
        double c = std::clamp(n1.dot(n2), -1.0, 1.0);
        double exterior = std::acos(c);
        double len = p.vertices()[e.first].dist(p.vertices()[e.second]);
        acc += len * exterior;
    }
    return acc / (2.0 * std::numbers::pi);
}

}  // namespace detail

inline ValuationVector ValuationVector::convex_body(const ConvexPolytope& p) {
    const int n = p.dimension();
    if (n == 2) return ValuationVector(2, {1.0, 0.5 * p.surface_measure(), p.volume()});
    if (n == 3)
        return ValuationVector(
            3, {1.0, detail::mu1_polytope_3d(p), 0.5 * p.surface_measure(), p.volume()});
    throw std::domain_error("ValuationVector::convex_body: supported for n in {2, 3}");
}

inline ValuationVector ValuationVector::boundary_of(const ConvexPolytope& p) {
    const int n = p.dimension();
    if (n == 2) return ValuationVector(2, {0.0, p.surface_measure(), 0.0});
    if (n == 3) {
        // Euler characteristic of a closed convex surface is 2; mu_1 of a
        // boundary shell is out of contract and left undefined.
        return ValuationVector(
            3, {2.0, std::numeric_limits<double>::quiet_NaN(), p.surface_measure(), 0.0});
    }
    throw std::domain_error("ValuationVector::boundary_of: supported for n in {2, 3}");
}

// Conditional probability that a random k-flat meeting L also meets K ⊆ L:
// mu_{n-k}(K) / mu_{n-k}(L).
inline double sylvester_ratio(const ValuationVector& K, const ValuationVector& L, int k) {
    require_same_dim(K.dimension, L.dimension, "sylvester_ratio");
    const int n = K.dimension;
    if (k < 0 || k > n) throw std::invalid_argument("sylvester_ratio: k out of range");
    double denom = L.mu[n - k];
    if (!(denom > 0.0)) throw std::invalid_argument("sylvester_ratio: zero denominator");
    double ratio = K.mu[n - k] / denom;
    if (ratio > 1.0) {
        if (ratio > 1.0 + 1e-9)
            throw std::invalid_argument("sylvester_ratio: ratio exceeds 1; is K contained in L?");
        std::cerr << "sylvester_ratio: clamping " << ratio << " to 1\n";
        ratio = 1.0;
    }
    return std::max(ratio, 0.0);
}

// Principal kinematic formula evaluated as the bilinear form
// sum_i binom(n,i)^{-1} (omega_i omega_{n-i} / omega_n) mu_i(A) mu_{n-i}(K).
// Terms with a zero factor are skipped before multiplying, so partially
// defined vectors (NaN entries) stay safe as long as the partner vanishes.
inline double kinematic_measure(const ValuationVector& A, const ValuationVector& K) {
    require_same_dim(A.dimension, K.dimension, "kinematic_measure");
    const int n = A.dimension;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        double a = A.mu[i];
        double k = K.mu[n - i];
        if (a == 0.0 || k == 0.0) continue;
        acc += (omega(i) * omega(n - i) / omega(n)) / binomial(n, i) * a * k;
    }
    return acc;
}

enum class PredictionVariant { PaperLiteral, RadiusCorrected };

struct PredictionInput {
    int dimension = 2;
    double boundary_measure = 0.0;  // mu_{n-1} of the obstacle boundary
    double delta = 0.0;             // minimum partition step / needle length
    double d = 0.0;                 // bounding-ball diameter, diam(A) + 2 delta
    PredictionVariant variant = PredictionVariant::PaperLiteral;

    void validate() const {
        if (dimension < 1) throw std::invalid_argument("PredictionInput: dimension must be >= 1");
        if (!(delta > 0.0)) throw std::invalid_argument("PredictionInput: delta must be positive");
        if (!(d >= delta)) throw std::invalid_argument("PredictionInput: d must be >= delta");
        if (!(boundary_measure > 0.0))
            throw std::invalid_argument("PredictionInput: boundary measure must be positive");
    }
};

// Closed-form success probability for dropping a needle of length delta
// against a boundary of measure B inside a conditioning ball of diameter d.
//
// PaperLiteral evaluates (alpha/omega_n) * B*delta / ((alpha*n/(2d))*delta + 1)
// with alpha = omega_{n-1} omega_1 / (n omega_n), exactly as printed.
// RadiusCorrected rebuilds the denominator from the ball of radius d/2:
// alpha*B*delta / (alpha * mu_{n-1}(B_{d/2}) * delta + mu_n(B_{d/2})).
// The literal variant treats ball valuations inconsistently under scaling;
// both variants agree on every monotonicity claim. Values are reported raw
// and may exceed 1.
inline double predicted_success(const PredictionInput& p) {
    p.validate();
    const int n = p.dimension;
    const double alpha = omega(n - 1) * omega(1) / (n * omega(n));
    if (p.variant == PredictionVariant::PaperLiteral) {
        double denom = (alpha * n / (2.0 * p.d)) * p.delta + 1.0;
        return (alpha / omega(n)) * (p.boundary_measure * p.delta / denom);
    }
    const double r = 0.5 * p.d;
    const double mu_nm1 = n * omega(n) / omega(1) * std::pow(r, n - 1);
    const double mu_n = omega(n) * std::pow(r, n);
    return alpha * p.boundary_measure * p.delta / (alpha * mu_nm1 * p.delta + mu_n);
}

// ---------------------------------------------------------------------------
// Exact measures of 2D unions (used by the additivity check and reports).

namespace detail {

inline std::vector<Segment> ring_edges(const ConvexPolytope& p) {
    std::vector<Segment> edges;
    const auto& ring = p.ring();
    for (std::size_t i = 0; i < ring.size(); ++i)
        edges.emplace_back(p.vertices()[ring[i]], p.vertices()[ring[(i + 1) % ring.size()]]);
    return edges;
}

inline std::optional<std::pair<double, double>> segment_intersection_params(const Segment& a,
                                                                            const Segment& b) {
    Vec r = a.q - a.p, s = b.q - b.p;
    double denom = r[0] * s[1] - r[1] * s[0];
    if (std::abs(denom) < 1e-14) return std::nullopt;
    Vec d = b.p - a.p;
    double t = (d[0] * s[1] - d[1] * s[0]) / denom;
    double u = (d[0] * r[1] - d[1] * r[0]) / denom;
    if (t < -1e-12 || t > 1.0 + 1e-12 || u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
    return std::make_pair(t, u);
}

// y-interval of a convex part along the vertical line x = x0.
inline std::optional<std::pair<double, double>> vertical_slice(const ConvexPolytope& p, double x0) {
    Point origin{x0, 0.0};
    Vec up{0.0, 1.0};
    return p.clip_line(origin, up);
}

}  // namespace detail

// Area of a union of convex 2D parts by slab decomposition: between
// consecutive breakpoints every part's slice bounds are linear in x, so a
// midpoint evaluation integrates exactly.
inline double union_area_2d(const std::vector<ConvexPolytope>& parts) {
    if (parts.empty()) return 0.0;
    for (const auto& p : parts)
        if (p.dimension() != 2) throw std::domain_error("union_area_2d: 2D only");

    std::vector<double> xs;
    std::vector<std::vector<Segment>> edges(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!parts[i].is_full_dimensional()) continue;
        edges[i] = detail::ring_edges(parts[i]);
        for (const auto& v : parts[i].vertices()) xs.push_back(v[0]);
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            for (const auto& ea : edges[i])
                for (const auto& eb : edges[j])
                    if (auto hit = detail::segment_intersection_params(ea, eb))
                        xs.push_back(ea.p[0] + hit->first * (ea.q[0] - ea.p[0]));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             xs.end());

    double area = 0.0;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        double w = xs[s + 1] - xs[s];
        if (w < 1e-12) continue;
        double xm = 0.5 * (xs[s] + xs[s + 1]);
        std::vector<std::pair<double, double>> ivs;
        for (const auto& p : parts)
            if (auto iv = detail::vertical_slice(p, xm))
                if (iv->second - iv->first > 0.0) ivs.push_back(*iv);
        std::sort(ivs.begin(), ivs.end());
        double len = 0.0, hi = -std::numeric_limits<double>::infinity();
        for (const auto& iv : ivs) {
            double lo = std::max(iv.first, hi);
            if (iv.second > lo) {
                len += iv.second - lo;
                hi = iv.second;
            }
        }
        area += w * len;
    }
    return area;
}

// Boundary length of a 2D union: facet sub-intervals whose outward side is
// still inside the union are interfaces, not boundary. Coincident facets of
// two parts would be double-counted and are out of contract.
inline double union_boundary_measure_2d(const std::vector<ConvexPolytope>& parts) {
    for (const auto& p : parts)
        if (p.dimension() != 2 || !p.is_full_dimensional())
            throw std::domain_error("union_boundary_measure_2d: full-dimensional 2D parts only");

    double scale = 1.0;
    for (const auto& p : parts)
        for (const auto& v : p.vertices())
            scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
    const double step_out = 1e-6 * scale;

    double total = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (const auto& f : parts[i].facets()) {
            // Facet endpoints: the two extreme tight vertices.
            const auto& ring = f.ring;
            Point a = parts[i].vertices()[ring[0]];
            Point b = parts[i].vertices()[ring[1]];
            for (std::size_t u = 0; u < ring.size(); ++u)
                for (std::size_t v = u + 1; v < ring.size(); ++v) {
                    const Point& pu = parts[i].vertices()[ring[u]];
                    const Point& pv = parts[i].vertices()[ring[v]];
                    if (pu.dist(pv) > a.dist(b)) {
                        a = pu;
                        b = pv;
                    }
                }
            Segment edge(a, b);
            double len = edge.length();
            if (len < 1e-12) continue;

            std::vector<double> ts = {0.0, 1.0};
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (j == i) continue;
                for (const auto& other : detail::ring_edges(parts[j]))
                    if (auto hit = detail::segment_intersection_params(edge, other))
                        ts.push_back(std::clamp(hit->first, 0.0, 1.0));
            }
            std::sort(ts.begin(), ts.end());

            const Vec& outward = parts[i].halfspaces()[f.halfspace].normal();
            for (std::size_t t = 0; t + 1 < ts.size(); ++t) {
                double width = ts[t + 1] - ts[t];
                if (width < 1e-12) continue;
                double tm = 0.5 * (ts[t] + ts[t + 1]);
                Point m = a + (b - a) * tm;
                Point probe = m + outward * step_out;
                bool covered = false;
                for (std::size_t j = 0; j < parts.size() && !covered; ++j)
                    if (j != i && parts[j].contains(probe, 0.0)) covered = true;
                if (!covered) total += width * len;
            }
        }
    }
    return total;
}

// Intersection of two convex polytopes; nullopt when empty.
inline std::optional<ConvexPolytope> intersection_polytope(const ConvexPolytope& a,
                                                           const ConvexPolytope& b) {
    require_same_dim(a.dimension(), b.dimension(), "intersection_polytope");
    std::vector<HalfSpace> hs = a.halfspaces();
    for (const auto& h : b.halfspaces()) hs.push_back(h);
    return ConvexPolytope::try_build(std::move(hs));
}

// |mu(A u B) - mu(A) - mu(B) + mu(A n B)| for mu = area, with the union term
// evaluated independently by slab decomposition. mu(empty) = 0.
inline double additivity_residual_area(const ConvexPolytope& a, const ConvexPolytope& b) {
    require_same_dim(a.dimension(), b.dimension(), "additivity_residual_area");
    if (a.dimension() != 2) throw std::domain_error("additivity_residual_area: 2D only");
    double u = union_area_2d({a, b});
    auto inter = intersection_polytope(a, b);
    double i = inter ? inter->volume() : 0.0;
    return std::abs(u - a.volume() - b.volume() + i);
}

// Generic valuation residual; requires A u B convex (validated by comparing
// hull area against the exact union area).
inline double additivity_residual(const ConvexPolytope& a, const ConvexPolytope& b,
                                  const std::function<double(const ConvexPolytope&)>& mu) {
    require_same_dim(a.dimension(), b.dimension(), "additivity_residual");
    if (a.dimension() != 2) throw std::domain_error("additivity_residual: 2D only");
    std::vector<Point> pts = a.vertices();
    for (const auto& v : b.vertices()) pts.push_back(v);
    ConvexPolytope hull = polytope_from_hull_2d(convex_hull_2d(pts));
    double union_area = union_area_2d({a, b});
    if (std::abs(hull.volume() - union_area) > 1e-9 * std::max(1.0, union_area))
        throw std::invalid_argument("additivity_residual: A u B is not convex");
    auto inter = intersection_polytope(a, b);
    double mi = (inter && inter->is_full_dimensional()) ? mu(*inter) : 0.0;
    return std::abs(mu(hull) - mu(a) - mu(b) + mi);
}

// Perimeter estimator from random lines. Lines are drawn uniformly in the
// invariant measure d(theta) d(p) restricted to the minimum enclosing disc of
// S: theta uniform on [0, pi), signed offset p uniform on [-R, R]. By the
// Cauchy-Crofton relation a curve of length L meets that line set with
// integral multiplicity 2L, and the sampled measure totals 2 pi R, so the
// calibration constant is estimate = mean_crossings * pi * R. The disc and
// square unit tests pin this calibration against closed-form perimeters.
inline double crofton_estimate(const PolyconvexSet& s, std::int64_t n_lines,
                               std::uint64_t rng_seed) {
    if (s.dimension() != 2) throw std::domain_error("crofton_estimate: 2D only");
    if (n_lines < 1) throw std::invalid_argument("crofton_estimate: need n_lines >= 1");
    Ball disc = min_enclosing_ball(s.all_vertices());
    const double R = disc.radius;
    RngStream stream = SeededRng(rng_seed).stream(stream_tag::kCroftonLine);

    std::int64_t crossings = 0;
    const double reach = 2.0 * (R + 1.0);
    for (std::int64_t i = 0; i < n_lines; ++i) {
        double theta = std::numbers::pi * stream.uniform01();
        double p = R * (2.0 * stream.uniform01() - 1.0);
        Vec normal{std::cos(theta), std::sin(theta)};
        Vec along = perp2(normal);
        Point origin = disc.center + normal * p - along * (R + 1.0);
        crossings +=
            static_cast<std::int64_t>(ray_boundary_hits(s, origin, along, reach).size());
    }
    double mean = static_cast<double>(crossings) / static_cast<double>(n_lines);
    return mean * std::numbers::pi * R;
}

}  // namespace obprm
