#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace obprm {

// Absolute tolerance for containment, tightness and orthonormality checks.
// Sets are closed: a point within kEps of a boundary counts as contained.
inline constexpr double kEps = 1e-9;

// Fixed capacity keeps points/vectors allocation-free in sampling loops.
inline constexpr int kMaxDim = 8;

class Vec {
public:
    Vec() = default;

    explicit Vec(int n) : n_(n) {
        if (n < 1 || n > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    }

    Vec(std::initializer_list<double> vals) : n_(static_cast<int>(vals.size())) {
        if (n_ < 1 || n_ > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
        int i = 0;
        for (double v : vals) c_[i++] = v;
    }

    static Vec zero(int n) { return Vec(n); }

    int dim() const { return n_; }
    double& operator[](int i) { return c_[i]; }
    double operator[](int i) const { return c_[i]; }

    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(c_[i])) return false;
        return true;
    }

    Vec operator+(const Vec& o) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] + o.c_[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] - o.c_[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] * s;
        return r;
    }
    Vec operator-() const { return *this * -1.0; }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += c_[i] * o.c_[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    double dist(const Vec& o) const { return (*this - o).norm(); }

    Vec normalized() const {
        double len = norm();
        if (len <= 0.0) throw std::invalid_argument("Vec: cannot normalize zero vector");
        return *this * (1.0 / len);
    }

private:
    std::array<double, kMaxDim> c_{};
    int n_ = 0;
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

using Point = Vec;

inline Vec cross3(const Vec& a, const Vec& b) {
    Vec r(3);
    r[0] = a[1] * b[2] - a[2] * b[1];
    r[1] = a[2] * b[0] - a[0] * b[2];
    r[2] = a[0] * b[1] - a[1] * b[0];
    return r;
}

// Counterclockwise perpendicular in the plane.
inline Vec perp2(const Vec& v) { return Vec{-v[1], v[0]}; }

inline void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// The closed set { x : normal . x <= offset }, normal stored unit-length.
class HalfSpace {
public:
    HalfSpace(Vec normal, double offset) {
        double len = normal.norm();
        if (!(len > 0.0) || !normal.finite() || !std::isfinite(offset))
            throw std::invalid_argument("HalfSpace: invalid normal or offset");
        normal_ = normal * (1.0 / len);
        offset_ = offset / len;
    }

    const Vec& normal() const { return normal_; }
    double offset() const { return offset_; }
    int dim() const { return normal_.dim(); }

    double signed_slack(const Point& x) const { return normal_.dot(x) - offset_; }
    bool contains(const Point& x, double eps = kEps) const { return signed_slack(x) <= eps; }

private:
    Vec normal_;
    double offset_ = 0.0;
};

struct Segment {
    Point p;
    Point q;

    Segment(Point a, Point b) : p(std::move(a)), q(std::move(b)) {
        require_same_dim(p.dim(), q.dim(), "Segment");
        if (!p.finite() || !q.finite()) throw std::invalid_argument("Segment: non-finite endpoint");
    }

    int dim() const { return p.dim(); }
    double length() const { return p.dist(q); }
    Point midpoint() const { return (p + q) * 0.5; }

    // Unit direction; degenerate segments have none.
    Vec direction() const { return (q - p).normalized(); }
};

struct Ball {
    Point center;
    double radius;

    Ball(Point c, double r) : center(std::move(c)), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
    }

    int dim() const { return center.dim(); }
    bool contains(const Point& x, double eps = kEps) const {
        return center.dist(x) <= radius + eps;
    }
};

class RigidMotion {
public:
    // Rotation given row-major; must be orthonormal with determinant +1.
    RigidMotion(int n, const std::vector<double>& rotation_row_major, Vec translation)
        : n_(n), translation_(std::move(translation)) {
        if (n < 1 || n > kMaxDim) throw std::invalid_argument("RigidMotion: dimension out of range");
        require_same_dim(n, translation_.dim(), "RigidMotion");
        if (static_cast<int>(rotation_row_major.size()) != n * n)
            throw std::invalid_argument("RigidMotion: rotation size mismatch");
        rot_ = rotation_row_major;
        validate();
    }

    static RigidMotion identity(int n) {
        std::vector<double> rot(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) rot[static_cast<std::size_t>(i) * n + i] = 1.0;
        return RigidMotion(n, rot, Vec::zero(n));
    }

    static RigidMotion rotation_2d(double angle, Vec translation = Vec::zero(2)) {
        double c = std::cos(angle), s = std::sin(angle);
        return RigidMotion(2, {c, -s, s, c}, std::move(translation));
    }

    static RigidMotion rotation_3d(const Vec& axis, double angle, Vec translation = Vec::zero(3)) {
        Vec u = axis.normalized();
        double c = std::cos(angle), s = std::sin(angle), ic = 1.0 - c;
        std::vector<double> r = {
            c + u[0] * u[0] * ic,        u[0] * u[1] * ic - u[2] * s, u[0] * u[2] * ic + u[1] * s,
            u[1] * u[0] * ic + u[2] * s, c + u[1] * u[1] * ic,        u[1] * u[2] * ic - u[0] * s,
            u[2] * u[0] * ic - u[1] * s, u[2] * u[1] * ic + u[0] * s, c + u[2] * u[2] * ic};
        return RigidMotion(3, r, std::move(translation));
    }

    static RigidMotion translation_only(Vec t) {
        RigidMotion m = identity(t.dim());
        m.translation_ = std::move(t);
        return m;
    }

    int dim() const { return n_; }
    const Vec& translation() const { return translation_; }

    Vec rotate(const Vec& x) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += rot_[static_cast<std::size_t>(i) * n_ + j] * x[j];
            r[i] = s;
        }
        return r;
    }

    Point apply(const Point& x) const { return rotate(x) + translation_; }

private:
    void validate() const {
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                double s = 0.0;
                for (int k = 0; k < n_; ++k)
                    s += rot_[static_cast<std::size_t>(k) * n_ + i] *
                         rot_[static_cast<std::size_t>(k) * n_ + j];
                double expect = (i == j) ? 1.0 : 0.0;
                if (std::abs(s - expect) > kEps)
                    throw std::invalid_argument("RigidMotion: rotation not orthonormal");
            }
        }
        if (std::abs(determinant() - 1.0) > kEps)
            throw std::invalid_argument("RigidMotion: determinant must be +1");
    }

    double determinant() const {
        std::vector<double> m = rot_;
        double det = 1.0;
        for (int col = 0; col < n_; ++col) {
            int pivot = col;
            for (int r = col + 1; r < n_; ++r)
                if (std::abs(m[static_cast<std::size_t>(r) * n_ + col]) >
                    std::abs(m[static_cast<std::size_t>(pivot) * n_ + col]))
                    pivot = r;
            if (pivot != col) {
                for (int j = 0; j < n_; ++j)
                    std::swap(m[static_cast<std::size_t>(pivot) * n_ + j],
                              m[static_cast<std::size_t>(col) * n_ + j]);
                det = -det;
            }
            double p = m[static_cast<std::size_t>(col) * n_ + col];
            if (std::abs(p) < 1e-14) return 0.0;
            det *= p;
            for (int r = col + 1; r < n_; ++r) {
                double f = m[static_cast<std::size_t>(r) * n_ + col] / p;
                for (int j = col; j < n_; ++j)
                    m[static_cast<std::size_t>(r) * n_ + j] -=
                        f * m[static_cast<std::size_t>(col) * n_ + j];
            }
        }
        return det;
    }

    int n_;
    std::vector<double> rot_;
    Vec translation_;
};

// Bounded intersection of half-spaces with cached vertex/facet structure.
// Exact vertex enumeration is provided for n in {2, 3}; degenerate
// (lower-dimensional) polytopes are representable but report zero volume.
class ConvexPolytope {
public:
    struct Facet {
        int halfspace = -1;
        std::vector<int> ring;  // vertex indices, counterclockwise seen from outside
        double area = 0.0;      // edge length in 2D, polygon area in 3D
    };

    explicit ConvexPolytope(std::vector<HalfSpace> halfspaces) {
        auto built = build(std::move(halfspaces));
        if (!built) throw std::invalid_argument("ConvexPolytope: empty intersection");
        *this = std::move(*built);
    }

    // Returns nullopt for an empty intersection instead of throwing.
    static std::optional<ConvexPolytope> try_build(std::vector<HalfSpace> halfspaces) {
        return build(std::move(halfspaces));
    }

    int dimension() const { return dim_; }
    bool is_full_dimensional() const { return full_dim_; }
    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }

    bool contains(const Point& x, double eps = kEps) const {
        require_same_dim(dim_, x.dim(), "contains");
        for (const auto& h : halfspaces_)
            if (!h.contains(x, eps)) return false;
        return true;
    }

    bool strictly_contains(const Point& x, double eps = kEps) const {
        require_same_dim(dim_, x.dim(), "strictly_contains");
        for (const auto& h : halfspaces_)
            if (h.signed_slack(x) >= -eps) return false;
        return true;
    }

    double support(const Vec& dir) const {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : vertices_) best = std::max(best, v.dot(dir));
        return best;
    }

    // Vertex ring of a 2D polytope, counterclockwise.
    const std::vector<int>& ring() const {
        if (dim_ != 2 || !full_dim_)
            throw std::domain_error("ring: requires a full-dimensional 2D polytope");
        return ring_;
    }

    double volume() const {
        if (!full_dim_) return 0.0;
        if (dim_ == 2) {
            double a = 0.0;
            for (std::size_t i = 0; i < ring_.size(); ++i) {
                const Point& p = vertices_[ring_[i]];
                const Point& q = vertices_[ring_[(i + 1) % ring_.size()]];
                a += p[0] * q[1] - q[0] * p[1];
            }
            return 0.5 * std::abs(a);
        }
        if (dim_ == 3) {
            // Divergence theorem: V = (1/3) sum over facets of offset * area,
            // offsets taken against unit outward normals.
            double v = 0.0;
            for (const auto& f : facets_) v += halfspaces_[f.halfspace].offset() * f.area;
            return v / 3.0;
        }
        throw std::domain_error("volume: supported for n in {2, 3}");
    }

    double surface_measure() const {
        if (dim_ != 2 && dim_ != 3) throw std::domain_error("surface_measure: supported for n in {2, 3}");
        if (!full_dim_) throw std::domain_error("surface_measure: degenerate polytope");
        double s = 0.0;
        for (const auto& f : facets_) s += f.area;
        return s;
    }

    Point centroid() const {
        if (!full_dim_) throw std::domain_error("centroid: degenerate (zero volume) polytope");
        if (dim_ == 2) {
            double a2 = 0.0;
            double cx = 0.0, cy = 0.0;
            for (std::size_t i = 0; i < ring_.size(); ++i) {
                const Point& p = vertices_[ring_[i]];
                const Point& q = vertices_[ring_[(i + 1) % ring_.size()]];
                double w = p[0] * q[1] - q[0] * p[1];
                a2 += w;
                cx += (p[0] + q[0]) * w;
                cy += (p[1] + q[1]) * w;
            }
            return Vec{cx / (3.0 * a2), cy / (3.0 * a2)};
        }
        if (dim_ == 3) {
            // Signed tetrahedra against the origin, fanned per facet.
            double vol = 0.0;
            Vec c = Vec::zero(3);
            for (const auto& f : facets_) {
                const Point& a = vertices_[f.ring[0]];
                for (std::size_t i = 1; i + 1 < f.ring.size(); ++i) {
                    const Point& b = vertices_[f.ring[i]];
                    const Point& d = vertices_[f.ring[i + 1]];
                    double v6 = a.dot(cross3(b, d));
                    vol += v6;
                    c = c + (a + b + d) * (v6 / 4.0);
                }
            }
            return c * (1.0 / vol);
        }
        throw std::domain_error("centroid: supported for n in {2, 3}");
    }

    double diameter() const {
        double best = 0.0;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                best = std::max(best, vertices_[i].dist(vertices_[j]));
        return best;
    }

    // Parameter interval of { origin + t dir : t } inside the polytope, or
    // nullopt if the line misses. A line running parallel within kEps of a
    // facet plane is a grazing contact: its overlap with the polytope lies in
    // that facet, so the whole part reports a miss (no membership flip).
    std::optional<std::pair<double, double>> clip_line(const Point& origin, const Vec& dir) const {
        require_same_dim(dim_, origin.dim(), "clip_line");
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& h : halfspaces_) {
            double denom = h.normal().dot(dir);
            double slack = h.signed_slack(origin);
            if (std::abs(denom) <= kEps) {
                if (slack > -kEps) return std::nullopt;
                continue;
            }
            double t = -slack / denom;
            if (denom > 0.0)
                hi = std::min(hi, t);
            else
                lo = std::max(lo, t);
        }
        if (lo > hi) return std::nullopt;
        return std::make_pair(lo, hi);
    }

    ConvexPolytope transformed(const RigidMotion& g) const {
        require_same_dim(dim_, g.dim(), "transformed");
        ConvexPolytope r = *this;
        for (auto& h : r.halfspaces_) {
            Vec n = g.rotate(h.normal());
            h = HalfSpace(n, h.offset() + n.dot(g.translation()));
        }
        for (auto& v : r.vertices_) v = g.apply(v);
        return r;
    }

    ConvexPolytope scaled(double factor) const {
        if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
        ConvexPolytope r = *this;
        for (auto& h : r.halfspaces_) h = HalfSpace(h.normal(), h.offset() * factor);
        for (auto& v : r.vertices_) v = v * factor;
        for (auto& f : r.facets_) f.area *= std::pow(factor, dim_ - 1);
        return r;
    }

private:
    ConvexPolytope() = default;

    static std::optional<ConvexPolytope> build(std::vector<HalfSpace> halfspaces);

    int dim_ = 0;
    bool full_dim_ = false;
    std::vector<HalfSpace> halfspaces_;
    std::vector<Point> vertices_;
    std::vector<Facet> facets_;
    std::vector<int> ring_;  // 2D only
};

namespace detail {

inline bool solve2(const Vec& n0, double o0, const Vec& n1, double o1, Point& out) {
    double det = n0[0] * n1[1] - n0[1] * n1[0];
    if (std::abs(det) < 1e-12) return false;
    out = Vec{(o0 * n1[1] - o1 * n0[1]) / det, (n0[0] * o1 - n1[0] * o0) / det};
    return true;
}

inline bool solve3(const Vec& n0, double o0, const Vec& n1, double o1, const Vec& n2, double o2,
                   Point& out) {
    double det = n0.dot(cross3(n1, n2));
    if (std::abs(det) < 1e-12) return false;
    Vec r = cross3(n1, n2) * o0 + cross3(n2, n0) * o1 + cross3(n0, n1) * o2;
    out = r * (1.0 / det);
    return true;
}

inline bool spans_fully(const std::vector<Point>& vertices, int dim) {
    if (vertices.size() < static_cast<std::size_t>(dim) + 1) return false;
    const Point& base = vertices[0];
    if (dim == 2) {
        for (std::size_t i = 1; i < vertices.size(); ++i)
            for (std::size_t j = i + 1; j < vertices.size(); ++j) {
                Vec a = vertices[i] - base, b = vertices[j] - base;
                if (std::abs(a[0] * b[1] - a[1] * b[0]) > 1e-9) return true;
            }
        return false;
    }
    for (std::size_t i = 1; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            for (std::size_t k = j + 1; k < vertices.size(); ++k) {
                Vec a = vertices[i] - base, b = vertices[j] - base, c = vertices[k] - base;
                if (std::abs(a.dot(cross3(b, c))) > 1e-9) return true;
            }
    return false;
}

// True when some direction d satisfies n.d <= tol for every stored normal,
// i.e. the intersection has a recession direction and cannot be bounded.
inline bool has_recession_direction(const std::vector<HalfSpace>& hs, int dim) {
    auto escapes = [&](const Vec& d) {
        for (const auto& h : hs)
            if (h.normal().dot(d) > 1e-9) return false;
        return true;
    };
    if (hs.empty()) return true;
    if (dim == 2) {
        for (const auto& h : hs) {
            Vec d = perp2(h.normal());
            if (escapes(d) || escapes(-d)) return true;
            if (escapes(-h.normal())) return true;
        }
        return false;
    }
    // 3D: extreme rays of the recession cone lie on pairs of active
    // constraints; single-constraint candidates cover rank-deficient sets.
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (escapes(-hs[i].normal())) return true;
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
            Vec c = cross3(hs[i].normal(), hs[j].normal());
            double len = c.norm();
            if (len < 1e-12) continue;
            Vec d = c * (1.0 / len);
            if (escapes(d) || escapes(-d)) return true;
        }
    }
    return false;
}

}  // namespace detail

inline std::optional<ConvexPolytope> ConvexPolytope::build(std::vector<HalfSpace> halfspaces) {
    if (halfspaces.empty()) throw std::invalid_argument("ConvexPolytope: no half-spaces");
    const int dim = halfspaces[0].dim();
    for (const auto& h : halfspaces) require_same_dim(dim, h.dim(), "ConvexPolytope");
    if (dim != 2 && dim != 3)
        throw std::domain_error("ConvexPolytope: exact construction supported for n in {2, 3}");

    // Identical directions: keep the tightest offset.
    std::vector<HalfSpace> hs;
    for (const auto& h : halfspaces) {
        bool merged = false;
        for (auto& kept : hs) {
            if ((kept.normal() - h.normal()).norm() < 1e-9) {
                if (h.offset() < kept.offset()) kept = h;
                merged = true;
                break;
            }
        }
        if (!merged) hs.push_back(h);
    }

    if (detail::has_recession_direction(hs, dim))
        throw std::invalid_argument("ConvexPolytope: unbounded intersection");

    // Candidate vertices from constraint intersections, filtered by feasibility.
    std::vector<Point> verts;
    auto accept = [&](const Point& cand) {
        for (const auto& h : hs)
            if (h.signed_slack(cand) > kEps) return;
        for (const auto& v : verts)
            if (v.dist(cand) < 1e-9) return;
        verts.push_back(cand);
    };
    if (dim == 2) {
        Point x{0.0, 0.0};
        for (std::size_t i = 0; i < hs.size(); ++i)
            for (std::size_t j = i + 1; j < hs.size(); ++j)
                if (detail::solve2(hs[i].normal(), hs[i].offset(), hs[j].normal(), hs[j].offset(), x))
                    accept(x);
    } else {
        Point x{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < hs.size(); ++i)
            for (std::size_t j = i + 1; j < hs.size(); ++j)
                for (std::size_t k = j + 1; k < hs.size(); ++k)
                    if (detail::solve3(hs[i].normal(), hs[i].offset(), hs[j].normal(), hs[j].offset(),
                                       hs[k].normal(), hs[k].offset(), x))
                        accept(x);
    }
    if (verts.empty()) return std::nullopt;

    ConvexPolytope poly;
    poly.dim_ = dim;
    poly.vertices_ = std::move(verts);
    poly.full_dim_ = detail::spans_fully(poly.vertices_, dim);

    double scale = 1.0;
    for (const auto& v : poly.vertices_)
        for (int i = 0; i < dim; ++i) scale = std::max(scale, std::abs(v[i]));
    const double tight_tol = 1e-9 * scale;

    if (!poly.full_dim_) {
        poly.halfspaces_ = std::move(hs);
        return poly;
    }

    // Irredundancy: a half-space stays only if its tight vertex set spans a
    // facet ((n-1)-dimensional); support lines through a single vertex go.
    for (const auto& h : hs) {
        std::vector<int> tight;
        for (std::size_t vi = 0; vi < poly.vertices_.size(); ++vi)
            if (std::abs(h.signed_slack(poly.vertices_[vi])) <= tight_tol)
                tight.push_back(static_cast<int>(vi));
        bool is_facet = false;
        if (dim == 2) {
            is_facet = tight.size() >= 2;
        } else if (tight.size() >= 3) {
            const Point& a = poly.vertices_[tight[0]];
            for (std::size_t i = 1; i + 1 < tight.size() && !is_facet; ++i)
                for (std::size_t j = i + 1; j < tight.size() && !is_facet; ++j) {
                    Vec u = poly.vertices_[tight[i]] - a;
                    Vec w = poly.vertices_[tight[j]] - a;
                    if (cross3(u, w).norm() > 1e-9) is_facet = true;
                }
        }
        if (!is_facet) continue;

        Facet f;
        f.halfspace = static_cast<int>(poly.halfspaces_.size());
        f.ring = std::move(tight);
        poly.halfspaces_.push_back(h);
        poly.facets_.push_back(std::move(f));
    }

    // Order facet rings and measure them.
    if (dim == 2) {
        Vec mean = Vec::zero(2);
        for (const auto& v : poly.vertices_) mean = mean + v;
        mean = mean * (1.0 / static_cast<double>(poly.vertices_.size()));
        std::vector<int> order(poly.vertices_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const Point& pa = poly.vertices_[a];
            const Point& pb = poly.vertices_[b];
            return std::atan2(pa[1] - mean[1], pa[0] - mean[0]) <
                   std::atan2(pb[1] - mean[1], pb[0] - mean[0]);
        });
        poly.ring_ = std::move(order);
        for (auto& f : poly.facets_) {
            // Edge length; tolerant of collinear extra tight vertices.
            double len = 0.0;
            for (std::size_t i = 0; i < f.ring.size(); ++i)
                for (std::size_t j = i + 1; j < f.ring.size(); ++j)
                    len = std::max(len, poly.vertices_[f.ring[i]].dist(poly.vertices_[f.ring[j]]));
            f.area = len;
        }
    } else {
        for (auto& f : poly.facets_) {
            const Vec& n = poly.halfspaces_[f.halfspace].normal();
            Vec mean = Vec::zero(3);
            for (int vi : f.ring) mean = mean + poly.vertices_[vi];
            mean = mean * (1.0 / static_cast<double>(f.ring.size()));
            // In-plane basis for angular ordering around the facet mean.
            Vec u = poly.vertices_[f.ring[0]] - mean;
            u = u - n * u.dot(n);
            u = u.normalized();
            Vec w = cross3(n, u);
            std::sort(f.ring.begin(), f.ring.end(), [&](int a, int b) {
                Vec da = poly.vertices_[a] - mean;
                Vec db = poly.vertices_[b] - mean;
                return std::atan2(da.dot(w), da.dot(u)) < std::atan2(db.dot(w), db.dot(u));
            });
            double a2 = 0.0;
            for (std::size_t i = 0; i < f.ring.size(); ++i) {
                Vec da = poly.vertices_[f.ring[i]] - mean;
                Vec db = poly.vertices_[f.ring[(i + 1) % f.ring.size()]] - mean;
                a2 += cross3(da, db).dot(n);
            }
            if (a2 < 0.0) std::reverse(f.ring.begin(), f.ring.end());
            f.area = 0.5 * std::abs(a2);
        }
    }
    return poly;
}

// Edges as vertex-index pairs (2D: ring edges; 3D: facet ring edges, deduped).
inline std::vector<std::pair<int, int>> polytope_edges(const ConvexPolytope& p) {
    std::vector<std::pair<int, int>> edges;
    auto add = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        for (const auto& e : edges)
            if (e.first == a && e.second == b) return;
        edges.emplace_back(a, b);
    };
    if (p.dimension() == 2 && p.is_full_dimensional()) {
        const auto& ring = p.ring();
        for (std::size_t i = 0; i < ring.size(); ++i)
            add(ring[i], ring[(i + 1) % ring.size()]);
    } else {
        for (const auto& f : p.facets())
            for (std::size_t i = 0; i < f.ring.size(); ++i)
                add(f.ring[i], f.ring[(i + 1) % f.ring.size()]);
    }
    return edges;
}

// Finite union of convex polytopes; parts may overlap.
class PolyconvexSet {
public:
    explicit PolyconvexSet(std::vector<ConvexPolytope> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw std::invalid_argument("PolyconvexSet: no parts");
        for (const auto& p : parts_)
            require_same_dim(parts_[0].dimension(), p.dimension(), "PolyconvexSet");
    }

    int dimension() const { return parts_[0].dimension(); }
    const std::vector<ConvexPolytope>& parts() const { return parts_; }

    bool contains(const Point& x, double eps = kEps) const {
        require_same_dim(dimension(), x.dim(), "contains_polyconvex");
        for (const auto& p : parts_)
            if (p.contains(x, eps)) return true;
        return false;
    }

    double diameter() const {
        std::vector<Point> all = all_vertices();
        double best = 0.0;
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                best = std::max(best, all[i].dist(all[j]));
        return best;
    }

    std::vector<Point> all_vertices() const {
        std::vector<Point> all;
        for (const auto& p : parts_)
            for (const auto& v : p.vertices()) all.push_back(v);
        return all;
    }

    PolyconvexSet transformed(const RigidMotion& g) const {
        std::vector<ConvexPolytope> parts;
        parts.reserve(parts_.size());
        for (const auto& p : parts_) parts.push_back(p.transformed(g));
        return PolyconvexSet(std::move(parts));
    }

private:
    std::vector<ConvexPolytope> parts_;
};

inline bool contains(const ConvexPolytope& p, const Point& x) { return p.contains(x); }
inline bool contains_polyconvex(const PolyconvexSet& s, const Point& x) { return s.contains(x); }

// Sorted parameters in (0, max_len] where membership in S flips along
// origin + t dir. Computed from per-part entry/exit intervals merged with a
// 1e-9 gap, so interfaces between abutting parts produce no flip.
inline std::vector<double> ray_boundary_hits(const PolyconvexSet& s, const Point& origin,
                                             const Vec& dir, double max_len) {
    require_same_dim(s.dimension(), origin.dim(), "ray_boundary_hits");
    require_same_dim(s.dimension(), dir.dim(), "ray_boundary_hits");
    if (std::abs(dir.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("ray_boundary_hits: direction must be unit length");
    if (!(max_len > 0.0)) throw std::invalid_argument("ray_boundary_hits: max_len must be positive");

    std::vector<std::pair<double, double>> intervals;
    for (const auto& part : s.parts()) {
        auto clip = part.clip_line(origin, dir);
        if (!clip) continue;
        // Zero-length touches are grazing contacts: no membership flip.
        if (clip->second - clip->first <= 1e-9) continue;
        if (clip->second <= 0.0) continue;
        intervals.push_back(*clip);
    }
    std::sort(intervals.begin(), intervals.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.first <= merged.back().second + 1e-9)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }

    std::vector<double> hits;
    for (const auto& iv : merged) {
        if (iv.first >= 1e-9 && iv.first <= max_len) hits.push_back(iv.first);
        if (iv.second >= 1e-9 && iv.second <= max_len) hits.push_back(iv.second);
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

// True when the segment's endpoint lies on the boundary of S within kEps.
// A point on the interface between two abutting parts reads as boundary.
inline bool point_on_boundary(const PolyconvexSet& s, const Point& x) {
    if (!s.contains(x)) return false;
    for (const auto& p : s.parts())
        if (p.strictly_contains(x)) return false;
    return true;
}

inline int segment_crossing_count(const PolyconvexSet& s, const Segment& seg) {
    double len = seg.length();
    if (len <= 0.0) return 0;
    Vec dir = (seg.q - seg.p) * (1.0 / len);
    return static_cast<int>(ray_boundary_hits(s, seg.p, dir, len).size());
}

inline bool segment_intersects_boundary(const PolyconvexSet& s, const Segment& seg) {
    require_same_dim(s.dimension(), seg.dim(), "segment_intersects_boundary");
    if (point_on_boundary(s, seg.p) || point_on_boundary(s, seg.q)) return true;
    return segment_crossing_count(s, seg) > 0;
}

inline Point centroid(const ConvexPolytope& p) { return p.centroid(); }
inline double diameter(const PolyconvexSet& s) { return s.diameter(); }
inline double volume(const ConvexPolytope& p) { return p.volume(); }
inline double surface_measure(const ConvexPolytope& p) { return p.surface_measure(); }

inline Segment apply_motion(const RigidMotion& g, const Segment& s) {
    require_same_dim(g.dim(), s.dim(), "apply_motion");
    return Segment(g.apply(s.p), g.apply(s.q));
}

inline Point apply_motion(const RigidMotion& g, const Point& x) { return g.apply(x); }

inline ConvexPolytope apply_motion(const RigidMotion& g, const ConvexPolytope& p) {
    return p.transformed(g);
}

inline PolyconvexSet apply_motion(const RigidMotion& g, const PolyconvexSet& s) {
    return s.transformed(g);
}

// Counterclockwise hull of a 2D point cloud (monotone chain).
inline std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
    if (pts.empty()) return pts;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point& a, const Point& b) { return a.dist(b) < 1e-12; }),
              pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-12) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Full-dimensional polytope from a 2D hull ring.
inline ConvexPolytope polytope_from_hull_2d(const std::vector<Point>& hull) {
    if (hull.size() < 3) throw std::invalid_argument("polytope_from_hull_2d: need 3+ hull points");
    std::vector<HalfSpace> hs;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point& a = hull[i];
        const Point& b = hull[(i + 1) % hull.size()];
        Vec n = -perp2(b - a);  // outward for a counterclockwise ring
        hs.emplace_back(n, n.dot(a));
    }
    return ConvexPolytope(std::move(hs));
}

namespace detail {

inline std::optional<Ball> circumball(const std::vector<Point>& support, int dim) {
    const std::size_t m = support.size();
    if (m == 1) return Ball(support[0], 1e-300);
    if (m == 2) {
        Point c = (support[0] + support[1]) * 0.5;
        return Ball(c, c.dist(support[0]));
    }
    if (dim == 2 && m == 3) {
        // Circumcircle via the perpendicular-bisector linear system.
        Vec d1 = support[1] - support[0], d2 = support[2] - support[0];
        double b1 = 0.5 * (support[1].norm2() - support[0].norm2());
        double b2 = 0.5 * (support[2].norm2() - support[0].norm2());
        double det = d1[0] * d2[1] - d1[1] * d2[0];
        if (std::abs(det) < 1e-12) return std::nullopt;
        Point c{(b1 * d2[1] - b2 * d1[1]) / det, (d1[0] * b2 - d2[0] * b1) / det};
        return Ball(c, c.dist(support[0]));
    }
    if (dim == 3 && m == 3) {
        // Circumcircle of a triangle inside its own plane.
        Vec u = support[1] - support[0], w = support[2] - support[0];
        Vec n = cross3(u, w);
        if (n.norm() < 1e-12) return std::nullopt;
        double uu = u.dot(u), ww = w.dot(w), uw = u.dot(w);
        double det = uu * ww - uw * uw;
        if (std::abs(det) < 1e-14) return std::nullopt;
        double alpha = 0.5 * ww * (uu - uw) / det;
        double beta = 0.5 * uu * (ww - uw) / det;
        Point c = support[0] + u * alpha + w * beta;
        return Ball(c, c.dist(support[0]));
    }
    if (dim == 3 && m == 4) {
        Vec rows[3];
        double rhs[3];
        for (int i = 0; i < 3; ++i) {
            rows[i] = support[i + 1] - support[0];
            rhs[i] = 0.5 * (support[i + 1].norm2() - support[0].norm2());
        }
        double det = rows[0].dot(cross3(rows[1], rows[2]));
        if (std::abs(det) < 1e-12) return std::nullopt;
        Vec c = (cross3(rows[1], rows[2]) * rhs[0] + cross3(rows[2], rows[0]) * rhs[1] +
                 cross3(rows[0], rows[1]) * rhs[2]) *
                (1.0 / det);
        return Ball(c, c.dist(support[0]));
    }
    return std::nullopt;
}

}  // namespace detail

// Exact minimum enclosing ball by support-set enumeration; intended for the
// small vertex sets this library works with.
inline Ball min_enclosing_ball(const std::vector<Point>& pts) {
    if (pts.empty()) throw std::invalid_argument("min_enclosing_ball: no points");
    const int dim = pts[0].dim();
    double best_r = std::numeric_limits<double>::infinity();
    std::optional<Ball> best;
    auto consider = [&](const std::vector<Point>& support) {
        auto b = detail::circumball(support, dim);
        if (!b || b->radius >= best_r) return;
        for (const auto& p : pts)
            if (b->center.dist(p) > b->radius + 1e-9) return;
        best_r = b->radius;
        best = *b;
    };
    const std::size_t n = pts.size();
    if (n == 1) return Ball(pts[0], 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) consider({pts[i], pts[j]});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) consider({pts[i], pts[j], pts[k]});
    if (dim == 3)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    for (std::size_t l = k + 1; l < n; ++l)
                        consider({pts[i], pts[j], pts[k], pts[l]});
    if (!best) throw std::runtime_error("min_enclosing_ball: no covering ball found");
    return *best;
}

// Axis-aligned box as a polytope, any supported dimension.
inline ConvexPolytope make_box(const Vec& lo, const Vec& hi) {
    require_same_dim(lo.dim(), hi.dim(), "make_box");
    std::vector<HalfSpace> hs;
    for (int i = 0; i < lo.dim(); ++i) {
        Vec n = Vec::zero(lo.dim());
        n[i] = 1.0;
        hs.emplace_back(n, hi[i]);
        hs.emplace_back(-n, -lo[i]);
    }
    return ConvexPolytope(std::move(hs));
}

// Regular k-gon around a center; flat-free approximation of a disc for large k.
inline ConvexPolytope make_regular_polygon(int sides, double circumradius, const Point& center) {
    if (sides < 3) throw std::invalid_argument("make_regular_polygon: need 3+ sides");
    const double apothem = circumradius * std::cos(std::numbers::pi / sides);
    std::vector<HalfSpace> hs;
    for (int i = 0; i < sides; ++i) {
        double a = 2.0 * std::numbers::pi * (i + 0.5) / sides;
        Vec n{std::cos(a), std::sin(a)};
        hs.emplace_back(n, apothem + n.dot(center));
    }
    return ConvexPolytope(std::move(hs));
}

}  // namespace obprm
