#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "obprm/geometry.hpp"

namespace obprm {

struct Roadmap {
    std::vector<Point> nodes;
    // Adjacency with Euclidean weights; undirected, both directions stored.
    std::vector<std::vector<std::pair<int, double>>> edges;
};

struct Query {
    Point start;
    Point goal;
};

// Straight-line local planner: the segment is free iff every sample at
// spacing <= resolution lies outside the environment.
inline bool local_planner(const PolyconvexSet& env, const Point& a, const Point& b,
                          double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("local_planner: resolution must be positive");
    double len = a.dist(b);
    int steps = std::max(1, static_cast<int>(std::ceil(len / resolution)));
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        if (env.contains(a + (b - a) * t)) return false;
    }
    return true;
}

// k-nearest roadmap over the given milestones; ties broken by node index.
inline Roadmap build_roadmap(const PolyconvexSet& env, const std::vector<Point>& samples, int k,
                             double resolution) {
    if (k < 1) throw std::invalid_argument("build_roadmap: k must be >= 1");
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (env.contains(samples[i]))
            throw std::invalid_argument("build_roadmap: sample " + std::to_string(i) +
                                        " lies inside an obstacle");

    Roadmap r;
    r.nodes = samples;
    r.edges.assign(samples.size(), {});

    auto add_edge = [&](int a, int b, double w) {
        for (const auto& e : r.edges[a])
            if (e.first == b) return;
        r.edges[a].emplace_back(b, w);
        r.edges[b].emplace_back(a, w);
    };

    const int n = static_cast<int>(samples.size());
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> order;
        order.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) order.emplace_back(samples[i].dist(samples[j]), j);
        std::sort(order.begin(), order.end());
        int take = std::min<int>(k, static_cast<int>(order.size()));
        for (int t = 0; t < take; ++t) {
            int j = order[t].second;
            if (local_planner(env, samples[i], samples[j], resolution))
                add_edge(i, j, order[t].first);
        }
    }
    return r;
}

namespace detail {

inline std::vector<int> dijkstra(const Roadmap& r, int src, int dst) {
    const int n = static_cast<int>(r.nodes.size());
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == dst) break;
        for (const auto& [v, w] : r.edges[u]) {
            double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                prev[v] = u;
                heap.emplace(nd, v);
            }
        }
    }
    if (!std::isfinite(dist[dst])) return {};
    std::vector<int> path;
    for (int v = dst; v != -1; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace detail

// Connects start and goal to their nearest connectable milestone in every
// roadmap component, then runs a shortest-path search. Unreachable goals
// yield nullopt, not an error.
inline std::optional<std::vector<Point>> query(const Roadmap& r, const PolyconvexSet& env,
                                               const Query& q, double resolution) {
    if (env.contains(q.start) || env.contains(q.goal))
        throw std::invalid_argument("query: start and goal must lie in free space");
    if (q.start.dist(q.goal) < 1e-12) return std::vector<Point>{q.start};
    if (local_planner(env, q.start, q.goal, resolution))
        return std::vector<Point>{q.start, q.goal};
    if (r.nodes.empty()) return std::nullopt;

    // Component labels via union-find over the roadmap edges.
    std::vector<int> root(r.nodes.size());
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    for (std::size_t i = 0; i < r.edges.size(); ++i)
        for (const auto& [j, w] : r.edges[i]) root[find(static_cast<int>(i))] = find(j);

    auto connectable = [&](const Point& p) {
        std::vector<std::pair<double, int>> order;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            order.emplace_back(p.dist(r.nodes[i]), static_cast<int>(i));
        std::sort(order.begin(), order.end());
        std::vector<std::pair<int, double>> found;
        std::vector<bool> attached(r.nodes.size(), false);
        for (const auto& [d, i] : order) {
            int comp = find(i);
            if (attached[comp]) continue;
            if (local_planner(env, p, r.nodes[i], resolution)) {
                found.emplace_back(i, d);
                attached[comp] = true;
            }
        }
        return found;
    };

    auto starts = connectable(q.start);
    auto goals = connectable(q.goal);
    if (starts.empty() || goals.empty()) return std::nullopt;

    // Temporary graph with start/goal appended.
    Roadmap g = r;
    int si = static_cast<int>(g.nodes.size());
    g.nodes.push_back(q.start);
    g.edges.emplace_back();
    int gi = static_cast<int>(g.nodes.size());
    g.nodes.push_back(q.goal);
    g.edges.emplace_back();
    for (const auto& [i, d] : starts) {
        g.edges[si].emplace_back(i, d);
        g.edges[i].emplace_back(si, d);
    }
    for (const auto& [i, d] : goals) {
        g.edges[gi].emplace_back(i, d);
        g.edges[i].emplace_back(gi, d);
    }

    auto path_idx = detail::dijkstra(g, si, gi);
    if (path_idx.empty()) return std::nullopt;
    std::vector<Point> path;
    path.reserve(path_idx.size());
    for (int i : path_idx) path.push_back(g.nodes[i]);
    return path;
}

}  // namespace obprm
