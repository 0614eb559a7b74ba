#include "sheaftree/tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace sheaftree {

std::string to_string(TreeError::Kind kind) {
    switch (kind) {
        case TreeError::Kind::Disconnected: return "Disconnected";
        case TreeError::Kind::HasCycle: return "HasCycle";
        case TreeError::Kind::DanglingEndpoint: return "DanglingEndpoint";
        case TreeError::Kind::DuplicateEdge: return "DuplicateEdge";
        case TreeError::Kind::NotIncident: return "NotIncident";
        case TreeError::Kind::UnknownVertex: return "UnknownVertex";
        case TreeError::Kind::EmptySet: return "EmptySet";
    }
    return "?";
}

Tree::Tree(std::size_t vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].id != i) {
            throw TreeError(TreeError::Kind::DuplicateEdge, {edges[i].id},
                            "edge ids must be exactly 0.." + std::to_string(edges.size() - 1) +
                                "; found id " + std::to_string(edges[i].id));
        }
    }
    edges_ = std::move(edges);
}

const Edge& Tree::edge(EdgeId e) const {
    if (e >= edges_.size()) throw std::out_of_range("unknown edge " + std::to_string(e));
    return edges_[e];
}

bool Tree::incident(VertexId v, EdgeId e) const {
    return e < edges_.size() && (edges_[e].x == v || edges_[e].y == v);
}

VertexId Tree::other_end(EdgeId e, VertexId v) const {
    const Edge& ed = edge(e);
    if (ed.x == v) return ed.y;
    if (ed.y == v) return ed.x;
    throw TreeError(TreeError::Kind::NotIncident, {v, e},
                    "vertex " + std::to_string(v) + " is not an endpoint of edge " + std::to_string(e));
}

bool operator==(const Tree& a, const Tree& b) {
    if (a.vertex_count_ != b.vertex_count_ || a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        if (a.edges_[i].x != b.edges_[i].x || a.edges_[i].y != b.edges_[i].y) return false;
    }
    return true;
}

void validate_tree(const Tree& t) {
    const std::size_t n = t.vertex_count();
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const Edge& e : t.edges()) {
        if (e.x >= n || e.y >= n) {
            throw TreeError(TreeError::Kind::DanglingEndpoint, {e.id},
                            "edge " + std::to_string(e.id) + " has an endpoint outside 0.." +
                                std::to_string(n == 0 ? 0 : n - 1));
        }
        if (e.x == e.y) {
            throw TreeError(TreeError::Kind::HasCycle, {e.id},
                            "edge " + std::to_string(e.id) + " is a loop at vertex " + std::to_string(e.x));
        }
        auto key = std::minmax(e.x, e.y);
        if (!seen.insert(key).second) {
            throw TreeError(TreeError::Kind::DuplicateEdge, {e.id},
                            "edge " + std::to_string(e.id) + " duplicates an earlier edge between " +
                                std::to_string(e.x) + " and " + std::to_string(e.y));
        }
    }
    if (n == 0) throw TreeError(TreeError::Kind::Disconnected, {}, "tree has no vertices");

    // union-find: a merge within one component is a cycle
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Edge& e : t.edges()) {
        auto a = find(e.x);
        auto b = find(e.y);
        if (a == b) {
            throw TreeError(TreeError::Kind::HasCycle, {e.id},
                            "edge " + std::to_string(e.id) + " closes a cycle");
        }
        parent[a] = b;
    }
    std::vector<std::size_t> stray;
    for (VertexId v = 0; v < n; ++v) {
        if (find(v) != find(0)) stray.push_back(v);
    }
    if (!stray.empty()) {
        throw TreeError(TreeError::Kind::Disconnected, stray,
                        "vertex " + std::to_string(stray.front()) + " is not connected to vertex 0");
    }
}

int or_sign(const Tree& t, VertexId v, EdgeId e) {
    if (t.has_edge(e)) {
        if (t.edge(e).x == v) return 1;
        if (t.edge(e).y == v) return -1;
    }
    throw TreeError(TreeError::Kind::NotIncident, {v, e},
                    "vertex " + std::to_string(v) + " is not an endpoint of edge " + std::to_string(e));
}

std::vector<EdgeId> incident_edges(const Tree& t, VertexId v) {
    if (!t.has_vertex(v)) {
        throw TreeError(TreeError::Kind::UnknownVertex, {v}, "unknown vertex " + std::to_string(v));
    }
    std::vector<EdgeId> out;
    for (const Edge& e : t.edges()) {
        if (e.x == v || e.y == v) out.push_back(e.id);
    }
    return out;
}

Subtree whole_tree(const Tree& t) {
    Subtree s;
    for (VertexId v = 0; v < t.vertex_count(); ++v) s.vertices.insert(v);
    for (const Edge& e : t.edges()) s.edges.insert(e.id);
    return s;
}

std::vector<VertexId> leaves(const Tree& t, const Subtree& sub) {
    std::vector<std::size_t> degree(t.vertex_count(), 0);
    for (EdgeId e : sub.edges) {
        ++degree[t.edge(e).x];
        ++degree[t.edge(e).y];
    }
    std::vector<VertexId> out;
    for (VertexId v : sub.vertices) {
        if (degree[v] <= 1) out.push_back(v);
    }
    return out;
}

std::vector<VertexId> leaves(const Tree& t) { return leaves(t, whole_tree(t)); }

Subtree convex_hull(const Tree& t, const std::set<VertexId>& w) {
    if (w.empty()) throw TreeError(TreeError::Kind::EmptySet, {}, "convex hull of an empty vertex set");
    for (VertexId v : w) {
        if (!t.has_vertex(v)) throw TreeError(TreeError::Kind::UnknownVertex, {v}, "unknown vertex " + std::to_string(v));
    }
    Subtree hull = whole_tree(t);
    std::vector<std::size_t> degree(t.vertex_count(), 0);
    for (const Edge& e : t.edges()) {
        ++degree[e.x];
        ++degree[e.y];
    }
    std::queue<VertexId> prune;
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        if (degree[v] <= 1 && !w.contains(v)) prune.push(v);
    }
    while (!prune.empty()) {
        VertexId v = prune.front();
        prune.pop();
        if (!hull.vertices.contains(v)) continue;
        hull.vertices.erase(v);
        for (EdgeId e : incident_edges(t, v)) {
            if (!hull.edges.erase(e)) continue;
            VertexId u = t.other_end(e, v);
            if (--degree[u] <= 1 && !w.contains(u)) prune.push(u);
        }
    }
    return hull;
}

}  // namespace sheaftree
