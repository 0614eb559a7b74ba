#pragma once

// Finite trees with a fixed orientation on every edge.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sheaftree {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
    EdgeId id = 0;
    VertexId x = 0;  ///< first endpoint
    VertexId y = 0;  ///< second endpoint
};

class TreeError : public std::runtime_error {
public:
    enum class Kind { Disconnected, HasCycle, DanglingEndpoint, DuplicateEdge, NotIncident, UnknownVertex, EmptySet };

    TreeError(Kind kind, std::vector<std::size_t> ids, const std::string& what)
        : std::runtime_error(what), kind_(kind), ids_(std::move(ids)) {}

    Kind kind() const { return kind_; }
    /// Offending vertex or edge ids.
    const std::vector<std::size_t>& ids() const { return ids_; }

private:
    Kind kind_;
    std::vector<std::size_t> ids_;
};

std::string to_string(TreeError::Kind kind);

/// Vertices are 0..vertex_count-1; edges are stored by id, 0..edge_count-1.
class Tree {
public:
    Tree() = default;
    /// Edge ids must be a permutation of 0..edges.size()-1; edges are stored
    /// sorted by id. Structural checks happen in validate_tree.
    Tree(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const;
    bool has_vertex(VertexId v) const { return v < vertex_count_; }
    bool has_edge(EdgeId e) const { return e < edges_.size(); }
    bool incident(VertexId v, EdgeId e) const;
    /// The endpoint of e other than v.
    VertexId other_end(EdgeId e, VertexId v) const;

    friend bool operator==(const Tree& a, const Tree& b);

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
};

/// Throws TreeError (Disconnected, HasCycle, DanglingEndpoint, DuplicateEdge).
void validate_tree(const Tree& t);

/// +1 if v = x_e, -1 if v = y_e; throws NotIncident otherwise.
int or_sign(const Tree& t, VertexId v, EdgeId e);

/// Sorted incident edge ids; throws UnknownVertex.
std::vector<EdgeId> incident_edges(const Tree& t, VertexId v);

struct Subtree {
    std::set<VertexId> vertices;
    std::set<EdgeId> edges;

    friend bool operator==(const Subtree&, const Subtree&) = default;
};

Subtree whole_tree(const Tree& t);
/// Vertices with at most one incident edge inside the (sub)tree.
std::vector<VertexId> leaves(const Tree& t, const Subtree& sub);
std::vector<VertexId> leaves(const Tree& t);

/// Smallest subtree containing w, obtained by pruning leaves outside w.
Subtree convex_hull(const Tree& t, const std::set<VertexId>& w);

}  // namespace sheaftree
