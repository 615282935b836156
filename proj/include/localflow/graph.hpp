#pragma once

#include "localflow/linalg.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace localflow {

/// Internal vertex index, 0 .. num_vertices()-1.
using Vertex = int;
/// Internal edge index, 0 .. num_edges()-1.
using EdgeIndex = int;
using Label = std::int64_t;

struct Arc {
    Vertex tail;
    Vertex head;
};

/// Simple directed graph whose underlying undirected graph is connected.
///
/// Vertices and edges are indexed by dense integers fixed at construction;
/// every matrix produced from the graph uses that ordering. External labels
/// (as read from JSON) are kept alongside. Instances are immutable. BFS
/// distance rows are memoized behind a mutex, so sharing a graph across
/// threads is safe.
class DirectedGraph {
public:
    /// Throws InvalidInput on self-loops, repeated (tail, head) pairs,
    /// out-of-range endpoints, duplicate labels, or a disconnected graph.
    /// Labels default to 1..n for vertices and 1..m for edges.
    DirectedGraph(int num_vertices, std::vector<Arc> arcs, std::vector<Label> vertex_labels = {},
                  std::vector<Label> edge_labels = {});

    int num_vertices() const noexcept { return num_vertices_; }
    int num_edges() const noexcept { return static_cast<int>(arcs_.size()); }

    const Arc& edge(EdgeIndex e) const { return arcs_.at(static_cast<std::size_t>(e)); }
    std::span<const Arc> edges() const noexcept { return arcs_; }

    /// Neighbours in the undirected graph, sorted ascending.
    std::span<const Vertex> neighbors(Vertex v) const { return neighbors_.at(static_cast<std::size_t>(v)); }
    /// Edges touching v, sorted ascending.
    std::span<const EdgeIndex> incident_edges(Vertex v) const { return incident_.at(static_cast<std::size_t>(v)); }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
    int min_degree() const noexcept { return min_degree_; }
    int max_degree() const noexcept { return max_degree_; }

    Label vertex_label(Vertex v) const { return vertex_labels_.at(static_cast<std::size_t>(v)); }
    Label edge_label(EdgeIndex e) const { return edge_labels_.at(static_cast<std::size_t>(e)); }
    std::optional<Vertex> find_vertex(Label label) const;
    std::optional<EdgeIndex> find_edge(Vertex tail, Vertex head) const;

    /// Unweighted shortest-path distances from source in the undirected graph.
    const std::vector<int>& distances_from(Vertex source) const;
    int eccentricity(Vertex v) const;
    int diameter() const;

private:
    struct DistanceCache {
        std::mutex mutex;
        std::unordered_map<Vertex, std::vector<int>> rows;
    };

    int num_vertices_;
    std::vector<Arc> arcs_;
    std::vector<Label> vertex_labels_;
    std::vector<Label> edge_labels_;
    std::vector<std::vector<Vertex>> neighbors_;
    std::vector<std::vector<EdgeIndex>> incident_;
    std::unordered_map<Label, Vertex> label_index_;
    int min_degree_ = 0;
    int max_degree_ = 0;
    std::shared_ptr<DistanceCache> cache_;
};

/// Vertex subset V' plus an edge subset E' whose endpoints all lie in V'.
///
/// Holds a pointer to its parent graph; the parent must outlive it. The
/// undirected version must be connected (a single vertex with no edges is
/// allowed).
class Subgraph {
public:
    Subgraph(const DirectedGraph& parent, std::vector<Vertex> vertices, std::vector<EdgeIndex> edges);

    /// Subgraph on the given vertices with every parent edge between them.
    static Subgraph induced(const DirectedGraph& parent, std::vector<Vertex> vertices);
    static Subgraph whole(const DirectedGraph& parent);

    const DirectedGraph& parent() const noexcept { return *parent_; }
    std::span<const Vertex> vertices() const noexcept { return vertices_; }
    std::span<const EdgeIndex> edges() const noexcept { return edges_; }
    bool contains_vertex(Vertex v) const { return vertex_mask_.at(static_cast<std::size_t>(v)); }
    bool contains_edge(EdgeIndex e) const { return edge_mask_.at(static_cast<std::size_t>(e)); }
    bool is_whole() const noexcept;

    std::vector<Vertex> complement_vertices() const;
    std::vector<EdgeIndex> complement_edges() const;

    /// Position of v inside vertices(), or -1.
    int local_vertex(Vertex v) const { return local_vertex_.at(static_cast<std::size_t>(v)); }

    /// The subgraph as a standalone graph, indexed in the order of
    /// vertices() and edges(), with the parent's labels.
    DirectedGraph as_graph() const;

private:
    const DirectedGraph* parent_;
    std::vector<Vertex> vertices_;
    std::vector<EdgeIndex> edges_;
    std::vector<bool> vertex_mask_;
    std::vector<bool> edge_mask_;
    std::vector<int> local_vertex_;
};

/// Vertex-by-edge matrix: +1 where the edge leaves the vertex, -1 where it enters.
Matrix incidence_matrix(const DirectedGraph& g);

/// Symmetric 0/1 adjacency of the undirected graph.
Matrix adjacency_matrix(const DirectedGraph& g);

struct AdjacencySpectrum {
    Vector eigenvalues;  // descending
    double mu = 0.0;     // max(|mu_2|, |mu_n|)
};

AdjacencySpectrum adjacency_spectrum(const DirectedGraph& g);

/// Second largest eigenvalue in magnitude of a descending spectrum.
double second_largest_magnitude(const Vector& descending);

Subgraph ball(const DirectedGraph& g, Vertex center, int radius);

/// Vertices of sub with at least one neighbour outside sub, ascending.
std::vector<Vertex> inner_boundary(const Subgraph& sub);

/// Minimum graph distance between the two sets (0 if they intersect).
int set_distance(const DirectedGraph& g, std::span<const Vertex> from, std::span<const Vertex> to);

/// Multi-source BFS distances.
std::vector<int> distances_from_set(const DirectedGraph& g, std::span<const Vertex> sources);

}  // namespace localflow
