#include "localflow/graph.hpp"

#include "localflow/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <utility>

namespace localflow {

namespace {

bool connected(int n, const std::vector<std::vector<Vertex>>& adjacency, std::span<const Vertex> nodes,
               const std::vector<bool>& allowed) {
    if (nodes.empty()) return true;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<Vertex> queue{nodes.front()};
    seen[static_cast<std::size_t>(nodes.front())] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : adjacency[static_cast<std::size_t>(v)]) {
            if (!allowed[static_cast<std::size_t>(w)] || seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = true;
            ++reached;
            queue.push_back(w);
        }
    }
    return reached == nodes.size();
}

}  // namespace

DirectedGraph::DirectedGraph(int num_vertices, std::vector<Arc> arcs, std::vector<Label> vertex_labels,
                             std::vector<Label> edge_labels)
    : num_vertices_(num_vertices),
      arcs_(std::move(arcs)),
      vertex_labels_(std::move(vertex_labels)),
      edge_labels_(std::move(edge_labels)),
      cache_(std::make_shared<DistanceCache>()) {
    if (num_vertices_ <= 0) throw InvalidInput("graph must have at least one vertex");
    const auto n = static_cast<std::size_t>(num_vertices_);
    if (vertex_labels_.empty()) {
        vertex_labels_.resize(n);
        for (std::size_t v = 0; v < n; ++v) vertex_labels_[v] = static_cast<Label>(v + 1);
    }
    if (edge_labels_.empty()) {
        edge_labels_.resize(arcs_.size());
        for (std::size_t e = 0; e < arcs_.size(); ++e) edge_labels_[e] = static_cast<Label>(e + 1);
    }
    if (vertex_labels_.size() != n) throw InvalidInput("vertex label count does not match vertex count");
    if (edge_labels_.size() != arcs_.size()) throw InvalidInput("edge label count does not match edge count");

    for (std::size_t v = 0; v < n; ++v) {
        if (!label_index_.emplace(vertex_labels_[v], static_cast<Vertex>(v)).second)
            throw InvalidInput("duplicate vertex id " + std::to_string(vertex_labels_[v]));
    }
    std::set<Label> seen_edge_labels(edge_labels_.begin(), edge_labels_.end());
    if (seen_edge_labels.size() != edge_labels_.size()) throw InvalidInput("duplicate edge id");

    neighbors_.assign(n, {});
    incident_.assign(n, {});
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t e = 0; e < arcs_.size(); ++e) {
        const Arc& a = arcs_[e];
        if (a.tail < 0 || a.tail >= num_vertices_ || a.head < 0 || a.head >= num_vertices_)
            throw InvalidInput("edge " + std::to_string(edge_labels_[e]) + " has an endpoint outside the graph");
        if (a.tail == a.head) throw InvalidInput("self-loop on edge " + std::to_string(edge_labels_[e]));
        if (!seen.emplace(a.tail, a.head).second)
            throw InvalidInput("repeated edge (" + std::to_string(vertex_labels_[static_cast<std::size_t>(a.tail)]) +
                               ", " + std::to_string(vertex_labels_[static_cast<std::size_t>(a.head)]) + ")");
        neighbors_[static_cast<std::size_t>(a.tail)].push_back(a.head);
        neighbors_[static_cast<std::size_t>(a.head)].push_back(a.tail);
        incident_[static_cast<std::size_t>(a.tail)].push_back(static_cast<EdgeIndex>(e));
        incident_[static_cast<std::size_t>(a.head)].push_back(static_cast<EdgeIndex>(e));
    }
    for (auto& nb : neighbors_) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    std::vector<Vertex> all(n);
    for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
    if (!connected(num_vertices_, neighbors_, all, std::vector<bool>(n, true)))
        throw InvalidInput("graph is not connected");

    min_degree_ = max_degree_ = static_cast<int>(neighbors_[0].size());
    for (const auto& nb : neighbors_) {
        min_degree_ = std::min(min_degree_, static_cast<int>(nb.size()));
        max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    }
}

std::optional<Vertex> DirectedGraph::find_vertex(Label label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeIndex> DirectedGraph::find_edge(Vertex tail, Vertex head) const {
    for (EdgeIndex e : incident_edges(tail)) {
        if (arcs_[static_cast<std::size_t>(e)].tail == tail && arcs_[static_cast<std::size_t>(e)].head == head)
            return e;
    }
    return std::nullopt;
}

const std::vector<int>& DirectedGraph::distances_from(Vertex source) const {
    if (source < 0 || source >= num_vertices_) throw InvalidInput("vertex index out of range");
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->rows.find(source);
    if (it != cache_->rows.end()) return it->second;
    const Vertex sources[] = {source};
    return cache_->rows.emplace(source, distances_from_set(*this, sources)).first->second;
}

int DirectedGraph::eccentricity(Vertex v) const {
    const auto& d = distances_from(v);
    return *std::max_element(d.begin(), d.end());
}

int DirectedGraph::diameter() const {
    int best = 0;
    for (Vertex v = 0; v < num_vertices_; ++v) best = std::max(best, eccentricity(v));
    return best;
}

// ---------------------------------------------------------------------------

Subgraph::Subgraph(const DirectedGraph& parent, std::vector<Vertex> vertices, std::vector<EdgeIndex> edges)
    : parent_(&parent), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    const auto n = static_cast<std::size_t>(parent.num_vertices());
    const auto m = static_cast<std::size_t>(parent.num_edges());
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    if (vertices_.empty()) throw InvalidInput("subgraph must contain at least one vertex");

    vertex_mask_.assign(n, false);
    edge_mask_.assign(m, false);
    local_vertex_.assign(n, -1);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        Vertex v = vertices_[i];
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw InvalidInput("subgraph vertex out of range");
        vertex_mask_[static_cast<std::size_t>(v)] = true;
        local_vertex_[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    std::vector<std::vector<Vertex>> adjacency(n);
    for (EdgeIndex e : edges_) {
        if (e < 0 || static_cast<std::size_t>(e) >= m) throw InvalidInput("subgraph edge out of range");
        const Arc& a = parent.edge(e);
        if (!vertex_mask_[static_cast<std::size_t>(a.tail)] || !vertex_mask_[static_cast<std::size_t>(a.head)])
            throw InvalidInput("subgraph edge " + std::to_string(parent.edge_label(e)) +
                               " has an endpoint outside the vertex subset");
        edge_mask_[static_cast<std::size_t>(e)] = true;
        adjacency[static_cast<std::size_t>(a.tail)].push_back(a.head);
        adjacency[static_cast<std::size_t>(a.head)].push_back(a.tail);
    }
    if (!connected(parent.num_vertices(), adjacency, vertices_, vertex_mask_))
        throw InvalidInput("subgraph is not connected");
}

Subgraph Subgraph::induced(const DirectedGraph& parent, std::vector<Vertex> vertices) {
    std::vector<bool> mask(static_cast<std::size_t>(parent.num_vertices()), false);
    for (Vertex v : vertices) {
        if (v < 0 || v >= parent.num_vertices()) throw InvalidInput("subgraph vertex out of range");
        mask[static_cast<std::size_t>(v)] = true;
    }
    std::vector<EdgeIndex> edges;
    for (EdgeIndex e = 0; e < parent.num_edges(); ++e) {
        const Arc& a = parent.edge(e);
        if (mask[static_cast<std::size_t>(a.tail)] && mask[static_cast<std::size_t>(a.head)]) edges.push_back(e);
    }
    return Subgraph(parent, std::move(vertices), std::move(edges));
}

Subgraph Subgraph::whole(const DirectedGraph& parent) {
    std::vector<Vertex> vertices(static_cast<std::size_t>(parent.num_vertices()));
    for (std::size_t v = 0; v < vertices.size(); ++v) vertices[v] = static_cast<Vertex>(v);
    std::vector<EdgeIndex> edges(static_cast<std::size_t>(parent.num_edges()));
    for (std::size_t e = 0; e < edges.size(); ++e) edges[e] = static_cast<EdgeIndex>(e);
    return Subgraph(parent, std::move(vertices), std::move(edges));
}

bool Subgraph::is_whole() const noexcept {
    return static_cast<int>(vertices_.size()) == parent_->num_vertices() &&
           static_cast<int>(edges_.size()) == parent_->num_edges();
}

std::vector<Vertex> Subgraph::complement_vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < parent_->num_vertices(); ++v)
        if (!vertex_mask_[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

std::vector<EdgeIndex> Subgraph::complement_edges() const {
    std::vector<EdgeIndex> out;
    for (EdgeIndex e = 0; e < parent_->num_edges(); ++e)
        if (!edge_mask_[static_cast<std::size_t>(e)]) out.push_back(e);
    return out;
}

DirectedGraph Subgraph::as_graph() const {
    std::vector<Arc> arcs;
    std::vector<Label> vlabels;
    std::vector<Label> elabels;
    for (Vertex v : vertices_) vlabels.push_back(parent_->vertex_label(v));
    for (EdgeIndex e : edges_) {
        const Arc& a = parent_->edge(e);
        arcs.push_back({local_vertex(a.tail), local_vertex(a.head)});
        elabels.push_back(parent_->edge_label(e));
    }
    return DirectedGraph(static_cast<int>(vertices_.size()), std::move(arcs), std::move(vlabels),
                         std::move(elabels));
}

// ---------------------------------------------------------------------------

Matrix incidence_matrix(const DirectedGraph& g) {
    Matrix a = Matrix::Zero(g.num_vertices(), g.num_edges());
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
        a(g.edge(e).tail, e) = 1.0;
        a(g.edge(e).head, e) = -1.0;
    }
    return a;
}

Matrix adjacency_matrix(const DirectedGraph& g) {
    Matrix b = Matrix::Zero(g.num_vertices(), g.num_vertices());
    for (const Arc& a : g.edges()) {
        b(a.tail, a.head) = 1.0;
        b(a.head, a.tail) = 1.0;
    }
    return b;
}

double second_largest_magnitude(const Vector& descending) {
    const Eigen::Index n = descending.size();
    if (n < 2) return 0.0;
    return std::max(std::abs(descending(1)), std::abs(descending(n - 1)));
}

AdjacencySpectrum adjacency_spectrum(const DirectedGraph& g) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(adjacency_matrix(g), Eigen::EigenvaluesOnly);
    AdjacencySpectrum out;
    out.eigenvalues = eig.eigenvalues().reverse();
    out.mu = second_largest_magnitude(out.eigenvalues);
    return out;
}

std::vector<int> distances_from_set(const DirectedGraph& g, std::span<const Vertex> sources) {
    std::vector<int> dist(static_cast<std::size_t>(g.num_vertices()), -1);
    std::deque<Vertex> queue;
    for (Vertex s : sources) {
        if (s < 0 || s >= g.num_vertices()) throw InvalidInput("vertex index out of range");
        if (dist[static_cast<std::size_t>(s)] == 0) continue;
        dist[static_cast<std::size_t>(s)] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] >= 0) continue;
            dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

Subgraph ball(const DirectedGraph& g, Vertex center, int radius) {
    if (radius < 0) throw InvalidInput("ball radius must be non-negative");
    const auto& dist = g.distances_from(center);
    std::vector<Vertex> inside;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (dist[static_cast<std::size_t>(v)] <= radius) inside.push_back(v);
    return Subgraph::induced(g, std::move(inside));
}

std::vector<Vertex> inner_boundary(const Subgraph& sub) {
    std::vector<Vertex> out;
    for (Vertex v : sub.vertices()) {
        for (Vertex w : sub.parent().neighbors(v)) {
            if (!sub.contains_vertex(w)) {
                out.push_back(v);
                break;
            }
        }
    }
    return out;
}

int set_distance(const DirectedGraph& g, std::span<const Vertex> from, std::span<const Vertex> to) {
    if (from.empty() || to.empty()) throw InvalidInput("set_distance needs two nonempty vertex sets");
    const auto dist = distances_from_set(g, from);
    int best = -1;
    for (Vertex z : to) {
        if (z < 0 || z >= g.num_vertices()) throw InvalidInput("vertex index out of range");
        int d = dist[static_cast<std::size_t>(z)];
        if (best < 0 || d < best) best = d;
    }
    return best;
}

}  // namespace localflow
