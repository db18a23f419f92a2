#include "mgoc/graphs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mgoc::graphs {

CombinatorialGraph::CombinatorialGraph(Index n_vertices, std::vector<Edge> edges,
                                       std::vector<double> weights,
                                       std::optional<std::vector<Point2>> coordinates)
    : n_vertices_(n_vertices),
      edges_(std::move(edges)),
      weights_(std::move(weights)),
      coordinates_(std::move(coordinates)) {
    if (n_vertices_ < 0) throw std::invalid_argument("graph: negative vertex count");
    if (weights_.empty()) weights_.assign(edges_.size(), 1.0);
    if (weights_.size() != edges_.size())
        throw std::invalid_argument("graph: one weight per edge required");
    if (coordinates_ && static_cast<Index>(coordinates_->size()) != n_vertices_)
        throw std::invalid_argument("graph: one coordinate per vertex required");

    adjacency_.resize(static_cast<std::size_t>(n_vertices_));
    for (Index e = 0; e < n_edges(); ++e) {
        const auto [t, h] = edges_[e];
        if (t < 0 || t >= n_vertices_ || h < 0 || h >= n_vertices_)
            throw std::invalid_argument("graph: edge " + std::to_string(e) +
                                        " has an invalid endpoint");
        if (t == h)
            throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(t));
        if (!(weights_[e] > 0.0))
            throw std::invalid_argument("graph: edge " + std::to_string(e) +
                                        " has a non-positive weight");
        adjacency_[t].emplace_back(h, e);
        adjacency_[h].emplace_back(t, e);
    }
    for (Index v = 0; v < n_vertices_; ++v) {
        auto& adj = adjacency_[v];
        std::sort(adj.begin(), adj.end());
        for (std::size_t k = 1; k < adj.size(); ++k)
            if (adj[k].first == adj[k - 1].first)
                throw std::invalid_argument("graph: repeated edge between " + std::to_string(v) +
                                            " and " + std::to_string(adj[k].first));
    }
}

double CombinatorialGraph::weight(Index v, Index w) const {
    const auto& adj = adjacency_.at(static_cast<std::size_t>(v));
    const auto it = std::lower_bound(adj.begin(), adj.end(), std::pair<Index, Index>{w, -1});
    if (it == adj.end() || it->first != w) return 0.0;
    return weights_[it->second];
}

double CombinatorialGraph::degree(Index v) const {
    double d = 0.0;
    for (const auto& [nb, e] : adjacency_.at(static_cast<std::size_t>(v))) d += weights_[e];
    return d;
}

MetricGraph::MetricGraph(CombinatorialGraph base, std::vector<double> lengths,
                         std::vector<VertexType> vertex_types)
    : base_(std::move(base)), lengths_(std::move(lengths)), types_(std::move(vertex_types)) {
    if (lengths_.empty()) lengths_.assign(static_cast<std::size_t>(base_.n_edges()), 1.0);
    if (static_cast<Index>(lengths_.size()) != base_.n_edges())
        throw std::invalid_argument("metric graph: one length per edge required");
    for (std::size_t e = 0; e < lengths_.size(); ++e)
        if (!(lengths_[e] > 0.0) || !std::isfinite(lengths_[e]))
            throw std::invalid_argument("metric graph: edge " + std::to_string(e) +
                                        " must have positive length");
    if (static_cast<Index>(types_.size()) != base_.n_vertices())
        throw std::invalid_argument("metric graph: one vertex type per vertex required");
    for (Index v = 0; v < base_.n_vertices(); ++v)
        (types_[v] == VertexType::Dirichlet ? dirichlet_ : kirchhoff_).push_back(v);
}

double MetricGraph::total_length() const {
    return std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
}

SparseMatrix incidence_matrix(const CombinatorialGraph& g) {
    std::vector<linalg::Triplet> t;
    t.reserve(2 * static_cast<std::size_t>(g.n_edges()));
    for (Index e = 0; e < g.n_edges(); ++e) {
        t.push_back({g.edges()[e].tail, e, -1.0});
        t.push_back({g.edges()[e].head, e, 1.0});
    }
    return SparseMatrix::from_triplets(g.n_vertices(), g.n_edges(), t);
}

SparseMatrix graph_laplacian(const CombinatorialGraph& g) {
    std::vector<linalg::Triplet> t;
    t.reserve(4 * static_cast<std::size_t>(g.n_edges()) + static_cast<std::size_t>(g.n_vertices()));
    for (Index v = 0; v < g.n_vertices(); ++v) t.push_back({v, v, 0.0});
    for (Index e = 0; e < g.n_edges(); ++e) {
        const auto [a, b] = g.edges()[e];
        const double w = g.edge_weights()[e];
        t.push_back({a, a, w});
        t.push_back({b, b, w});
        t.push_back({a, b, -w});
        t.push_back({b, a, -w});
    }
    return SparseMatrix::from_triplets(g.n_vertices(), g.n_vertices(), t);
}

SparseMatrix normalized_laplacian(const CombinatorialGraph& g) {
    std::vector<double> inv_sqrt_deg(static_cast<std::size_t>(g.n_vertices()));
    for (Index v = 0; v < g.n_vertices(); ++v) {
        const double d = g.degree(v);
        if (!(d > 0.0))
            throw std::domain_error("normalized_laplacian: vertex " + std::to_string(v) +
                                    " is isolated");
        inv_sqrt_deg[v] = 1.0 / std::sqrt(d);
    }
    std::vector<linalg::Triplet> t;
    for (Index v = 0; v < g.n_vertices(); ++v) t.push_back({v, v, 1.0});
    for (Index e = 0; e < g.n_edges(); ++e) {
        const auto [a, b] = g.edges()[e];
        const double s = -g.edge_weights()[e] * inv_sqrt_deg[a] * inv_sqrt_deg[b];
        t.push_back({a, b, s});
        t.push_back({b, a, s});
    }
    return SparseMatrix::from_triplets(g.n_vertices(), g.n_vertices(), t);
}

}  // namespace mgoc::graphs
