#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mgoc/linalg/sparse.hpp"

namespace mgoc::graphs {

using linalg::Index;
using linalg::SparseMatrix;

/// An undirected edge with a fixed orientation. The orientation only decides
/// the signs of the incidence matrix.
struct Edge {
    Index tail;
    Index head;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Undirected simple graph with positive edge weights. The weight function
/// w(v, v') is the weight of the edge joining v and v', or 0 if there is none.
class CombinatorialGraph {
public:
    CombinatorialGraph() = default;
    /// Throws std::invalid_argument on self-loops, repeated edges, invalid
    /// endpoints or non-positive weights. Empty `weights` means unit weights.
    CombinatorialGraph(Index n_vertices, std::vector<Edge> edges, std::vector<double> weights = {},
                       std::optional<std::vector<Point2>> coordinates = std::nullopt);

    Index n_vertices() const { return n_vertices_; }
    Index n_edges() const { return static_cast<Index>(edges_.size()); }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const double> edge_weights() const { return weights_; }
    const std::optional<std::vector<Point2>>& coordinates() const { return coordinates_; }

    double weight(Index v, Index w) const;
    double degree(Index v) const;

private:
    Index n_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> weights_;
    std::optional<std::vector<Point2>> coordinates_;
    // adjacency_[v] holds (neighbour, edge index), sorted by neighbour
    std::vector<std::vector<std::pair<Index, Index>>> adjacency_;
};

enum class VertexType { Kirchhoff, Dirichlet };

/// Combinatorial graph whose edges are intervals of length L_e, together with
/// the partition of the vertices into Dirichlet (control) and Kirchhoff nodes.
class MetricGraph {
public:
    MetricGraph() = default;
    /// Empty `lengths` means unit lengths.
    MetricGraph(CombinatorialGraph base, std::vector<double> lengths,
                std::vector<VertexType> vertex_types);

    const CombinatorialGraph& base() const { return base_; }
    Index n_vertices() const { return base_.n_vertices(); }
    Index n_edges() const { return base_.n_edges(); }
    std::span<const Edge> edges() const { return base_.edges(); }
    std::span<const double> lengths() const { return lengths_; }
    double length(Index e) const { return lengths_[static_cast<std::size_t>(e)]; }
    VertexType vertex_type(Index v) const { return types_[static_cast<std::size_t>(v)]; }
    std::span<const VertexType> vertex_types() const { return types_; }

    /// Ascending vertex ids.
    const std::vector<Index>& dirichlet_nodes() const { return dirichlet_; }
    const std::vector<Index>& kirchhoff_nodes() const { return kirchhoff_; }
    double total_length() const;

private:
    CombinatorialGraph base_;
    std::vector<double> lengths_;
    std::vector<VertexType> types_;
    std::vector<Index> dirichlet_;
    std::vector<Index> kirchhoff_;
};

/// n x m signed incidence matrix: column j holds -1 at tail(e_j), +1 at head(e_j).
SparseMatrix incidence_matrix(const CombinatorialGraph& g);

/// L = D - W.
SparseMatrix graph_laplacian(const CombinatorialGraph& g);

/// L_s = I - D^{-1/2} W D^{-1/2}; throws std::domain_error on isolated vertices.
SparseMatrix normalized_laplacian(const CombinatorialGraph& g);

}  // namespace mgoc::graphs
