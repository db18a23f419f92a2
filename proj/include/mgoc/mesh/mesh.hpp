#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mgoc/graphs/graph.hpp"
#include "mgoc/linalg/sparse.hpp"

namespace mgoc::mesh {

using graphs::MetricGraph;
using linalg::Index;
using linalg::SparseMatrix;
using linalg::Vector;

enum class DofKind { Interior, Kirchhoff, Dirichlet };

/// What a global degree of freedom stands for. For interior DOFs `edge` and
/// `local` (1 <= local <= n_e - 1) are set and `vertex` is -1; for vertex DOFs
/// `vertex` is set and the others are -1.
struct DofRef {
    DofKind kind;
    Index edge = -1;
    Index local = -1;
    Index vertex = -1;

    friend bool operator==(const DofRef&, const DofRef&) = default;
};

/// Graph refined by an equidistant grid on every edge.
///
/// Edge e is split into n_e intervals of width h_e = L_e / n_e. Grid node j of
/// edge e sits at distance j * h_e from the edge's head vertex (node 0 is the
/// head, node n_e the tail); interval k joins nodes k and k + 1. This matches
/// the extended incidence matrix, whose first interval column of each edge
/// carries the head's +1.
///
/// Global DOFs are ordered interior-then-Kirchhoff-then-Dirichlet. Interior
/// DOFs are grouped edge by edge in edge order; vertex DOFs follow ascending
/// vertex id within their block. The Dirichlet block is last, so free DOFs are
/// [0, n_free()) and the k-th control is DOF n_free() + k.
class ExtendedMesh {
public:
    ExtendedMesh(MetricGraph graph, std::vector<Index> n_intervals);

    const MetricGraph& graph() const { return graph_; }
    Index n_edges() const { return graph_.n_edges(); }
    Index n_intervals(Index e) const { return n_intervals_[static_cast<std::size_t>(e)]; }
    std::span<const Index> n_intervals() const { return n_intervals_; }
    double h(Index e) const { return h_[static_cast<std::size_t>(e)]; }
    double h_max() const;
    double h_min() const;

    Index n_dof() const { return n_interior_ + graph_.n_vertices(); }
    Index n_interior() const { return n_interior_; }
    Index n_kirchhoff() const { return static_cast<Index>(graph_.kirchhoff_nodes().size()); }
    Index n_dirichlet() const { return static_cast<Index>(graph_.dirichlet_nodes().size()); }
    Index n_free() const { return n_interior_ + n_kirchhoff(); }
    /// Total number of intervals (columns of the extended incidence matrix).
    Index n_cells() const { return n_cells_; }

    /// First interval column of edge e.
    Index cell_offset(Index e) const { return cell_offset_[static_cast<std::size_t>(e)]; }
    Index interior_dof(Index e, Index local) const;
    Index vertex_dof(Index v) const { return vertex_dof_[static_cast<std::size_t>(v)]; }
    /// DOF of grid node j in [0, n_e] along edge e (vertex DOFs at the ends).
    Index node_dof(Index e, Index j) const;

    DofRef dof(Index k) const;
    Index index_of(const DofRef& ref) const;

private:
    MetricGraph graph_;
    std::vector<Index> n_intervals_;
    std::vector<double> h_;
    std::vector<Index> interior_offset_;
    std::vector<Index> cell_offset_;
    std::vector<Index> vertex_dof_;
    std::vector<Index> dof_vertex_;  // vertex id for DOFs >= n_interior_
    Index n_interior_ = 0;
    Index n_cells_ = 0;
};

using MeshPtr = std::shared_ptr<const ExtendedMesh>;

/// Uniform n_e on every edge. Throws std::invalid_argument if n_e < 1.
MeshPtr build_mesh(const MetricGraph& g, Index n_e);
MeshPtr build_mesh(const MetricGraph& g, std::vector<Index> n_intervals);

/// Nodal coefficients of an element of V_h, in the mesh's DOF order.
struct PiecewiseLinearFunction {
    MeshPtr mesh;
    Vector values;

    double at_node(Index e, Index j) const { return values[mesh->node_dof(e, j)]; }
};

/// E_i: blkdiag of per-edge (n_e - 1) x n_e bidiagonal blocks with rows (-1, +1).
SparseMatrix interior_incidence(const ExtendedMesh& mesh);

/// E_v: n x n_cells; for edge j, E^+_j sits in the edge's first interval column
/// and E^-_j in its last one.
SparseMatrix vertex_incidence(const ExtendedMesh& mesh);

/// [E_i; E_v] with rows permuted into the mesh's DOF order.
SparseMatrix extended_incidence(const ExtendedMesh& mesh);

/// Exact nodal interpolation onto a mesh that refines the coarse one edgewise.
/// Throws std::invalid_argument for non-nested meshes.
PiecewiseLinearFunction prolong(const PiecewiseLinearFunction& coarse, const MeshPtr& fine);

/// Nodal injection onto a coarser nested mesh (inverse of prolong on V_h).
PiecewiseLinearFunction restrict_nodal(const PiecewiseLinearFunction& fine, const MeshPtr& coarse);

}  // namespace mgoc::mesh
