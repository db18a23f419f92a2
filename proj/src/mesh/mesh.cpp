#include "mgoc/mesh/mesh.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mgoc::mesh {

ExtendedMesh::ExtendedMesh(MetricGraph graph, std::vector<Index> n_intervals)
    : graph_(std::move(graph)), n_intervals_(std::move(n_intervals)) {
    const Index m = graph_.n_edges();
    if (static_cast<Index>(n_intervals_.size()) != m)
        throw std::invalid_argument("build_mesh: one interval count per edge required");
    h_.resize(static_cast<std::size_t>(m));
    interior_offset_.resize(static_cast<std::size_t>(m));
    cell_offset_.resize(static_cast<std::size_t>(m));
    for (Index e = 0; e < m; ++e) {
        if (n_intervals_[e] < 1)
            throw std::invalid_argument("build_mesh: edge " + std::to_string(e) +
                                        " needs at least one interval");
        h_[e] = graph_.length(e) / static_cast<double>(n_intervals_[e]);
        interior_offset_[e] = n_interior_;
        cell_offset_[e] = n_cells_;
        n_interior_ += n_intervals_[e] - 1;
        n_cells_ += n_intervals_[e];
    }
    const Index n = graph_.n_vertices();
    vertex_dof_.assign(static_cast<std::size_t>(n), -1);
    dof_vertex_.reserve(static_cast<std::size_t>(n));
    Index next = n_interior_;
    for (Index v : graph_.kirchhoff_nodes()) {
        vertex_dof_[v] = next++;
        dof_vertex_.push_back(v);
    }
    for (Index v : graph_.dirichlet_nodes()) {
        vertex_dof_[v] = next++;
        dof_vertex_.push_back(v);
    }
}

double ExtendedMesh::h_max() const {
    return h_.empty() ? 0.0 : *std::max_element(h_.begin(), h_.end());
}

double ExtendedMesh::h_min() const {
    return h_.empty() ? 0.0 : *std::min_element(h_.begin(), h_.end());
}

Index ExtendedMesh::interior_dof(Index e, Index local) const {
    if (local < 1 || local >= n_intervals(e))
        throw std::out_of_range("interior_dof: node " + std::to_string(local) +
                                " is not interior to edge " + std::to_string(e));
    return interior_offset_[e] + local - 1;
}

Index ExtendedMesh::node_dof(Index e, Index j) const {
    if (j == 0) return vertex_dof_[graph_.edges()[e].head];
    if (j == n_intervals(e)) return vertex_dof_[graph_.edges()[e].tail];
    return interior_dof(e, j);
}

DofRef ExtendedMesh::dof(Index k) const {
    if (k < 0 || k >= n_dof()) throw std::out_of_range("dof: index out of range");
    if (k < n_interior_) {
        const auto it = std::upper_bound(interior_offset_.begin(), interior_offset_.end(), k);
        // Last edge whose offset does not exceed k; edges without interior
        // nodes share their offset with the next edge and are skipped.
        const Index e = static_cast<Index>(it - interior_offset_.begin()) - 1;
        return {DofKind::Interior, e, k - interior_offset_[e] + 1, -1};
    }
    const Index v = dof_vertex_[k - n_interior_];
    return {graph_.vertex_type(v) == graphs::VertexType::Dirichlet ? DofKind::Dirichlet
                                                                   : DofKind::Kirchhoff,
            -1, -1, v};
}

Index ExtendedMesh::index_of(const DofRef& ref) const {
    if (ref.kind == DofKind::Interior) return interior_dof(ref.edge, ref.local);
    return vertex_dof_.at(static_cast<std::size_t>(ref.vertex));
}

MeshPtr build_mesh(const MetricGraph& g, Index n_e) {
    if (n_e < 1) throw std::invalid_argument("build_mesh: n_e must be at least 1");
    return build_mesh(g, std::vector<Index>(static_cast<std::size_t>(g.n_edges()), n_e));
}

MeshPtr build_mesh(const MetricGraph& g, std::vector<Index> n_intervals) {
    return std::make_shared<const ExtendedMesh>(g, std::move(n_intervals));
}

SparseMatrix interior_incidence(const ExtendedMesh& mesh) {
    std::vector<linalg::Triplet> t;
    t.reserve(2 * static_cast<std::size_t>(mesh.n_interior()));
    Index row = 0;
    for (Index e = 0; e < mesh.n_edges(); ++e) {
        const Index c0 = mesh.cell_offset(e);
        for (Index j = 1; j < mesh.n_intervals(e); ++j, ++row) {
            t.push_back({row, c0 + j - 1, -1.0});
            t.push_back({row, c0 + j, 1.0});
        }
    }
    return SparseMatrix::from_triplets(mesh.n_interior(), mesh.n_cells(), t);
}

SparseMatrix vertex_incidence(const ExtendedMesh& mesh) {
    // E^+ keeps the +1 (head) of each incidence column, E^- the -1 (tail).
    std::vector<linalg::Triplet> t;
    t.reserve(2 * static_cast<std::size_t>(mesh.n_edges()));
    for (Index e = 0; e < mesh.n_edges(); ++e) {
        const auto [tail, head] = mesh.graph().edges()[e];
        const Index first = mesh.cell_offset(e);
        const Index last = first + mesh.n_intervals(e) - 1;
        t.push_back({head, first, 1.0});
        t.push_back({tail, last, -1.0});
    }
    return SparseMatrix::from_triplets(mesh.graph().n_vertices(), mesh.n_cells(), t);
}

SparseMatrix extended_incidence(const ExtendedMesh& mesh) {
    auto t = interior_incidence(mesh).triplets();
    for (const auto& e : vertex_incidence(mesh).triplets())
        t.push_back({mesh.vertex_dof(e.row), e.col, e.value});
    return SparseMatrix::from_triplets(mesh.n_dof(), mesh.n_cells(), t);
}

namespace {

void require_nested(const ExtendedMesh& coarse, const ExtendedMesh& fine) {
    const auto& gc = coarse.graph();
    const auto& gf = fine.graph();
    bool same = gc.n_vertices() == gf.n_vertices() && gc.n_edges() == gf.n_edges();
    for (Index e = 0; same && e < gc.n_edges(); ++e)
        same = gc.edges()[e].tail == gf.edges()[e].tail && gc.edges()[e].head == gf.edges()[e].head &&
               gc.length(e) == gf.length(e);
    for (Index v = 0; same && v < gc.n_vertices(); ++v)
        same = gc.vertex_type(v) == gf.vertex_type(v);
    if (!same) throw std::invalid_argument("prolong: meshes are built on different graphs");
    for (Index e = 0; e < gc.n_edges(); ++e)
        if (fine.n_intervals(e) % coarse.n_intervals(e) != 0)
            throw std::invalid_argument("prolong: meshes are not nested on edge " +
                                        std::to_string(e));
}

}  // namespace

PiecewiseLinearFunction prolong(const PiecewiseLinearFunction& coarse, const MeshPtr& fine) {
    const ExtendedMesh& cm = *coarse.mesh;
    require_nested(cm, *fine);
    PiecewiseLinearFunction out{fine, Vector(static_cast<std::size_t>(fine->n_dof()), 0.0)};
    for (Index v = 0; v < cm.graph().n_vertices(); ++v)
        out.values[fine->vertex_dof(v)] = coarse.values[cm.vertex_dof(v)];
    for (Index e = 0; e < cm.n_edges(); ++e) {
        const Index ratio = fine->n_intervals(e) / cm.n_intervals(e);
        for (Index j = 1; j < fine->n_intervals(e); ++j) {
            const Index k = j / ratio;
            const Index rem = j % ratio;
            const double theta = static_cast<double>(rem) / static_cast<double>(ratio);
            const double left = coarse.at_node(e, k);
            const double right = rem == 0 ? left : coarse.at_node(e, k + 1);
            out.values[fine->interior_dof(e, j)] = (1.0 - theta) * left + theta * right;
        }
    }
    return out;
}

PiecewiseLinearFunction restrict_nodal(const PiecewiseLinearFunction& fine, const MeshPtr& coarse) {
    const ExtendedMesh& fm = *fine.mesh;
    require_nested(*coarse, fm);
    PiecewiseLinearFunction out{coarse, Vector(static_cast<std::size_t>(coarse->n_dof()), 0.0)};
    for (Index e = 0; e < coarse->n_edges(); ++e) {
        const Index ratio = fm.n_intervals(e) / coarse->n_intervals(e);
        for (Index j = 0; j <= coarse->n_intervals(e); ++j)
            out.values[coarse->node_dof(e, j)] = fine.at_node(e, j * ratio);
    }
    // Isolated vertices are not reached through any edge.
    for (Index v = 0; v < coarse->graph().n_vertices(); ++v)
        out.values[coarse->vertex_dof(v)] = fine.values[fm.vertex_dof(v)];
    return out;
}

}  // namespace mgoc::mesh
