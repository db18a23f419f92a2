#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "mgoc/mesh/mesh.hpp"

namespace mgoc::assembly {

using linalg::Index;
using linalg::SparseMatrix;
using linalg::Vector;
using mesh::ExtendedMesh;
using mesh::MeshPtr;

/// Scalar data on the metric graph: one constant per edge, or a function of
/// (edge, distance from the edge's head) sampled at the grid nodes.
class EdgeField {
public:
    using Sampler = std::function<double(Index edge, double x)>;

    EdgeField() : EdgeField(0.0) {}
    EdgeField(double value) : repr_(std::vector<double>{value}) {}  // NOLINT: implicit by design
    static EdgeField per_edge(std::vector<double> values);
    static EdgeField sampled(Sampler f);

    bool is_piecewise_constant() const { return std::holds_alternative<std::vector<double>>(repr_); }
    /// Constant on edge e; only valid for piecewise-constant fields.
    double on_edge(Index e) const;
    /// Per-edge constants for an m-edge graph.
    std::vector<double> per_edge_values(Index m) const;
    double at(Index e, double x) const;

private:
    std::variant<std::vector<double>, Sampler> repr_;
};

struct ProblemData {
    double beta = 1.0;
    EdgeField c0 = 0.0;
    EdgeField f = 0.0;
    EdgeField ybar = 0.0;

    /// Throws std::invalid_argument unless beta > 0 and c0 >= 0 per edge.
    void validate(Index n_edges) const;
};

/// W_E = blkdiag(h_e^{-1} I_{n_e}); with `inverse = false`, blkdiag(coef_e h_e I_{n_e}).
Vector interval_weights(const ExtendedMesh& mesh, bool inverse,
                        std::span<const double> coefficient = {});

/// A = Ẽ W_E Ẽ^T in DOF order.
SparseMatrix assemble_stiffness(const ExtendedMesh& mesh);

/// M = (|Ẽ| Ŵ |Ẽ|^T + diag(|Ẽ| Ŵ |Ẽ|^T)) / 6 with Ŵ = blkdiag(coef_e h_e I).
/// An empty coefficient means 1 on every edge. Throws on negative entries.
SparseMatrix assemble_mass(const ExtendedMesh& mesh, std::span<const double> coefficient = {});

/// Load vector b with b^T v = (g, v_h). Exact for per-edge constants (through
/// the mass formula); samplers are interpolated edge by edge.
Vector assemble_load(const ExtendedMesh& mesh, const EdgeField& g);

/// Nodal interpolant of a field. Vertex values are taken from the first
/// incident edge, so this is only meaningful for continuous data.
Vector interpolate(const ExtendedMesh& mesh, const EdgeField& g);

/// Free (interior + Kirchhoff) / Dirichlet partition of a DOF-ordered matrix.
struct BlockView {
    SparseMatrix FF, FD, DF, DD;
};

BlockView partition_blocks(const SparseMatrix& a, const ExtendedMesh& mesh);

struct FeOperators {
    MeshPtr mesh;
    SparseMatrix A, M, M_c0, K;
    BlockView Kb;
    BlockView Mb;
    Vector f_vec;
    Vector ybar_vec;
    /// See is_coercive(); K_FF is singular when false.
    bool coercive = false;

    Index n_free() const { return mesh->n_free(); }
    Index n_dirichlet() const { return mesh->n_dirichlet(); }
    std::span<const double> f_F() const { return std::span(f_vec).first(n_free()); }
    std::span<const double> f_D() const { return std::span(f_vec).subspan(n_free()); }
    std::span<const double> ybar_F() const { return std::span(ybar_vec).first(n_free()); }
    std::span<const double> ybar_D() const { return std::span(ybar_vec).subspan(n_free()); }
};

FeOperators assemble(const MeshPtr& mesh, const ProblemData& data);

/// True when K_FF is positive definite: every connected component of the
/// graph has a Dirichlet vertex or an edge with positive c0.
bool is_coercive(const ExtendedMesh& mesh, const EdgeField& c0);

}  // namespace mgoc::assembly
