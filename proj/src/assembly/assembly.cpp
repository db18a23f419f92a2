#include "mgoc/assembly/assembly.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mgoc::assembly {

using linalg::Triplet;

EdgeField EdgeField::per_edge(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("EdgeField::per_edge: no values");
    EdgeField f;
    f.repr_ = std::move(values);
    return f;
}

EdgeField EdgeField::sampled(Sampler s) {
    if (!s) throw std::invalid_argument("EdgeField::sampled: empty function");
    EdgeField f;
    f.repr_ = std::move(s);
    return f;
}

double EdgeField::on_edge(Index e) const {
    const auto* v = std::get_if<std::vector<double>>(&repr_);
    if (!v) throw std::logic_error("EdgeField::on_edge: field is not piecewise constant");
    if (v->size() == 1) return v->front();
    return v->at(static_cast<std::size_t>(e));
}

std::vector<double> EdgeField::per_edge_values(Index m) const {
    const auto& v = std::get<std::vector<double>>(repr_);
    if (v.size() != 1 && static_cast<Index>(v.size()) != m)
        throw std::invalid_argument("EdgeField: expected " + std::to_string(m) +
                                    " per-edge values, got " + std::to_string(v.size()));
    if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(m), v.front());
    return v;
}

double EdgeField::at(Index e, double x) const {
    if (const auto* s = std::get_if<Sampler>(&repr_)) return (*s)(e, x);
    return on_edge(e);
}

void ProblemData::validate(Index n_edges) const {
    if (!(beta > 0.0)) throw std::invalid_argument("ProblemData: beta must be positive");
    if (c0.is_piecewise_constant()) {
        for (double c : c0.per_edge_values(n_edges))
            if (c < 0.0) throw std::invalid_argument("ProblemData: c0 must be nonnegative");
    }
    for (const EdgeField* g : {&f, &ybar})
        if (g->is_piecewise_constant()) (void)g->per_edge_values(n_edges);
}

Vector interval_weights(const ExtendedMesh& mesh, bool inverse, std::span<const double> coefficient) {
    Vector w(static_cast<std::size_t>(mesh.n_cells()));
    for (Index e = 0; e < mesh.n_edges(); ++e) {
        const double c = coefficient.empty() ? 1.0 : coefficient[e];
        const double v = inverse ? 1.0 / mesh.h(e) : c * mesh.h(e);
        for (Index k = 0; k < mesh.n_intervals(e); ++k) w[mesh.cell_offset(e) + k] = v;
    }
    return w;
}

namespace {

// E diag(w) F^T for incidence-like matrices sharing the column space.
SparseMatrix weighted_gram(const SparseMatrix& e, std::span<const double> w) {
    const SparseMatrix ew = sp_mul(e, SparseMatrix::diagonal(w));
    return sp_mul(ew, transpose(e));
}

}  // namespace

SparseMatrix assemble_stiffness(const ExtendedMesh& mesh) {
    return weighted_gram(mesh::extended_incidence(mesh), interval_weights(mesh, true));
}

SparseMatrix assemble_mass(const ExtendedMesh& mesh, std::span<const double> coefficient) {
    if (!coefficient.empty() && static_cast<Index>(coefficient.size()) != mesh.n_edges())
        throw std::invalid_argument("assemble_mass: one coefficient per edge required");
    for (std::size_t e = 0; e < coefficient.size(); ++e)
        if (coefficient[e] < 0.0)
            throw std::invalid_argument("assemble_mass: negative coefficient on edge " +
                                        std::to_string(e));
    const SparseMatrix b =
        weighted_gram(mesh::extended_incidence(mesh).abs(), interval_weights(mesh, false, coefficient));
    const Vector d = linalg::diag(b);
    return sp_add(b, SparseMatrix::diagonal(d), 1.0 / 6.0, 1.0 / 6.0);
}

Vector assemble_load(const ExtendedMesh& mesh, const EdgeField& g) {
    if (g.is_piecewise_constant()) {
        const auto values = g.per_edge_values(mesh.n_edges());
        const Vector ones(static_cast<std::size_t>(mesh.n_dof()), 1.0);
        return linalg::spmv(assemble_mass(mesh, values), ones);
    }
    Vector b(static_cast<std::size_t>(mesh.n_dof()), 0.0);
    for (Index e = 0; e < mesh.n_edges(); ++e) {
        const double h = mesh.h(e);
        double left = g.at(e, 0.0);
        for (Index k = 0; k < mesh.n_intervals(e); ++k) {
            const double right = g.at(e, static_cast<double>(k + 1) * h);
            b[mesh.node_dof(e, k)] += h / 6.0 * (2.0 * left + right);
            b[mesh.node_dof(e, k + 1)] += h / 6.0 * (left + 2.0 * right);
            left = right;
        }
    }
    return b;
}

Vector interpolate(const ExtendedMesh& mesh, const EdgeField& g) {
    Vector v(static_cast<std::size_t>(mesh.n_dof()), 0.0);
    std::vector<char> seen(v.size(), 0);
    for (Index e = 0; e < mesh.n_edges(); ++e) {
        for (Index j = 0; j <= mesh.n_intervals(e); ++j) {
            const Index k = mesh.node_dof(e, j);
            if (seen[k]) continue;
            seen[k] = 1;
            v[k] = g.at(e, static_cast<double>(j) * mesh.h(e));
        }
    }
    return v;
}

BlockView partition_blocks(const SparseMatrix& a, const ExtendedMesh& mesh) {
    const Index nf = mesh.n_free();
    const Index n = mesh.n_dof();
    if (a.rows() != n || a.cols() != n)
        throw std::invalid_argument("partition_blocks: matrix does not match the mesh");
    return {a.block(0, nf, 0, nf), a.block(0, nf, nf, n), a.block(nf, n, 0, nf), a.block(nf, n, nf, n)};
}

FeOperators assemble(const MeshPtr& mesh, const ProblemData& data) {
    data.validate(mesh->n_edges());
    FeOperators ops;
    ops.mesh = mesh;
    ops.A = assemble_stiffness(*mesh);
    ops.M = assemble_mass(*mesh);
    if (data.c0.is_piecewise_constant()) {
        ops.M_c0 = assemble_mass(*mesh, data.c0.per_edge_values(mesh->n_edges()));
    } else {
        // Potential sampled at interval midpoints, constant per interval.
        std::vector<Triplet> t;
        for (Index e = 0; e < mesh->n_edges(); ++e) {
            const double h = mesh->h(e);
            for (Index k = 0; k < mesh->n_intervals(e); ++k) {
                const double c = data.c0.at(e, (static_cast<double>(k) + 0.5) * h);
                if (c < 0.0) throw std::invalid_argument("ProblemData: c0 must be nonnegative");
                const Index a = mesh->node_dof(e, k), b = mesh->node_dof(e, k + 1);
                t.push_back({a, a, c * h / 3.0});
                t.push_back({b, b, c * h / 3.0});
                t.push_back({a, b, c * h / 6.0});
                t.push_back({b, a, c * h / 6.0});
            }
        }
        ops.M_c0 = SparseMatrix::from_triplets(mesh->n_dof(), mesh->n_dof(), t);
    }
    ops.K = sp_add(ops.A, ops.M_c0);
    ops.Kb = partition_blocks(ops.K, *mesh);
    ops.Mb = partition_blocks(ops.M, *mesh);
    ops.f_vec = assemble_load(*mesh, data.f);
    ops.ybar_vec = assemble_load(*mesh, data.ybar);
    ops.coercive = is_coercive(*mesh, data.c0);
    return ops;
}

bool is_coercive(const ExtendedMesh& mesh, const EdgeField& c0) {
    const auto& g = mesh.graph();
    std::vector<Index> parent(static_cast<std::size_t>(g.n_vertices()));
    std::iota(parent.begin(), parent.end(), Index{0});
    const auto find = [&](Index v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& e : g.edges()) parent[find(e.tail)] = find(e.head);

    std::vector<char> anchored(parent.size(), 0);
    for (Index v : g.dirichlet_nodes()) anchored[find(v)] = 1;
    for (Index e = 0; e < g.n_edges(); ++e) {
        bool positive = false;
        if (c0.is_piecewise_constant()) {
            positive = c0.on_edge(e) > 0.0;
        } else {
            for (Index k = 0; k < mesh.n_intervals(e) && !positive; ++k)
                positive = c0.at(e, (static_cast<double>(k) + 0.5) * mesh.h(e)) > 0.0;
        }
        if (positive) anchored[find(g.edges()[e].tail)] = 1;
    }
    for (Index v = 0; v < g.n_vertices(); ++v)
        if (!anchored[find(v)]) return false;
    return true;
}

}  // namespace mgoc::assembly
