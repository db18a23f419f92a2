#pragma once

#include <algorithm>
#include <random>
#include <set>

#include "mgoc/assembly/assembly.hpp"
#include "mgoc/graphs/generators.hpp"

namespace mgoc::testing {

using graphs::Edge;
using graphs::MetricGraph;
using graphs::VertexType;
using linalg::Index;
using linalg::SparseMatrix;
using linalg::Triplet;
using linalg::Vector;

/// Connected graph: a random spanning tree plus up to `extra` chords, lengths
/// uniform in [0.5, 2], and `n_dirichlet` random Dirichlet vertices.
inline MetricGraph random_graph(std::mt19937_64& rng, Index n, Index extra, Index n_dirichlet) {
    std::uniform_real_distribution<double> len(0.5, 2.0);
    std::vector<Edge> edges;
    std::set<std::pair<Index, Index>> seen;
    auto add = [&](Index a, Index b) {
        if (a == b || !seen.insert(std::minmax(a, b)).second) return;
        edges.push_back({a, b});
    };
    for (Index v = 1; v < n; ++v) add(std::uniform_int_distribution<Index>(0, v - 1)(rng), v);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index k = 0; k < extra; ++k) add(pick(rng), pick(rng));
    // Random orientation so both conventions are exercised.
    for (auto& e : edges)
        if (rng() & 1) std::swap(e.tail, e.head);
    std::vector<double> lengths(edges.size());
    for (double& l : lengths) l = len(rng);
    auto types = graphs::random_dirichlet_types(n, n_dirichlet, rng());
    return {graphs::CombinatorialGraph(n, std::move(edges)), std::move(lengths), std::move(types)};
}

/// Element-by-element assembly of Σ_intervals (1/h)[[1,-1],[-1,1]] and
/// Σ_intervals coef·(h/6)[[2,1],[1,2]] over the grid nodes of each edge.
struct ElementAssembly {
    SparseMatrix A;
    SparseMatrix M;
};

inline ElementAssembly element_assembly(const mesh::ExtendedMesh& m,
                                        std::span<const double> coef = {}) {
    std::vector<Triplet> ta, tm;
    for (Index e = 0; e < m.n_edges(); ++e) {
        const double h = m.h(e);
        const double c = coef.empty() ? 1.0 : coef[e];
        for (Index k = 0; k < m.n_intervals(e); ++k) {
            const Index a = m.node_dof(e, k), b = m.node_dof(e, k + 1);
            ta.insert(ta.end(), {{a, a, 1 / h}, {b, b, 1 / h}, {a, b, -1 / h}, {b, a, -1 / h}});
            tm.insert(tm.end(), {{a, a, c * h / 3}, {b, b, c * h / 3}, {a, b, c * h / 6},
                                 {b, a, c * h / 6}});
        }
    }
    const Index n = m.n_dof();
    return {SparseMatrix::from_triplets(n, n, ta), SparseMatrix::from_triplets(n, n, tm)};
}

/// max |a_ij - b_ij| / max |b_ij|
inline double relative_diff(const SparseMatrix& a, const SparseMatrix& b) {
    return linalg::max_abs_diff(a, b) / linalg::max_abs(b);
}

inline Vector random_vector(std::mt19937_64& rng, Index n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector v(static_cast<std::size_t>(n));
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace mgoc::testing
