#include "mgoc/graphs/generators.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mgoc/error.hpp"
#include "mgoc/linalg/matrix_market.hpp"

namespace mgoc::graphs {

MetricGraph make_star(Index n_leaves, VertexType leaf_type) {
    if (n_leaves < 1) throw std::invalid_argument("make_star: need at least one leaf");
    std::vector<Edge> edges;
    for (Index i = 1; i <= n_leaves; ++i) edges.push_back({0, i});
    std::vector<VertexType> types(static_cast<std::size_t>(n_leaves + 1), leaf_type);
    types[0] = VertexType::Kirchhoff;
    return {CombinatorialGraph(n_leaves + 1, std::move(edges)), {}, std::move(types)};
}

MetricGraph make_path(Index n_vertices) {
    if (n_vertices < 2) throw std::invalid_argument("make_path: need at least two vertices");
    std::vector<Edge> edges;
    for (Index i = 0; i + 1 < n_vertices; ++i) edges.push_back({i, i + 1});
    std::vector<VertexType> types(static_cast<std::size_t>(n_vertices), VertexType::Kirchhoff);
    types.front() = VertexType::Dirichlet;
    types.back() = VertexType::Dirichlet;
    return {CombinatorialGraph(n_vertices, std::move(edges)), {}, std::move(types)};
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::vector<VertexType> random_dirichlet_types(Index n_vertices, Index n_controls,
                                               std::uint64_t seed) {
    if (n_controls < 0 || n_controls > n_vertices)
        throw std::invalid_argument("random_dirichlet_types: cannot choose " +
                                    std::to_string(n_controls) + " controls among " +
                                    std::to_string(n_vertices) + " vertices");
    std::vector<Index> ids(static_cast<std::size_t>(n_vertices));
    std::iota(ids.begin(), ids.end(), Index{0});
    std::mt19937_64 rng(seed);
    for (Index k = 0; k < n_controls; ++k) {
        const auto j = k + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n_vertices - k)));
        std::swap(ids[k], ids[j]);
    }
    std::vector<VertexType> types(static_cast<std::size_t>(n_vertices), VertexType::Kirchhoff);
    for (Index k = 0; k < n_controls; ++k) types[ids[k]] = VertexType::Dirichlet;
    return types;
}

MetricGraph make_fdm_L_graph(Index N, Index n_controls, std::uint64_t seed) {
    if (N < 4) throw std::invalid_argument("make_fdm_L_graph: N must be at least 4");
    const auto removed = [N](Index r, Index c) { return 2 * r >= N && 2 * c >= N; };
    std::vector<Index> id(static_cast<std::size_t>(N * N), -1);
    std::vector<Point2> coords;
    Index n = 0;
    for (Index r = 0; r < N; ++r)
        for (Index c = 0; c < N; ++c)
            if (!removed(r, c)) {
                id[r * N + c] = n++;
                coords.push_back({static_cast<double>(c), static_cast<double>(N - 1 - r)});
            }
    std::vector<Edge> edges;
    for (Index r = 0; r < N; ++r)
        for (Index c = 0; c < N; ++c) {
            const Index v = id[r * N + c];
            if (v < 0) continue;
            if (c + 1 < N && id[r * N + c + 1] >= 0) edges.push_back({v, id[r * N + c + 1]});
            if (r + 1 < N && id[(r + 1) * N + c] >= 0) edges.push_back({v, id[(r + 1) * N + c]});
        }
    auto types = random_dirichlet_types(n, n_controls, seed);
    return {CombinatorialGraph(n, std::move(edges), {}, std::move(coords)), {}, std::move(types)};
}

CombinatorialGraph load_matrix_market(const std::filesystem::path& path) {
    const auto data = linalg::read_matrix_market(path);
    if (data.rows != data.cols)
        throw ParseError("load_matrix_market: matrix is not square (" + std::to_string(data.rows) +
                         " x " + std::to_string(data.cols) + ")");
    std::map<std::pair<Index, Index>, double> unique;
    for (const auto& e : data.entries) {
        if (e.row == e.col) continue;
        const auto key = std::minmax(e.row, e.col);
        const double w = data.field == linalg::MmField::Pattern ? 1.0 : std::abs(e.value);
        if (!(w > 0.0)) continue;  // stored zero: no edge
        unique.emplace(std::pair<Index, Index>{key.first, key.second}, w);
    }
    std::vector<Edge> edges;
    std::vector<double> weights;
    edges.reserve(unique.size());
    for (const auto& [key, w] : unique) {
        edges.push_back({key.first, key.second});
        weights.push_back(w);
    }

    std::optional<std::vector<Point2>> coords;
    const auto coord_path = path.parent_path() / (path.stem().string() + "_coord.mtx");
    if (std::filesystem::exists(coord_path)) {
        Index r = 0, c = 0;
        const auto xy = linalg::read_matrix_market_array(coord_path, r, c);
        if (r != data.rows || c < 2)
            throw ParseError("load_matrix_market: coordinate file '" + coord_path.string() +
                             "' must be n x 2");
        coords.emplace();
        for (Index v = 0; v < r; ++v) coords->push_back({xy[v * c], xy[v * c + 1]});
    }
    return {data.rows, std::move(edges), std::move(weights), std::move(coords)};
}

std::vector<double> edge_lengths(const CombinatorialGraph& g, LengthRule rule) {
    std::vector<double> len(static_cast<std::size_t>(g.n_edges()), 1.0);
    if (rule == LengthRule::Unit || !g.coordinates()) return len;
    const auto& xy = *g.coordinates();
    for (Index e = 0; e < g.n_edges(); ++e) {
        const auto& a = xy[g.edges()[e].tail];
        const auto& b = xy[g.edges()[e].head];
        const double d = std::hypot(a.x - b.x, a.y - b.y);
        if (d > 0.0 && std::isfinite(d)) len[e] = d;
    }
    return len;
}

}  // namespace mgoc::graphs
