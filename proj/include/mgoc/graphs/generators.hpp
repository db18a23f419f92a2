#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mgoc/graphs/graph.hpp"

namespace mgoc::graphs {

/// Star with one Kirchhoff centre (vertex 0) and `n_leaves` leaves of type
/// `leaf_type`; edge i joins 0 -> i+1. Unit lengths and weights.
MetricGraph make_star(Index n_leaves, VertexType leaf_type);

/// Path v0 - v1 - ... - v_{n-1} with unit lengths; the two ends are Dirichlet.
MetricGraph make_path(Index n_vertices);

/// Five-point-stencil graph on the L-shaped region of an N x N lattice: the
/// square minus its upper-right quadrant (lattice points with both row and
/// column index >= N/2). N = 10 gives 75 vertices and 130 edges. Vertices are
/// numbered row by row; `n_controls` of them, drawn with `seed`, are Dirichlet.
MetricGraph make_fdm_L_graph(Index N, Index n_controls, std::uint64_t seed);

/// Dirichlet/Kirchhoff partition with `n_controls` Dirichlet vertices drawn
/// from mt19937_64(seed) by a partial Fisher-Yates shuffle.
std::vector<VertexType> random_dirichlet_types(Index n_vertices, Index n_controls,
                                               std::uint64_t seed);

/// Uniform integer in [0, bound) from mt19937_64 output by rejection sampling.
/// Unlike std::uniform_int_distribution this is identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Undirected graph from a MatrixMarket coordinate file, one edge per
/// off-diagonal pair (duplicates merged, diagonal ignored). Weights are the
/// absolute stored values, or 1 for pattern files. If `<stem>_coord.mtx`
/// exists next to the file it is read as an n x 2 array of coordinates.
CombinatorialGraph load_matrix_market(const std::filesystem::path& path);

enum class LengthRule { Unit, Euclidean };

/// Lengths from vertex coordinates; falls back to 1 when coordinates are
/// missing or two endpoints coincide.
std::vector<double> edge_lengths(const CombinatorialGraph& g, LengthRule rule);

/// Graph JSON:
/// { "vertices": [{"id", "x"?, "y"?, "type": "dirichlet"|"kirchhoff"}],
///   "edges": [{"u", "v", "length"?, "weight"?}] }
MetricGraph load_graph_json(const std::filesystem::path& path);
MetricGraph parse_graph_json(const std::string& text);
std::string to_graph_json(const MetricGraph& g);

}  // namespace mgoc::graphs
