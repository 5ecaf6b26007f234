#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace schurshift {

/**
 * Directed graph on nodes 0..n-1. Edges are ordered (tail, head) pairs;
 * an edge (j, i) makes j an in-neighbor of i, so node i can use y_j in a
 * local update. Self-loops are never stored and never exist: a shift entry
 * S(i, j) is admissible iff (j, i) is an edge, and diagonal entries are
 * inadmissible like any other non-edge.
 *
 * Immutable after construction; safe to share across threads.
 */
class DirectedGraph {
public:
    DirectedGraph(int n, std::vector<std::pair<int, int>> edges);

    int node_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    long edge_count() const { return static_cast<long>(edges_.size()); }

    bool has_edge(int tail, int head) const { return adj_[static_cast<std::size_t>(tail) * n_ + head]; }
    /// True iff S(i, j) may be nonzero: j is an in-neighbor of i.
    bool entry_allowed(int i, int j) const { return i != j && has_edge(j, i); }

    const std::vector<int>& in_neighbors(int node) const { return in_adj_[node]; }
    const std::vector<int>& out_neighbors(int node) const { return out_adj_[node]; }

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<char> adj_;
    std::vector<std::vector<int>> in_adj_, out_adj_;
};

/// Each ordered pair (i, j), i != j, kept with probability p_edge; regenerated
/// until strongly connected (at most 1000 attempts). Deterministic given seed.
DirectedGraph generate_erdos_renyi(int n, double p_edge, std::uint64_t seed);

bool is_strongly_connected(const DirectedGraph& g);

/// A(i, j) = 1 iff j is an in-neighbor of i; zero diagonal.
Eigen::MatrixXd adjacency_matrix(const DirectedGraph& g);

/// L = D_in - A with D_in the diagonal of in-degrees; rows sum to zero.
Eigen::MatrixXd laplacian_matrix(const DirectedGraph& g);

/// Text format: "n m" then m lines "tail head" (0-based).
DirectedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const DirectedGraph& g);
DirectedGraph read_edge_list_file(const std::string& path);

}  // namespace schurshift
