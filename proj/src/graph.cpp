#include "schurshift/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "schurshift/rng.hpp"

namespace schurshift {

DirectedGraph::DirectedGraph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("DirectedGraph: node count must be positive");
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    in_adj_.assign(n_, {});
    out_adj_.assign(n_, {});
    for (const auto& [tail, head] : edges_) {
        if (tail < 0 || tail >= n_ || head < 0 || head >= n_)
            throw std::invalid_argument("DirectedGraph: edge index out of range");
        if (tail == head)
            throw std::invalid_argument("DirectedGraph: self-loop edges are not allowed");
        adj_[static_cast<std::size_t>(tail) * n_ + head] = 1;
        out_adj_[tail].push_back(head);
        in_adj_[head].push_back(tail);
    }
}

namespace {

bool reaches_all(int n, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

}  // namespace

bool is_strongly_connected(const DirectedGraph& g) {
    const int n = g.node_count();
    if (n == 1) return true;
    std::vector<std::vector<int>> fwd(n), bwd(n);
    for (const auto& [tail, head] : g.edges()) {
        fwd[tail].push_back(head);
        bwd[head].push_back(tail);
    }
    return reaches_all(n, fwd) && reaches_all(n, bwd);
}

DirectedGraph generate_erdos_renyi(int n, double p_edge, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_erdos_renyi: n must be at least 2");
    if (!(p_edge > 0.0) || p_edge > 1.0)
        throw std::invalid_argument("generate_erdos_renyi: p_edge must be in (0, 1]");
    Rng rng(seed);
    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int tail = 0; tail < n; ++tail) {
            for (int head = 0; head < n; ++head) {
                if (tail == head) continue;
                if (rng.bernoulli(p_edge)) edges.emplace_back(tail, head);
            }
        }
        DirectedGraph g(n, std::move(edges));
        if (is_strongly_connected(g)) return g;
    }
    std::ostringstream msg;
    msg << "generate_erdos_renyi: no strongly connected graph within " << kMaxAttempts
        << " attempts (n=" << n << ", p_edge=" << p_edge << "); p_edge too small for n";
    throw std::runtime_error(msg.str());
}

Eigen::MatrixXd adjacency_matrix(const DirectedGraph& g) {
    const int n = g.node_count();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [tail, head] : g.edges()) a(head, tail) = 1.0;
    return a;
}

Eigen::MatrixXd laplacian_matrix(const DirectedGraph& g) {
    Eigen::MatrixXd a = adjacency_matrix(g);
    Eigen::MatrixXd l = -a;
    l.diagonal() += a.rowwise().sum();
    return l;
}

DirectedGraph read_edge_list(std::istream& in) {
    int n = 0;
    long m = 0;
    if (!(in >> n >> m)) throw std::runtime_error("edge list: missing 'n m' header");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(std::max(m, 0L)));
    for (long k = 0; k < m; ++k) {
        int tail = 0, head = 0;
        if (!(in >> tail >> head)) throw std::runtime_error("edge list: truncated edge line");
        if (tail < 0 || tail >= n || head < 0 || head >= n)
            throw std::runtime_error("edge list: node index out of range");
        if (tail == head) throw std::runtime_error("edge list: self-loop rejected");
        edges.emplace_back(tail, head);
    }
    return DirectedGraph(n, std::move(edges));
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [tail, head] : g.edges()) out << tail << ' ' << head << '\n';
}

DirectedGraph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);
    return read_edge_list(in);
}

}  // namespace schurshift
