#include "schurshift/constraints.hpp"

#include <stdexcept>

namespace schurshift {

SelectorMatrix build_topology_selector(const DirectedGraph& g) {
    const int n = g.node_count();
    SelectorMatrix t;
    t.cols = n * n;
    // Column-major scan: column j outer, row i inner. Row count is N^2 - |E|.
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!g.entry_allowed(i, j)) t.positions.push_back(j * n + i);
    return t;
}

Eigen::MatrixXd build_m(const SelectorMatrix& t_topo, const Eigen::MatrixXd& w) {
    const int n = static_cast<int>(w.rows());
    if (t_topo.cols != n * n) throw std::invalid_argument("build_m: selector/W size mismatch");
    Eigen::MatrixXd m(t_topo.rows(), n * n);
    for (int k = 0; k < t_topo.rows(); ++k) {
        const int i = t_topo.positions[k] % n;  // entry (i, j) of W Z W^T
        const int j = t_topo.positions[k] / n;
        // (W Z W^T)(i, j) = sum_{a,b} W(j, b) W(i, a) Z(a, b) = kron(W.row(j), W.row(i)) vec(Z)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) m(k, b * n + a) = w(j, b) * w(i, a);
    }
    return m;
}

StructureSelectors build_structure_selectors(int n, int r) {
    if (r < 1 || r >= n) throw std::invalid_argument("build_structure_selectors: need 1 <= r < n");
    StructureSelectors s;
    s.f.cols = s.x_offdiag.cols = s.trace_rows.cols = s.r_lower.cols = n * n;
    for (int i = r; i < n; ++i) s.f.positions.push_back(i * n + i);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i != j) s.x_offdiag.positions.push_back(j * n + i);
    for (int i = 0; i < r; ++i) s.trace_rows.positions.push_back(i * n + i);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) s.r_lower.positions.push_back(j * n + i);
    return s;
}

ConstraintSet assemble_constraints(const DirectedGraph& g, const Eigen::MatrixXd& w,
                                   int r, double epsilon) {
    const int n = g.node_count();
    if (w.rows() != n || w.cols() != n)
        throw std::invalid_argument("assemble_constraints: W must be N x N");
    ConstraintSet cs;
    cs.n = n;
    cs.r = r;
    cs.epsilon = epsilon;
    cs.t_topo = build_topology_selector(g);
    cs.m = build_m(cs.t_topo, w);
    StructureSelectors sel = build_structure_selectors(n, r);
    cs.f = std::move(sel.f);
    cs.x_offdiag = std::move(sel.x_offdiag);
    cs.trace_rows = std::move(sel.trace_rows);
    cs.r_lower = std::move(sel.r_lower);
    cs.b = Eigen::VectorXd::Zero(cs.c_rows());
    cs.b[0] = r * epsilon;
    return cs;
}

}  // namespace schurshift
