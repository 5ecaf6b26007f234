#include "schurshift/baselines.hpp"

#include <stdexcept>

namespace schurshift {

std::string method_label(ShiftMethod method) {
    switch (method) {
        case ShiftMethod::designed: return "designed";
        case ShiftMethod::adjacency: return "adjacency";
        case ShiftMethod::laplacian: return "laplacian";
        case ShiftMethod::least_squares: return "ls";
    }
    throw std::logic_error("method_label: unreachable");
}

ShiftMethod method_from_label(const std::string& label) {
    if (label == "designed") return ShiftMethod::designed;
    if (label == "adjacency") return ShiftMethod::adjacency;
    if (label == "laplacian") return ShiftMethod::laplacian;
    if (label == "ls") return ShiftMethod::least_squares;
    throw std::invalid_argument("unknown shift method label: " + label);
}

Eigen::MatrixXd ls_shift(const DirectedGraph& g, const Eigen::MatrixXd& p) {
    const int n = g.node_count();
    if (p.rows() != n || p.cols() != n)
        throw std::invalid_argument("ls_shift: target dimension mismatch");
    // Entrywise separable least squares: copy P on the admissible support.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (g.entry_allowed(i, j)) s(i, j) = p(i, j);
    return s;
}

Eigen::MatrixXd baseline_shift(const DirectedGraph& g, ShiftMethod method) {
    switch (method) {
        case ShiftMethod::adjacency: return adjacency_matrix(g);
        case ShiftMethod::laplacian: return laplacian_matrix(g);
        default:
            throw std::invalid_argument("baseline_shift: method must be adjacency or laplacian");
    }
}

}  // namespace schurshift
