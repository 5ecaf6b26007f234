#pragma once

#include <Eigen/Dense>
#include <vector>

#include "schurshift/graph.hpp"

namespace schurshift {

// Vectorization is column-major throughout: vec(Z)(col*N + row) = Z(row, col),
// so vec(ABC) = (C^T kron A) vec(B). Selector rows are enumerated in
// column-major scan order (column outer, row inner).

/// A 0/1 selector: each row extracts one entry of an N*N vec.
struct SelectorMatrix {
    std::vector<int> positions;  // vec index selected by each row
    int cols = 0;                // N*N

    int rows() const { return static_cast<int>(positions.size()); }

    /// y = T x (gather).
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y(rows());
        for (int k = 0; k < rows(); ++k) y[k] = x[positions[k]];
        return y;
    }

    /// x = T^T y (scatter).
    Eigen::VectorXd scatter(const Eigen::VectorXd& y) const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
        for (int k = 0; k < rows(); ++k) x[positions[k]] += y[k];
        return x;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows(), cols);
        for (int k = 0; k < rows(); ++k) t(k, positions[k]) = 1.0;
        return t;
    }
};

/// One row per inadmissible entry (i, j) of S: j not an in-neighbor of i,
/// including every diagonal entry. The row extracts S(i, j) from vec(S).
SelectorMatrix build_topology_selector(const DirectedGraph& g);

/// M = t_topo (W kron W); M vec(Z) collects the inadmissible entries of W Z W^T.
Eigen::MatrixXd build_m(const SelectorMatrix& t_topo, const Eigen::MatrixXd& w);

struct StructureSelectors {
    SelectorMatrix f;           // trailing N-r diagonal entries of D
    SelectorMatrix x_offdiag;   // all N^2-N off-diagonal entries of D
    SelectorMatrix trace_rows;  // leading r diagonal entries (summed by the trace row)
    SelectorMatrix r_lower;     // lower-triangular-including-diagonal entries of Q
};

StructureSelectors build_structure_selectors(int n, int r);

/**
 * Everything the vectorized program needs. The stacked equality block on D is
 * C = [trace_row; x_offdiag] with right-hand side b = [r*eps; 0; ...; 0].
 */
struct ConstraintSet {
    int n = 0;
    int r = 0;
    double epsilon = 0.0;
    SelectorMatrix t_topo;
    Eigen::MatrixXd m;  // t_topo rows of (W kron W)
    SelectorMatrix f;
    SelectorMatrix x_offdiag;
    SelectorMatrix trace_rows;
    SelectorMatrix r_lower;
    Eigen::VectorXd b;  // length 1 + x_offdiag rows

    int c_rows() const { return 1 + x_offdiag.rows(); }

    /// [trace_row; x_offdiag] * x
    Eigen::VectorXd apply_c(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y(c_rows());
        double tr = 0.0;
        for (int p : trace_rows.positions) tr += x[p];
        y[0] = tr;
        y.tail(x_offdiag.rows()) = x_offdiag.apply(x);
        return y;
    }

    /// [trace_row; x_offdiag]^T * y
    Eigen::VectorXd apply_c_transpose(const Eigen::VectorXd& y) const {
        Eigen::VectorXd x = x_offdiag.scatter(y.tail(x_offdiag.rows()));
        for (int p : trace_rows.positions) x[p] += y[0];
        return x;
    }
};

ConstraintSet assemble_constraints(const DirectedGraph& g, const Eigen::MatrixXd& w,
                                   int r, double epsilon);

}  // namespace schurshift
