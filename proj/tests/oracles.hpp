// Independent reference computations used only by the tests. Everything here
// takes a different algorithmic route than the library code it checks.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "schurshift/constraints.hpp"

namespace schurshift::testing {

/// Equality-constrained QP oracle for the vectorized program:
///   min ||vec(Q)||^2 + ||F vec(D)||^2
///   s.t. M vec(D+Q) = 0, [trace; offdiag] vec(D) = b, R vec(Q) = 0
/// solved by the nullspace method (SVD null basis + reduced normal equations),
/// entirely independent of the ADMM path. Returns (d_mat, q_mat).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> qp_oracle(const ConstraintSet& cs);

/// Objective value on Schur parameters: ||strictupper(q)||_F^2 + sum_{i>=r} d_i^2.
double schur_objective(const Eigen::MatrixXd& d_mat, const Eigen::MatrixXd& q_mat, int r);

/// Shared-coefficient fit by explicit normal equations with Tikhonov-free
/// pseudoinverse via eigen-decomposition of the Gram matrix.
Eigen::VectorXd shared_fit_normal_equations(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p,
                                            int order);

/// Row fit for one node by the same normal-equations route.
Eigen::VectorXd row_fit_normal_equations(const Eigen::MatrixXd& s, const Eigen::RowVectorXd& row,
                                         int node, int order);

/// Numerical rank by Jacobi SVD with a relative threshold.
int svd_rank(const Eigen::MatrixXd& m, double rel_tol);

/// Reachability check by iterated boolean matrix products (independent of the
/// library's BFS).
bool strongly_connected_matrix_power(const Eigen::MatrixXd& adjacency);

}  // namespace schurshift::testing
