#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace schurshift {

enum class FilterMode { shared, per_node };

/**
 * Polynomial graph filter of order L: either one shared coefficient vector
 * c_0..c_L (H = sum_l c_l S^l) or one row of coefficients per node
 * (row n of H is sum_l C(n, l) (S^l) row n).
 */
struct GraphFilter {
    int order = 0;
    FilterMode mode = FilterMode::shared;
    Eigen::VectorXd coeffs_shared;   // length order+1 (shared mode)
    Eigen::MatrixXd coeffs_pernode;  // N x (order+1)   (per-node mode)
    double fit_residual = 0.0;       // relative Frobenius (shared) / max relative row error (per-node)
};

/// S^0..S^L computed once and reused by the fitting routines.
std::vector<Eigen::MatrixXd> shift_powers(const Eigen::MatrixXd& s, int order);

/// Least-squares fit of [vec(S^0)|...|vec(S^L)] c = vec(P); minimum-norm
/// solution on rank deficiency (SVD, relative cutoff 1e-12).
GraphFilter fit_coefficients_shared(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p, int order);
GraphFilter fit_coefficients_shared(const std::vector<Eigen::MatrixXd>& powers,
                                    const Eigen::MatrixXd& p, int order);

/// Independent least-squares row fits, one coefficient set per node.
GraphFilter fit_coefficients_pernode(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p, int order);
GraphFilter fit_coefficients_pernode(const std::vector<Eigen::MatrixXd>& powers,
                                     const Eigen::MatrixXd& p, int order);

/// Smallest L in 0..N-1 whose shared fit reaches fit_residual <= tol, if any.
std::optional<int> minimal_order(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p, double tol);

/// The filter's matrix response H.
Eigen::MatrixXd filter_response(const GraphFilter& filter, const std::vector<Eigen::MatrixXd>& powers);
Eigen::MatrixXd filter_response(const GraphFilter& filter, const Eigen::MatrixXd& s);

/// JSON document {order, mode, coefficients, fit_residual}.
std::string filter_json(const GraphFilter& filter);
GraphFilter filter_from_json(const std::string& text);

}  // namespace schurshift
