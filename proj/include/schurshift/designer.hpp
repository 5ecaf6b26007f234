#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "schurshift/constraints.hpp"
#include "schurshift/graph.hpp"
#include "schurshift/subspace.hpp"

namespace schurshift {

/// Schur-form parameters of the shift: S = w (diag(d) + q) w^T.
struct SchurFactors {
    Eigen::MatrixXd w;  // orthogonal N x N, [W_par W_perp]
    Eigen::VectorXd d;  // diagonal of D; first r entries form D1
    Eigen::MatrixXd q;  // strictly upper triangular
};

struct DesignConfig {
    double epsilon = 1.0;       // trace(D1) = r * epsilon
    double rho = 0.1;           // ADMM penalty
    int i_max = 1000;           // ADMM iteration cap
    double residual_tol = 1e-8; // early stop on primal residual inf-norms
    double sep_tol = 1e-6;      // eigenvalue-separation tolerance (relative)
    double rank_tol = 1e-10;    // singular-value rank threshold (relative)
    int max_eps_retries = 10;
};

/// Raw ADMM output, before the structure projection.
struct AdmmResult {
    Eigen::MatrixXd d_mat;  // unvec of vec(D)
    Eigen::MatrixXd q_mat;  // unvec of vec(Q)
    // per-iteration inf-norms of the three primal residuals (topology, C-block, R-block)
    std::vector<std::array<double, 3>> residual_history;
    int iterations = 0;
};

/**
 * Scaled ADMM with the closed-form updates
 *   vec(Q) <- -(rho M^T M + I + rho R^T R)^{-1} rho (M^T (M vec(D) + v1) + R^T v3)
 *   vec(D) <- -(rho M^T M + rho C^T C + F^T F)^{-1} rho (M^T (M vec(Q) + v1) + C^T (v2 - b))
 *   v1 += M vec(D+Q);  v2 += C vec(D) - b;  v3 += R vec(Q)
 * All variables start at zero; the two system matrices are factorized once.
 * Stops early when all three residual inf-norms fall below residual_tol.
 * Throws std::runtime_error if a system matrix is numerically singular.
 */
AdmmResult admm_solve(const ConstraintSet& cs, const DesignConfig& cfg);

/// W = [u_par u_perp].
Eigen::MatrixXd choose_w(const SubspaceBasis& basis);

/// Hard-enforces the Schur structure: d = diag(d_mat), q = strict upper of
/// q_mat. The largest discarded magnitude is reported as structure residual.
struct ProjectedStructure {
    Eigen::VectorXd d;
    Eigen::MatrixXd q;
    double residual = 0.0;
};
ProjectedStructure project_structure(const Eigen::MatrixXd& d_mat, const Eigen::MatrixXd& q_mat);

/// min |d_i - d_j| over i < r <= j (cross-block eigenvalue separation).
double eigen_separation_margin(const Eigen::VectorXd& d, int r);

/**
 * Power-basis feasibility certificate. Columns are vec((D+Q)^l), l = 0..order,
 * restricted to upper-triangular-including-diagonal positions. All-zero rows
 * are dropped and diagonal rows of repeated eigenvalues within the same block
 * (split at r) are de-duplicated; the certificate holds when the SVD rank
 * (relative threshold rank_tol) equals min(retained rows, order+1).
 */
struct PowerBasisCertificate {
    Eigen::MatrixXd retained;  // rows kept after dropping/de-duplication
    int rank = 0;
    bool full_rank = false;
};
PowerBasisCertificate build_t_prime(const Eigen::VectorXd& d, const Eigen::MatrixXd& q,
                                    int r, int order, double rank_tol);

struct DesignDiagnostics {
    double objective = 0.0;           // ||q||_F^2 + sum_{i>=r} d_i^2
    double topo_residual = 0.0;       // max |S| over inadmissible entries
    double trace_residual = 0.0;      // |trace(D1) - r*eps|
    double structure_residual = 0.0;  // discarded mass in project_structure
    double sep_margin = 0.0;
    bool sep_pass = false;
    bool tprime_full_rank = false;
    bool feasible = false;  // both checks passed
    double epsilon_used = 0.0;
    int iterations = 0;
    int eps_retries = 0;
};

struct DesignResult {
    Eigen::MatrixXd shift;
    SchurFactors factors;
    DesignDiagnostics diagnostics;
};

/**
 * Full design pass: choose W, assemble constraints, ADMM, structure
 * projection, then the eigenvalue-separation and power-basis checks at
 * order N-1. On a failed check epsilon is scaled by a deterministic factor
 * in [0.5, 2] and the solve repeats, up to max_eps_retries; if no attempt
 * passes, the attempt with the smallest final primal residual is returned
 * with diagnostics.feasible = false.
 */
DesignResult design_shift(const DirectedGraph& g, const SubspaceBasis& basis,
                          const DesignConfig& cfg);

/// Flat key-value JSON with the pinned diagnostic keys.
std::string diagnostics_json(const DesignResult& result);

}  // namespace schurshift
