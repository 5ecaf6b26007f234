#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace schurshift {

/**
 * Orthonormal basis of the useful-signal subspace together with its
 * orthogonal complement and the projection matrix proj = u_par * u_par^T.
 */
struct SubspaceBasis {
    Eigen::MatrixXd u_par;   // N x r, orthonormal columns
    Eigen::MatrixXd u_perp;  // N x (N-r), orthonormal columns spanning the complement
    Eigen::MatrixXd proj;    // N x N projection onto range(u_par)

    int n() const { return static_cast<int>(u_par.rows()); }
    int r() const { return static_cast<int>(u_par.cols()); }
};

/// Orthonormalizes an N x r standard-Gaussian matrix (QR with nonnegative
/// R diagonal so the basis is deterministic); u_perp comes from the trailing
/// columns of the full orthogonal factor. Requires 1 <= r < n.
SubspaceBasis random_subspace(int n, int r, std::uint64_t seed);

/// One observation of the linear model z = xi + v with xi = beta*sqrt(N/r)*u_par*alpha.
struct SignalSample {
    Eigen::VectorXd z;      // observation
    Eigen::VectorXd xi;     // useful signal, lies in range(u_par)
    Eigen::VectorXd alpha;  // r-dim standard normal coordinates
    Eigen::VectorXd v;      // N-dim standard normal noise
};

/// alpha is drawn before v; both i.i.d. standard normal. Requires beta > 0.
SignalSample generate_signal(const SubspaceBasis& basis, double beta, std::uint64_t seed);

}  // namespace schurshift
