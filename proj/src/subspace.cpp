#include "schurshift/subspace.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "schurshift/rng.hpp"

namespace schurshift {

SubspaceBasis random_subspace(int n, int r, std::uint64_t seed) {
    if (r < 1 || r >= n) throw std::invalid_argument("random_subspace: need 1 <= r < n");
    Rng rng(seed);
    Eigen::MatrixXd gauss(n, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) gauss(i, j) = rng.normal();

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    Eigen::MatrixXd full_q = qr.householderQ();  // n x n
    Eigen::MatrixXd rfac = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();

    // Fix signs so the triangular factor has a nonnegative diagonal; the basis
    // is then a deterministic function of the Gaussian draw.
    for (int j = 0; j < r; ++j)
        if (rfac(j, j) < 0.0) full_q.col(j) = -full_q.col(j);

    SubspaceBasis basis;
    basis.u_par = full_q.leftCols(r);
    basis.u_perp = full_q.rightCols(n - r);
    basis.proj = basis.u_par * basis.u_par.transpose();
    return basis;
}

SignalSample generate_signal(const SubspaceBasis& basis, double beta, std::uint64_t seed) {
    if (!(beta > 0.0)) throw std::invalid_argument("generate_signal: beta must be positive");
    const int n = basis.n();
    const int r = basis.r();
    Rng rng(seed);
    SignalSample s;
    s.alpha.resize(r);
    for (int i = 0; i < r; ++i) s.alpha[i] = rng.normal();
    s.v.resize(n);
    for (int i = 0; i < n; ++i) s.v[i] = rng.normal();
    s.xi = beta * std::sqrt(static_cast<double>(n) / r) * (basis.u_par * s.alpha);
    s.z = s.xi + s.v;
    return s;
}

}  // namespace schurshift
