#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

namespace schurshift::testing {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> qp_oracle(const ConstraintSet& cs) {
    const int n = cs.n;
    const int nn = n * n;
    const int rows_m = cs.t_topo.rows();
    const int rows_c = cs.c_rows();
    const int rows_r = cs.r_lower.rows();

    // Stacked constraints A x = rhs over x = [vec(D); vec(Q)].
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows_m + rows_c + rows_r, 2 * nn);
    if (rows_m > 0) {
        a.block(0, 0, rows_m, nn) = cs.m;
        a.block(0, nn, rows_m, nn) = cs.m;
    }
    for (int p : cs.trace_rows.positions) a(rows_m, p) = 1.0;
    for (int k = 0; k < cs.x_offdiag.rows(); ++k)
        a(rows_m + 1 + k, cs.x_offdiag.positions[k]) = 1.0;
    for (int k = 0; k < rows_r; ++k) a(rows_m + rows_c + k, nn + cs.r_lower.positions[k]) = 1.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
    rhs.segment(rows_m, rows_c) = cs.b;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-12 * smax) ++rank;

    // Minimum-norm particular solution and a null-space basis.
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2 * nn);
    for (int i = 0; i < rank; ++i)
        x0 += (svd.matrixU().col(i).dot(rhs) / sv[i]) * svd.matrixV().col(i);
    Eigen::MatrixXd z = svd.matrixV().rightCols(2 * nn - rank);

    // Objective Hessian: 2 on F-selected D entries, 2 on all Q entries.
    Eigen::VectorXd h = Eigen::VectorXd::Zero(2 * nn);
    for (int p : cs.f.positions) h[p] = 2.0;
    h.tail(nn).setConstant(2.0);

    Eigen::MatrixXd hz = h.asDiagonal() * z;
    Eigen::MatrixXd reduced = z.transpose() * hz;
    Eigen::VectorXd grad = z.transpose() * (h.asDiagonal() * x0);
    // reduced is PSD and may be singular; take the pseudoinverse solution.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(z.cols());
    const double lmax = eig.eigenvalues().size() > 0 ? eig.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
        const double lambda = eig.eigenvalues()[i];
        if (lambda > 1e-12 * std::max(lmax, 1.0)) {
            y -= eig.eigenvectors().col(i) * (eig.eigenvectors().col(i).dot(grad) / lambda);
        }
    }
    Eigen::VectorXd x = x0 + z * y;
    Eigen::MatrixXd d_mat = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
    Eigen::MatrixXd q_mat = Eigen::Map<const Eigen::MatrixXd>(x.data() + nn, n, n);
    return {d_mat, q_mat};
}

double schur_objective(const Eigen::MatrixXd& d_mat, const Eigen::MatrixXd& q_mat, int r) {
    const int n = static_cast<int>(d_mat.rows());
    double obj = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) obj += q_mat(i, j) * q_mat(i, j);
    for (int i = r; i < n; ++i) obj += d_mat(i, i) * d_mat(i, i);
    return obj;
}

namespace {
Eigen::MatrixXd power_column_matrix(const Eigen::MatrixXd& s, int order, int nn) {
    const int n = static_cast<int>(s.rows());
    Eigen::MatrixXd a(nn, order + 1);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    for (int l = 0; l <= order; ++l) {
        if (l > 0) power = s * power;
        a.col(l) = Eigen::Map<const Eigen::VectorXd>(power.data(), nn);
    }
    return a;
}

Eigen::VectorXd pinv_normal_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
    Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::VectorXd atb = a.transpose() * rhs;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const double lmax = eig.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(a.cols());
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
        // keep directions above the square of the 1e-12 singular-value cutoff
        const double lambda = eig.eigenvalues()[i];
        if (lambda > 1e-24 * std::max(lmax, 1e-300))
            c += eig.eigenvectors().col(i) * (eig.eigenvectors().col(i).dot(atb) / lambda);
    }
    return c;
}
}  // namespace

Eigen::VectorXd shared_fit_normal_equations(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p,
                                            int order) {
    const int nn = static_cast<int>(s.rows() * s.rows());
    Eigen::MatrixXd a = power_column_matrix(s, order, nn);
    Eigen::Map<const Eigen::VectorXd> target(p.data(), nn);
    return pinv_normal_solve(a, target);
}

Eigen::VectorXd row_fit_normal_equations(const Eigen::MatrixXd& s, const Eigen::RowVectorXd& row,
                                         int node, int order) {
    const int n = static_cast<int>(s.rows());
    Eigen::MatrixXd a(n, order + 1);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    for (int l = 0; l <= order; ++l) {
        if (l > 0) power = s * power;
        a.col(l) = power.row(node).transpose();
    }
    return pinv_normal_solve(a, row.transpose());
}

int svd_rank(const Eigen::MatrixXd& m, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * sv[0]) ++rank;
    return rank;
}

bool strongly_connected_matrix_power(const Eigen::MatrixXd& adjacency) {
    const int n = static_cast<int>(adjacency.rows());
    Eigen::MatrixXd reach = Eigen::MatrixXd::Identity(n, n) + adjacency;
    for (int step = 1; step < n; step *= 2) {
        reach = reach * reach;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) reach(i, j) = reach(i, j) > 0.0 ? 1.0 : 0.0;
    }
    return (reach.array() > 0.0).all();
}

}  // namespace schurshift::testing
