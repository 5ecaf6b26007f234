#include "schurshift/designer.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "schurshift/rng.hpp"

namespace schurshift {

Eigen::MatrixXd choose_w(const SubspaceBasis& basis) {
    const int n = basis.n();
    const int r = basis.r();
    Eigen::MatrixXd w(n, n);
    w.leftCols(r) = basis.u_par;
    w.rightCols(n - r) = basis.u_perp;
    return w;
}

namespace {

void check_factorization(const Eigen::LDLT<Eigen::MatrixXd>& ldlt, const char* which) {
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error(std::string("admm_solve: LDLT failed for ") + which);
    const Eigen::VectorXd dvec = ldlt.vectorD().cwiseAbs();
    const double dmax = dvec.maxCoeff();
    if (!(dmax > 0.0) || dvec.minCoeff() < 1e-13 * dmax)
        throw std::runtime_error(std::string("admm_solve: system matrix numerically singular (") +
                                 which + "); degenerate constraint set");
}

}  // namespace

AdmmResult admm_solve(const ConstraintSet& cs, const DesignConfig& cfg) {
    const int n = cs.n;
    const int nn = n * n;
    const double rho = cfg.rho;
    const int k_topo = cs.t_topo.rows();

    // Both system matrices share the rho M^T M block; built and factorized once.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nn, nn);
    if (k_topo > 0) gram.noalias() = cs.m.transpose() * cs.m;

    Eigen::MatrixXd a_q = rho * gram;
    a_q.diagonal().array() += 1.0;
    for (int p : cs.r_lower.positions) a_q(p, p) += rho;

    Eigen::MatrixXd a_d = rho * gram;
    for (int p : cs.x_offdiag.positions) a_d(p, p) += rho;
    for (int p : cs.f.positions) a_d(p, p) += 1.0;
    for (int pa : cs.trace_rows.positions)
        for (int pb : cs.trace_rows.positions) a_d(pa, pb) += rho;

    Eigen::LDLT<Eigen::MatrixXd> solve_q(a_q);
    check_factorization(solve_q, "Q-update");
    Eigen::LDLT<Eigen::MatrixXd> solve_d(a_d);
    check_factorization(solve_d, "D-update");

    Eigen::VectorXd vec_d = Eigen::VectorXd::Zero(nn);
    Eigen::VectorXd vec_q = Eigen::VectorXd::Zero(nn);
    Eigen::VectorXd v1 = Eigen::VectorXd::Zero(k_topo);
    Eigen::VectorXd v2 = Eigen::VectorXd::Zero(cs.c_rows());
    Eigen::VectorXd v3 = Eigen::VectorXd::Zero(cs.r_lower.rows());

    AdmmResult out;
    out.residual_history.reserve(cfg.i_max);
    Eigen::VectorXd mt_v1 = Eigen::VectorXd::Zero(nn);
    for (int it = 0; it < cfg.i_max; ++it) {
        if (k_topo > 0) mt_v1.noalias() = cs.m.transpose() * v1;

        Eigen::VectorXd rhs_q = gram * vec_d + mt_v1 + cs.r_lower.scatter(v3);
        vec_q.noalias() = -solve_q.solve((rho * rhs_q).eval());

        Eigen::VectorXd rhs_d = gram * vec_q + mt_v1 + cs.apply_c_transpose(v2 - cs.b);
        vec_d.noalias() = -solve_d.solve((rho * rhs_d).eval());

        double res1 = 0.0;
        if (k_topo > 0) {
            Eigen::VectorXd r1 = cs.m * (vec_d + vec_q);
            v1 += r1;
            res1 = r1.lpNorm<Eigen::Infinity>();
        }
        Eigen::VectorXd r2 = cs.apply_c(vec_d) - cs.b;
        v2 += r2;
        Eigen::VectorXd r3 = cs.r_lower.apply(vec_q);
        v3 += r3;

        out.residual_history.push_back(
            {res1, r2.lpNorm<Eigen::Infinity>(), r3.lpNorm<Eigen::Infinity>()});
        out.iterations = it + 1;
        const auto& res = out.residual_history.back();
        if (std::max({res[0], res[1], res[2]}) <= cfg.residual_tol) break;
    }

    out.d_mat = Eigen::Map<const Eigen::MatrixXd>(vec_d.data(), n, n);
    out.q_mat = Eigen::Map<const Eigen::MatrixXd>(vec_q.data(), n, n);
    return out;
}

ProjectedStructure project_structure(const Eigen::MatrixXd& d_mat, const Eigen::MatrixXd& q_mat) {
    const int n = static_cast<int>(d_mat.rows());
    ProjectedStructure out;
    out.d = d_mat.diagonal();
    out.q = Eigen::MatrixXd::Zero(n, n);
    double discarded = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i != j) discarded = std::max(discarded, std::abs(d_mat(i, j)));
            if (i < j)
                out.q(i, j) = q_mat(i, j);
            else
                discarded = std::max(discarded, std::abs(q_mat(i, j)));
        }
    }
    out.residual = discarded;
    return out;
}

double eigen_separation_margin(const Eigen::VectorXd& d, int r) {
    const int n = static_cast<int>(d.size());
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < r; ++i)
        for (int j = r; j < n; ++j) margin = std::min(margin, std::abs(d[i] - d[j]));
    return margin;
}

PowerBasisCertificate build_t_prime(const Eigen::VectorXd& d, const Eigen::MatrixXd& q,
                                    int r, int order, double rank_tol) {
    if (order < 1) throw std::invalid_argument("build_t_prime: order must be at least 1");
    const int n = static_cast<int>(d.size());
    Eigen::MatrixXd z = q;
    z.diagonal() = d;

    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    const int n1 = n * (n + 1) / 2;
    Eigen::MatrixXd t(n1, order + 1);
    for (int l = 0; l <= order; ++l) {
        if (l > 0) power = (z * power).eval();
        int row = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i) t(row++, l) = power(i, j);
    }

    // Rows of exactly-zero products drop out; duplicated eigenvalue rows within
    // a diagonal block collapse to one representative. Duplicates across the
    // two blocks are kept: they are the separation failure the rank must expose.
    const double zero_tol = 1e-12 * std::max(1.0, t.cwiseAbs().maxCoeff());
    const double dup_tol = 1e-9 * std::max(1.0, d.cwiseAbs().maxCoeff());

    std::vector<int> keep;
    int row = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i, ++row) {
            if (t.row(row).cwiseAbs().maxCoeff() <= zero_tol) continue;
            keep.push_back(row);
        }
    }

    // Diagonal position (j, j) sits at row offset j(j+1)/2 + j in the scan.
    auto diag_row = [](int j) { return j * (j + 1) / 2 + j; };
    std::vector<char> drop(n1, 0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const bool same_block = (i < r) == (j < r);
            if (same_block && std::abs(d[i] - d[j]) <= dup_tol) {
                drop[diag_row(j)] = 1;  // keep the first occurrence only
                break;
            }
        }
    }

    PowerBasisCertificate cert;
    std::vector<int> rows_kept;
    for (int kr : keep)
        if (!drop[kr]) rows_kept.push_back(kr);
    cert.retained.resize(static_cast<int>(rows_kept.size()), order + 1);
    for (int k = 0; k < static_cast<int>(rows_kept.size()); ++k)
        cert.retained.row(k) = t.row(rows_kept[k]);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(cert.retained);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    cert.rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol * smax) ++cert.rank;
    cert.full_rank =
        cert.rank == std::min<int>(static_cast<int>(cert.retained.rows()), order + 1);
    return cert;
}

namespace {

// Deterministic retry factor in [0.5, 2): 2^(2u-1) with u derived from the attempt index.
double epsilon_retry_factor(int attempt) {
    const double u = static_cast<double>(mix64(0x5eedf00dULL + attempt) >> 11) * 0x1.0p-53;
    return std::exp2(2.0 * u - 1.0);
}

}  // namespace

DesignResult design_shift(const DirectedGraph& g, const SubspaceBasis& basis,
                          const DesignConfig& cfg) {
    if (g.node_count() != basis.n())
        throw std::invalid_argument("design_shift: graph/basis dimension mismatch");
    if (!is_strongly_connected(g))
        throw std::invalid_argument("design_shift: graph must be strongly connected");
    const int n = g.node_count();
    const int r = basis.r();
    const Eigen::MatrixXd w = choose_w(basis);

    double eps = cfg.epsilon;
    DesignResult best;
    double best_primal = std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (int attempt = 0; attempt <= cfg.max_eps_retries; ++attempt) {
        ConstraintSet cs = assemble_constraints(g, w, r, eps);
        AdmmResult admm = admm_solve(cs, cfg);
        ProjectedStructure proj = project_structure(admm.d_mat, admm.q_mat);

        DesignResult result;
        result.factors.w = w;
        result.factors.d = proj.d;
        result.factors.q = proj.q;
        Eigen::MatrixXd z = proj.q;
        z.diagonal() = proj.d;
        result.shift = w * z * w.transpose();

        DesignDiagnostics& diag = result.diagnostics;
        diag.objective = proj.q.squaredNorm() + proj.d.tail(n - r).squaredNorm();
        Eigen::Map<const Eigen::VectorXd> vec_s(result.shift.data(), n * n);
        diag.topo_residual =
            cs.t_topo.rows() > 0 ? cs.t_topo.apply(vec_s).lpNorm<Eigen::Infinity>() : 0.0;
        diag.trace_residual = std::abs(proj.d.head(r).sum() - r * eps);
        diag.structure_residual = proj.residual;
        diag.sep_margin = eigen_separation_margin(proj.d, r);
        diag.sep_pass =
            diag.sep_margin > cfg.sep_tol * std::max(1.0, proj.d.cwiseAbs().maxCoeff());
        diag.tprime_full_rank = build_t_prime(proj.d, proj.q, r, n - 1, cfg.rank_tol).full_rank;
        diag.feasible = diag.sep_pass && diag.tprime_full_rank;
        diag.epsilon_used = eps;
        diag.iterations = admm.iterations;
        diag.eps_retries = attempt;

        if (diag.feasible) return result;

        const auto& last = admm.residual_history.back();
        const double primal = std::max({last[0], last[1], last[2]});
        if (!have_best || primal < best_primal) {
            best = result;
            best_primal = primal;
            have_best = true;
        }
        eps *= epsilon_retry_factor(attempt);
    }
    return best;  // flagged approximate: feasible == false
}

std::string diagnostics_json(const DesignResult& result) {
    nlohmann::ordered_json j;
    j["objective"] = result.diagnostics.objective;
    j["topo_residual"] = result.diagnostics.topo_residual;
    j["trace_residual"] = result.diagnostics.trace_residual;
    j["sep_margin"] = result.diagnostics.sep_margin;
    j["tprime_full_rank"] = result.diagnostics.tprime_full_rank;
    j["epsilon_used"] = result.diagnostics.epsilon_used;
    j["iterations"] = result.diagnostics.iterations;
    return j.dump(2) + "\n";
}

}  // namespace schurshift
