#include "schurshift/filters.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace schurshift {

namespace {
constexpr double kPinvCutoff = 1e-12;  // relative singular-value cutoff

Eigen::VectorXd minimum_norm_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kPinvCutoff);
    return svd.solve(rhs);
}
}  // namespace

std::vector<Eigen::MatrixXd> shift_powers(const Eigen::MatrixXd& s, int order) {
    const int n = static_cast<int>(s.rows());
    std::vector<Eigen::MatrixXd> powers;
    powers.reserve(order + 1);
    powers.push_back(Eigen::MatrixXd::Identity(n, n));
    for (int l = 1; l <= order; ++l) powers.push_back(s * powers.back());
    return powers;
}

GraphFilter fit_coefficients_shared(const std::vector<Eigen::MatrixXd>& powers,
                                    const Eigen::MatrixXd& p, int order) {
    if (order < 0) throw std::invalid_argument("fit_coefficients_shared: order must be >= 0");
    const int n = static_cast<int>(p.rows());
    const int nn = n * n;
    Eigen::MatrixXd a(nn, order + 1);
    for (int l = 0; l <= order; ++l)
        a.col(l) = Eigen::Map<const Eigen::VectorXd>(powers[l].data(), nn);
    Eigen::Map<const Eigen::VectorXd> target(p.data(), nn);

    GraphFilter filter;
    filter.order = order;
    filter.mode = FilterMode::shared;
    filter.coeffs_shared = minimum_norm_solve(a, target);
    const double pnorm = target.norm();
    filter.fit_residual = (a * filter.coeffs_shared - target).norm() / (pnorm > 0.0 ? pnorm : 1.0);
    return filter;
}

GraphFilter fit_coefficients_shared(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p, int order) {
    return fit_coefficients_shared(shift_powers(s, order), p, order);
}

GraphFilter fit_coefficients_pernode(const std::vector<Eigen::MatrixXd>& powers,
                                     const Eigen::MatrixXd& p, int order) {
    if (order < 0) throw std::invalid_argument("fit_coefficients_pernode: order must be >= 0");
    const int n = static_cast<int>(p.rows());
    GraphFilter filter;
    filter.order = order;
    filter.mode = FilterMode::per_node;
    filter.coeffs_pernode.resize(n, order + 1);
    double worst = 0.0;
    Eigen::MatrixXd a(n, order + 1);  // rows of the powers at one node, transposed
    for (int node = 0; node < n; ++node) {
        for (int l = 0; l <= order; ++l) a.col(l) = powers[l].row(node).transpose();
        Eigen::VectorXd target = p.row(node).transpose();
        Eigen::VectorXd c = minimum_norm_solve(a, target);
        filter.coeffs_pernode.row(node) = c.transpose();
        const double tnorm = target.norm();
        worst = std::max(worst, (a * c - target).norm() / (tnorm > 0.0 ? tnorm : 1.0));
    }
    filter.fit_residual = worst;
    return filter;
}

GraphFilter fit_coefficients_pernode(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p,
                                     int order) {
    return fit_coefficients_pernode(shift_powers(s, order), p, order);
}

std::optional<int> minimal_order(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("minimal_order: tol must be positive");
    const int n = static_cast<int>(s.rows());
    const auto powers = shift_powers(s, n - 1);
    for (int order = 0; order <= n - 1; ++order) {
        if (fit_coefficients_shared(powers, p, order).fit_residual <= tol) return order;
    }
    return std::nullopt;
}

Eigen::MatrixXd filter_response(const GraphFilter& filter,
                                const std::vector<Eigen::MatrixXd>& powers) {
    const int n = static_cast<int>(powers[0].rows());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    if (filter.mode == FilterMode::shared) {
        for (int l = 0; l <= filter.order; ++l) h += filter.coeffs_shared[l] * powers[l];
    } else {
        for (int l = 0; l <= filter.order; ++l)
            h += filter.coeffs_pernode.col(l).asDiagonal() * powers[l];
    }
    return h;
}

Eigen::MatrixXd filter_response(const GraphFilter& filter, const Eigen::MatrixXd& s) {
    return filter_response(filter, shift_powers(s, filter.order));
}

std::string filter_json(const GraphFilter& filter) {
    nlohmann::ordered_json j;
    j["order"] = filter.order;
    j["mode"] = filter.mode == FilterMode::shared ? "shared" : "per-node";
    if (filter.mode == FilterMode::shared) {
        j["coefficients"] = std::vector<double>(
            filter.coeffs_shared.data(), filter.coeffs_shared.data() + filter.coeffs_shared.size());
    } else {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < filter.coeffs_pernode.rows(); ++i) {
            rows.emplace_back(filter.coeffs_pernode.row(i).data(),
                              filter.coeffs_pernode.row(i).data() + filter.coeffs_pernode.cols());
        }
        j["coefficients"] = rows;
    }
    j["fit_residual"] = filter.fit_residual;
    return j.dump(2) + "\n";
}

GraphFilter filter_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    GraphFilter filter;
    filter.order = j.at("order").get<int>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "shared") {
        filter.mode = FilterMode::shared;
        const auto c = j.at("coefficients").get<std::vector<double>>();
        if (static_cast<int>(c.size()) != filter.order + 1)
            throw std::runtime_error("filter json: coefficient count does not match order");
        filter.coeffs_shared = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
    } else if (mode == "per-node") {
        filter.mode = FilterMode::per_node;
        const auto rows = j.at("coefficients").get<std::vector<std::vector<double>>>();
        if (rows.empty()) throw std::runtime_error("filter json: empty per-node coefficients");
        filter.coeffs_pernode.resize(rows.size(), filter.order + 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(rows[i].size()) != filter.order + 1)
                throw std::runtime_error("filter json: coefficient count does not match order");
            filter.coeffs_pernode.row(i) =
                Eigen::Map<const Eigen::RowVectorXd>(rows[i].data(), rows[i].size());
        }
    } else {
        throw std::runtime_error("filter json: unknown mode '" + mode + "'");
    }
    filter.fit_residual = j.value("fit_residual", 0.0);
    return filter;
}

}  // namespace schurshift
