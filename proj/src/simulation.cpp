#include "schurshift/simulation.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "schurshift/io.hpp"
#include "schurshift/rng.hpp"

namespace schurshift {

ExchangeTrajectory simulate_exchanges(const Eigen::MatrixXd& s, const Eigen::VectorXd& z,
                                      int exchanges, long edge_count) {
    if (s.rows() != s.cols() || s.rows() != z.size())
        throw std::invalid_argument("simulate_exchanges: dimension mismatch");
    if (exchanges < 0) throw std::invalid_argument("simulate_exchanges: negative exchange count");
    ExchangeTrajectory traj;
    traj.states.reserve(exchanges + 1);
    traj.messages_sent.reserve(exchanges + 1);
    traj.states.push_back(z);
    traj.messages_sent.push_back(0);
    for (int l = 1; l <= exchanges; ++l) {
        traj.states.push_back(s * traj.states.back());
        traj.messages_sent.push_back(static_cast<long>(l) * edge_count);
    }
    return traj;
}

namespace {
constexpr std::uint64_t kGraphStream = 0x67726170;
constexpr std::uint64_t kBasisStream = 0x62617369;
constexpr std::uint64_t kTrialStream = 0x7472696c;
constexpr std::uint64_t kSignalStream = 0x7369676e;
}  // namespace

TrialDraw draw_trial(const ExperimentConfig& cfg, int trial_index) {
    DirectedGraph g =
        generate_erdos_renyi(cfg.n, cfg.p_edge, derive_seed(cfg.seed, kGraphStream, trial_index));
    SubspaceBasis basis =
        random_subspace(cfg.n, cfg.r, derive_seed(cfg.seed, kBasisStream, trial_index));
    return TrialDraw{std::move(g), std::move(basis)};
}

Eigen::MatrixXd trial_shift(ShiftMethod method, const TrialDraw& draw,
                            const ExperimentConfig& cfg, DesignDiagnostics* diag) {
    switch (method) {
        case ShiftMethod::designed: {
            DesignResult result = design_shift(draw.graph, draw.basis, cfg.design);
            if (diag) *diag = result.diagnostics;
            return result.shift;
        }
        case ShiftMethod::least_squares:
            return ls_shift(draw.graph, draw.basis.proj);
        default:
            return baseline_shift(draw.graph, method);
    }
}

NmpeTrial nmpe_trial(const Eigen::MatrixXd& shift, const SubspaceBasis& basis,
                     double beta, int l_max) {
    const int n = basis.n();
    const int r = basis.r();
    const Eigen::MatrixXd& p = basis.proj;
    // Signal covariance of z: beta^2 (N/r) proj + I; the inner expectation of
    // ||X z||^2 is then tr(X Sigma X^T), evaluated in closed form.
    Eigen::MatrixXd sigma = (beta * beta * n / r) * p;
    sigma.diagonal().array() += 1.0;

    const auto powers = shift_powers(shift, l_max);
    NmpeTrial out;
    out.num.resize(l_max + 1);
    out.den = (p * sigma).cwiseProduct(p).sum();
    for (int l = 0; l <= l_max; ++l) {
        GraphFilter filter = fit_coefficients_pernode(powers, p, l);
        Eigen::MatrixXd x = p - filter_response(filter, powers);
        out.num[l] = (x * sigma).cwiseProduct(x).sum();
    }
    return out;
}

NmseTrial nmse_trial(const Eigen::MatrixXd& shift, const SubspaceBasis& basis,
                     double beta, int l_max, int draws, std::uint64_t trial_seed) {
    const auto powers = shift_powers(shift, l_max);
    std::vector<Eigen::MatrixXd> responses;
    responses.reserve(l_max + 1);
    for (int l = 0; l <= l_max; ++l)
        responses.push_back(filter_response(fit_coefficients_pernode(powers, basis.proj, l), powers));

    NmseTrial out;
    out.err.assign(l_max + 1, 0.0);
    for (int k = 0; k < draws; ++k) {
        SignalSample sample = generate_signal(basis, beta, derive_seed(trial_seed, kSignalStream, k));
        out.sig += sample.xi.squaredNorm();
        for (int l = 0; l <= l_max; ++l)
            out.err[l] += (sample.xi - responses[l] * sample.z).squaredNorm();
    }
    return out;
}

namespace {

struct TrialOutcome {
    bool excluded = false;
    bool approximate = false;
    std::string error;
    // indexed per method
    std::vector<NmpeTrial> nmpe;
    std::vector<NmseTrial> nmse;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, const std::vector<ShiftMethod>& methods,
                       int trial, bool want_nmpe, bool want_nmse) {
    TrialOutcome outcome;
    try {
        TrialDraw draw = draw_trial(cfg, trial);
        const std::uint64_t trial_seed = derive_seed(cfg.seed, kTrialStream, trial);
        outcome.nmpe.resize(methods.size());
        outcome.nmse.resize(methods.size());
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            DesignDiagnostics diag;
            Eigen::MatrixXd shift = trial_shift(methods[mi], draw, cfg, &diag);
            if (methods[mi] == ShiftMethod::designed && !diag.feasible) outcome.approximate = true;
            if (want_nmpe) outcome.nmpe[mi] = nmpe_trial(shift, draw.basis, cfg.beta, cfg.l_max);
            if (want_nmse)
                outcome.nmse[mi] =
                    nmse_trial(shift, draw.basis, cfg.beta, cfg.l_max, cfg.signal_draws, trial_seed);
        }
    } catch (const std::exception& e) {
        // degenerate design or generation failure; drop the whole trial
        outcome.excluded = true;
        outcome.error = e.what();
    }
    return outcome;
}

int thread_budget(int trials) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return std::max(1, std::min<int>(static_cast<int>(hw), trials));
}

std::vector<MetricCurve> run_experiment(const ExperimentConfig& cfg,
                                        const std::vector<ShiftMethod>& methods,
                                        bool want_nmpe, bool want_nmse) {
    if (cfg.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    std::vector<TrialOutcome> outcomes(cfg.trials);

    // Deterministic parallel map: each trial writes only its own slot, and the
    // reduction below runs in fixed trial order.
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            outcomes[t] = run_trial(cfg, methods, t, want_nmpe, want_nmse);
        }
    };
    const int n_threads = thread_budget(cfg.trials);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    int excluded = 0, approximate = 0, included = 0;
    for (const auto& o : outcomes) {
        if (o.excluded) ++excluded;
        else {
            ++included;
            if (o.approximate) ++approximate;
        }
    }
    if (included == 0)
        throw std::runtime_error("experiment: every trial was excluded; first error: " +
                                 outcomes.front().error);

    std::vector<MetricCurve> curves;
    auto make_curve = [&](std::size_t mi, const std::string& metric) {
        MetricCurve c;
        c.method = method_label(methods[mi]);
        c.metric = metric;
        c.trials = included;
        c.excluded_trials = excluded;
        c.approximate_trials = approximate;
        c.config = cfg;
        for (int l = 0; l <= cfg.l_max; ++l) c.exchanges.push_back(l);
        c.values.assign(cfg.l_max + 1, 0.0);
        double den = 0.0;
        for (const auto& o : outcomes) {
            if (o.excluded) continue;
            if (metric == "nmpe") {
                den += o.nmpe[mi].den;
                for (int l = 0; l <= cfg.l_max; ++l) c.values[l] += o.nmpe[mi].num[l];
            } else {
                den += o.nmse[mi].sig;
                for (int l = 0; l <= cfg.l_max; ++l) c.values[l] += o.nmse[mi].err[l];
            }
        }
        for (double& v : c.values) v /= den;
        return c;
    };
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        if (want_nmpe) curves.push_back(make_curve(mi, "nmpe"));
        if (want_nmse) curves.push_back(make_curve(mi, "nmse"));
    }
    return curves;
}

}  // namespace

MetricCurve nmpe_curve(ShiftMethod method, const ExperimentConfig& cfg) {
    return run_experiment(cfg, {method}, true, false).front();
}

MetricCurve nmse_curve(ShiftMethod method, const ExperimentConfig& cfg) {
    return run_experiment(cfg, {method}, false, true).front();
}

std::vector<MetricCurve> monte_carlo_report(const ExperimentConfig& cfg,
                                            bool want_nmpe, bool want_nmse) {
    const std::vector<ShiftMethod> methods{ShiftMethod::designed, ShiftMethod::adjacency,
                                           ShiftMethod::laplacian, ShiftMethod::least_squares};
    return run_experiment(cfg, methods, want_nmpe, want_nmse);
}

std::string curves_csv(const std::vector<MetricCurve>& curves) {
    std::ostringstream out;
    out << "method,exchange,value,metric,n,r,p_edge,beta,epsilon,rho,i_max,trials,excluded_trials\n";
    for (const auto& c : curves) {
        for (std::size_t k = 0; k < c.values.size(); ++k) {
            out << c.method << ',' << c.exchanges[k] << ',' << format_double(c.values[k]) << ','
                << c.metric << ',' << c.config.n << ',' << c.config.r << ','
                << format_double(c.config.p_edge) << ',' << format_double(c.config.beta) << ','
                << format_double(c.config.design.epsilon) << ',' << format_double(c.config.design.rho)
                << ',' << c.config.design.i_max << ',' << c.trials << ',' << c.excluded_trials
                << '\n';
        }
    }
    return out.str();
}

}  // namespace schurshift
