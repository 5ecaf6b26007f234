#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "schurshift/baselines.hpp"
#include "schurshift/designer.hpp"
#include "schurshift/filters.hpp"
#include "schurshift/graph.hpp"
#include "schurshift/subspace.hpp"

namespace schurshift {

/// States y^(0)..y^(L) with y^(l) = S^l y^(0), plus cumulative message counts
/// (each exchange costs one message per edge).
struct ExchangeTrajectory {
    std::vector<Eigen::VectorXd> states;
    std::vector<long> messages_sent;
};

ExchangeTrajectory simulate_exchanges(const Eigen::MatrixXd& s, const Eigen::VectorXd& z,
                                      int exchanges, long edge_count);

struct ExperimentConfig {
    int n = 10;
    int r = 3;
    double p_edge = 0.5;
    double beta = 5.0;
    int l_max = 9;
    int trials = 100;
    int signal_draws = 50;  // NMSE Monte-Carlo draws per trial
    std::uint64_t seed = 1;
    DesignConfig design;
};

struct MetricCurve {
    std::string method;
    std::string metric;  // "nmpe" | "nmse"
    std::vector<int> exchanges;
    std::vector<double> values;
    int trials = 0;
    int excluded_trials = 0;     // design threw; trial skipped for all methods
    int approximate_trials = 0;  // design returned feasible=false but was included
    ExperimentConfig config;
};

/// One trial's common draws, shared across all methods.
struct TrialDraw {
    DirectedGraph graph;
    SubspaceBasis basis;
};
TrialDraw draw_trial(const ExperimentConfig& cfg, int trial_index);

/// The method's shift operator for one trial (runs the designer for
/// ShiftMethod::designed). Returns the design result diagnostics when asked.
Eigen::MatrixXd trial_shift(ShiftMethod method, const TrialDraw& draw,
                            const ExperimentConfig& cfg, DesignDiagnostics* diag = nullptr);

/**
 * Per-trial NMPE values for budgets l = 0..l_max: the best order-l per-node
 * filter is refit for every budget, and the signal expectation is closed-form
 * with covariance beta^2 (N/r) proj + I. Returns numerator and denominator
 * contributions so callers can aggregate grand ratios.
 */
struct NmpeTrial {
    std::vector<double> num;  // tr((P-H_l) Sigma (P-H_l)^T) per l
    double den = 0.0;         // tr(P Sigma P^T)
};
NmpeTrial nmpe_trial(const Eigen::MatrixXd& shift, const SubspaceBasis& basis,
                     double beta, int l_max);

/// Per-trial NMSE sums over signal draws: ||xi - H_l z||^2 and ||xi||^2.
struct NmseTrial {
    std::vector<double> err;  // sum over draws per l
    double sig = 0.0;         // sum of ||xi||^2 over draws
};
NmseTrial nmse_trial(const Eigen::MatrixXd& shift, const SubspaceBasis& basis,
                     double beta, int l_max, int draws, std::uint64_t trial_seed);

/// Monte-Carlo curve for one method (trials drawn per config seeds).
MetricCurve nmpe_curve(ShiftMethod method, const ExperimentConfig& cfg);
MetricCurve nmse_curve(ShiftMethod method, const ExperimentConfig& cfg);

/**
 * Runs every method on identical per-trial draws (common random numbers) and
 * returns curves for the requested metrics ("nmpe", "nmse" or both). Trials
 * run in a deterministic parallel map; aggregation order is fixed, so output
 * is byte-stable for a given master seed.
 */
std::vector<MetricCurve> monte_carlo_report(const ExperimentConfig& cfg,
                                            bool want_nmpe = true, bool want_nmse = true);

/// CSV rows: method,exchange,value,metric,n,r,p_edge,beta,epsilon,rho,i_max,trials,excluded_trials
std::string curves_csv(const std::vector<MetricCurve>& curves);

}  // namespace schurshift
