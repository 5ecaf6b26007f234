// Command-line front end: design shifts, synthesize filters, run exchange
// simulations, and benchmark methods on random directed networks.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "schurshift/baselines.hpp"
#include "schurshift/designer.hpp"
#include "schurshift/filters.hpp"
#include "schurshift/graph.hpp"
#include "schurshift/io.hpp"
#include "schurshift/rng.hpp"
#include "schurshift/simulation.hpp"
#include "schurshift/subspace.hpp"

namespace {

using schurshift::format_double;
using nlohmann::json;

struct CommonOpts {
    int n = 10;
    int r = 3;
    double p_edge = 0.5;
    double beta = 5.0;
    double epsilon = 1.0;
    double rho = 0.1;
    int i_max = 1000;
    int l_max = 9;
    int trials = 100;
    int signal_draws = 50;
    std::uint64_t seed = 1;
    std::string edges;
    std::string preset;
    std::string out;
    std::string config_path;
    bool strict = false;
    std::string metric = "both";
};

void add_common_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "node count");
    cmd->add_option("--r", o.r, "subspace dimension");
    cmd->add_option("--p-edge", o.p_edge, "directed edge probability");
    cmd->add_option("--beta", o.beta, "signal-to-noise ratio");
    cmd->add_option("--epsilon", o.epsilon, "trace parameter");
    cmd->add_option("--rho", o.rho, "ADMM penalty");
    cmd->add_option("--i-max", o.i_max, "ADMM iteration cap");
    cmd->add_option("--l-max", o.l_max, "exchange budget");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
    cmd->add_option("--signal-draws", o.signal_draws, "NMSE signal draws per trial");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--edges", o.edges, "edge-list file overriding random generation");
    cmd->add_option("--preset", o.preset, "parameter preset: fig1 | fig2");
    cmd->add_option("--out", o.out, "output path or prefix");
    cmd->add_option("--config", o.config_path, "JSON config file (flags win on conflict)");
    cmd->add_flag("--strict", o.strict, "exit nonzero when the design is flagged approximate");
    cmd->add_option("--metric", o.metric, "bench metric: nmpe | nmse | both");
}

void apply_preset(CommonOpts& o, const CLI::App* cmd) {
    if (o.preset.empty()) return;
    auto set_unless_flagged = [&](const char* flag, auto& field, auto value) {
        if (cmd->count(flag) == 0) field = value;
    };
    if (o.preset == "fig1") {
        // Caption parameters r=3, eps=1, beta=5, rho=0.1, I_max=1000; the paper
        // does not state the network size, so the preset runs at n=10, p=0.5.
        set_unless_flagged("--n", o.n, 10);
        set_unless_flagged("--r", o.r, 3);
        set_unless_flagged("--p-edge", o.p_edge, 0.5);
    } else if (o.preset == "fig2") {
        set_unless_flagged("--n", o.n, 40);
        set_unless_flagged("--r", o.r, 4);
        set_unless_flagged("--p-edge", o.p_edge, 0.3);
    } else {
        throw CLI::ValidationError("--preset", "unknown preset '" + o.preset + "'");
    }
    set_unless_flagged("--beta", o.beta, 5.0);
    set_unless_flagged("--epsilon", o.epsilon, 1.0);
    set_unless_flagged("--rho", o.rho, 0.1);
    set_unless_flagged("--i-max", o.i_max, 1000);
    set_unless_flagged("--trials", o.trials, 100);
    set_unless_flagged("--l-max", o.l_max, 9);
}

void apply_config_file(CommonOpts& o, const CLI::App* cmd) {
    if (o.config_path.empty()) return;
    json j = json::parse(schurshift::read_text_file(o.config_path));
    if (!j.is_object()) throw std::runtime_error("config file: expected a JSON object");
    const std::set<std::string> known{"n",      "r",     "p_edge", "beta",   "epsilon",
                                      "rho",    "i_max", "l_max",  "trials", "signal_draws",
                                      "seed",   "edges", "preset", "out",    "strict",
                                      "metric"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw std::runtime_error("config file: unknown key '" + key + "'");
        (void)value;
    }
    auto take = [&](const char* flag, const char* key, auto& field) {
        if (cmd->count(flag) == 0 && j.contains(key)) j.at(key).get_to(field);
    };
    take("--n", "n", o.n);
    take("--r", "r", o.r);
    take("--p-edge", "p_edge", o.p_edge);
    take("--beta", "beta", o.beta);
    take("--epsilon", "epsilon", o.epsilon);
    take("--rho", "rho", o.rho);
    take("--i-max", "i_max", o.i_max);
    take("--l-max", "l_max", o.l_max);
    take("--trials", "trials", o.trials);
    take("--signal-draws", "signal_draws", o.signal_draws);
    take("--seed", "seed", o.seed);
    take("--edges", "edges", o.edges);
    take("--preset", "preset", o.preset);
    take("--out", "out", o.out);
    take("--strict", "strict", o.strict);
    take("--metric", "metric", o.metric);
}

void validate(const CommonOpts& o) {
    if (o.n < 2) throw std::runtime_error("invalid config: n must be >= 2");
    if (o.r < 1 || o.r >= o.n) throw std::runtime_error("invalid config: need 1 <= r < n");
    if (!(o.p_edge > 0.0) || o.p_edge > 1.0)
        throw std::runtime_error("invalid config: p_edge must be in (0, 1]");
    if (!(o.beta > 0.0)) throw std::runtime_error("invalid config: beta must be positive");
    if (o.l_max < 0) throw std::runtime_error("invalid config: l_max must be >= 0");
    if (o.trials < 1) throw std::runtime_error("invalid config: trials must be >= 1");
    if (o.metric != "nmpe" && o.metric != "nmse" && o.metric != "both")
        throw std::runtime_error("invalid config: metric must be nmpe, nmse or both");
}

schurshift::DesignConfig design_config(const CommonOpts& o) {
    schurshift::DesignConfig cfg;
    cfg.epsilon = o.epsilon;
    cfg.rho = o.rho;
    cfg.i_max = o.i_max;
    return cfg;
}

std::string resolved_config_json(const CommonOpts& o, const std::string& command) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["n"] = o.n;
    j["r"] = o.r;
    j["p_edge"] = o.p_edge;
    j["beta"] = o.beta;
    j["epsilon"] = o.epsilon;
    j["rho"] = o.rho;
    j["i_max"] = o.i_max;
    j["l_max"] = o.l_max;
    j["trials"] = o.trials;
    j["signal_draws"] = o.signal_draws;
    j["seed"] = o.seed;
    j["edges"] = o.edges;
    j["preset"] = o.preset;
    j["metric"] = o.metric;
    j["strict"] = o.strict;
    return j.dump(2) + "\n";
}

std::string config_comment(const CommonOpts& o, const std::string& command) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(resolved_config_json(o, command));
    return "schurshift " + command + " config " + j.dump();
}

int cmd_design(const CommonOpts& o) {
    schurshift::DirectedGraph g =
        o.edges.empty()
            ? schurshift::generate_erdos_renyi(o.n, o.p_edge,
                                               schurshift::derive_seed(o.seed, 0x67726170, 0))
            : schurshift::read_edge_list_file(o.edges);
    const int n = g.node_count();
    if (o.r >= n) throw std::runtime_error("invalid config: need r < n (n from edge list)");
    schurshift::SubspaceBasis basis =
        schurshift::random_subspace(n, o.r, schurshift::derive_seed(o.seed, 0x62617369, 0));
    schurshift::DesignResult result = schurshift::design_shift(g, basis, design_config(o));

    const std::string prefix = o.out.empty() ? "design" : o.out;
    schurshift::write_matrix_csv_file(prefix + "_shift.csv", result.shift,
                                      config_comment(o, "design"));
    schurshift::write_matrix_csv_file(prefix + "_projection.csv", basis.proj,
                                      config_comment(o, "design"));
    schurshift::write_text_file(prefix + "_diagnostics.json", schurshift::diagnostics_json(result));
    schurshift::write_text_file(prefix + "_config.json", resolved_config_json(o, "design"));

    std::cout << "design: wrote " << prefix << "_shift.csv, " << prefix << "_projection.csv, "
              << prefix << "_diagnostics.json\n"
              << "  feasible=" << (result.diagnostics.feasible ? "true" : "false")
              << " topo_residual=" << format_double(result.diagnostics.topo_residual)
              << " sep_margin=" << format_double(result.diagnostics.sep_margin)
              << " iterations=" << result.diagnostics.iterations << "\n";
    if (o.strict && !result.diagnostics.feasible) {
        std::cerr << "design flagged approximate and --strict set\n";
        return 2;
    }
    return 0;
}

struct SynthesizeOpts {
    std::string shift_path;
    std::string target_path;
    int order = -1;  // <0: scan for the minimal feasible order
    double tol = 1e-6;
    bool pernode = false;
    std::string out = "filter.json";
};

int cmd_synthesize(const SynthesizeOpts& so) {
    Eigen::MatrixXd s = schurshift::read_matrix_csv_file(so.shift_path);
    Eigen::MatrixXd p = schurshift::read_matrix_csv_file(so.target_path);
    if (s.rows() != s.cols() || p.rows() != p.cols() || s.rows() != p.rows()) {
        std::ostringstream msg;
        msg << "dimension mismatch: shift is " << s.rows() << "x" << s.cols() << ", target is "
            << p.rows() << "x" << p.cols();
        throw std::runtime_error(msg.str());
    }
    int order = so.order;
    if (order < 0) {
        std::optional<int> found;
        if (so.pernode) {
            const auto powers = schurshift::shift_powers(s, static_cast<int>(s.rows()) - 1);
            for (int l = 0; l < static_cast<int>(s.rows()) && !found; ++l)
                if (schurshift::fit_coefficients_pernode(powers, p, l).fit_residual <= so.tol)
                    found = l;
        } else {
            found = schurshift::minimal_order(s, p, so.tol);
        }
        order = found ? *found : static_cast<int>(s.rows()) - 1;
        if (!found)
            std::cout << "synthesize: no order <= N-1 reaches tol=" << format_double(so.tol)
                      << "; emitting the order N-1 least-squares fit\n";
    }
    schurshift::GraphFilter filter = so.pernode ? schurshift::fit_coefficients_pernode(s, p, order)
                                                : schurshift::fit_coefficients_shared(s, p, order);
    schurshift::write_text_file(so.out, schurshift::filter_json(filter));
    std::cout << "synthesize: order=" << filter.order
              << " fit_residual=" << format_double(filter.fit_residual) << " -> " << so.out << "\n";
    return 0;
}

struct SimulateOpts {
    std::string shift_path;
    std::string filter_path;
    int l_max = -1;
    std::uint64_t seed = 1;
    std::string out = "trajectory.csv";
};

int cmd_simulate(const SimulateOpts& so) {
    Eigen::MatrixXd s = schurshift::read_matrix_csv_file(so.shift_path);
    schurshift::GraphFilter filter =
        schurshift::filter_from_json(schurshift::read_text_file(so.filter_path));
    const int n = static_cast<int>(s.rows());
    const int coeff_nodes = filter.mode == schurshift::FilterMode::per_node
                                ? static_cast<int>(filter.coeffs_pernode.rows())
                                : n;
    if (s.rows() != s.cols() || coeff_nodes != n) {
        std::ostringstream msg;
        msg << "dimension mismatch: shift is " << s.rows() << "x" << s.cols() << ", filter has "
            << coeff_nodes << " node rows";
        throw std::runtime_error(msg.str());
    }
    const int l_max = so.l_max >= 0 ? so.l_max : filter.order;

    schurshift::Rng rng(so.seed);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();

    long nnz_offdiag = 0;  // message count proxy when only the matrix is known
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && s(i, j) != 0.0) ++nnz_offdiag;
    auto traj = schurshift::simulate_exchanges(s, z, l_max, nnz_offdiag);

    auto coeff = [&](int node, int l) {
        if (l > filter.order) return 0.0;
        return filter.mode == schurshift::FilterMode::per_node ? filter.coeffs_pernode(node, l)
                                                               : filter.coeffs_shared[l];
    };
    std::ostringstream out;
    out << "exchange,node,state,estimate\n";
    Eigen::VectorXd estimate = Eigen::VectorXd::Zero(n);
    for (int l = 0; l <= l_max; ++l) {
        for (int node = 0; node < n; ++node)
            estimate[node] += coeff(node, l) * traj.states[l][node];
        for (int node = 0; node < n; ++node)
            out << l << ',' << node << ',' << format_double(traj.states[l][node]) << ','
                << format_double(estimate[node]) << '\n';
    }
    schurshift::write_text_file(so.out, out.str());
    std::cout << "simulate: wrote " << so.out << " (" << l_max << " exchanges, "
              << traj.messages_sent.back() << " messages)\n";
    return 0;
}

int cmd_bench(const CommonOpts& o) {
    schurshift::ExperimentConfig cfg;
    cfg.n = o.n;
    cfg.r = o.r;
    cfg.p_edge = o.p_edge;
    cfg.beta = o.beta;
    cfg.l_max = o.l_max;
    cfg.trials = o.trials;
    cfg.signal_draws = o.signal_draws;
    cfg.seed = o.seed;
    cfg.design = design_config(o);

    const bool want_nmpe = o.metric != "nmse";
    const bool want_nmse = o.metric != "nmpe";
    auto curves = schurshift::monte_carlo_report(cfg, want_nmpe, want_nmse);

    const std::string path = o.out.empty() ? "bench.csv" : o.out;
    schurshift::write_text_file(path, schurshift::curves_csv(curves));

    std::cout << "bench: wrote " << path << " (trials=" << cfg.trials
              << ", excluded=" << curves.front().excluded_trials << ")\n";
    std::printf("%-10s", "method");
    if (want_nmpe) std::printf("  %-14s", ("NMPE(l=" + std::to_string(cfg.l_max) + ")").c_str());
    if (want_nmse) std::printf("  %-14s", ("NMSE(l=" + std::to_string(cfg.l_max) + ")").c_str());
    std::printf("\n");
    for (const auto& label : {"designed", "adjacency", "laplacian", "ls"}) {
        std::printf("%-10s", label);
        for (const auto& metric : {"nmpe", "nmse"}) {
            if ((metric == std::string("nmpe") && !want_nmpe) ||
                (metric == std::string("nmse") && !want_nmse))
                continue;
            for (const auto& c : curves)
                if (c.method == label && c.metric == metric)
                    std::printf("  %-14.4e", c.values.back());
        }
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"schurshift: asymmetric graph shift design for decentralized subspace projection"};
    app.require_subcommand(1);

    CommonOpts design_opts;
    auto* design = app.add_subcommand("design", "design a shift operator and export artifacts");
    add_common_options(design, design_opts);

    SynthesizeOpts syn;
    auto* synthesize = app.add_subcommand("synthesize", "fit filter coefficients for a shift");
    synthesize->add_option("--shift", syn.shift_path, "shift matrix CSV")->required();
    synthesize->add_option("--target", syn.target_path, "target matrix CSV")->required();
    synthesize->add_option("--order", syn.order, "filter order (default: minimal feasible)");
    synthesize->add_option("--tol", syn.tol, "residual tolerance for the order scan");
    synthesize->add_flag("--pernode", syn.pernode, "per-node coefficients");
    synthesize->add_option("--out", syn.out, "output filter JSON");

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "run the local exchange protocol");
    simulate->add_option("--shift", sim.shift_path, "shift matrix CSV")->required();
    simulate->add_option("--filter", sim.filter_path, "filter JSON")->required();
    simulate->add_option("--l-max", sim.l_max, "exchange count (default: filter order)");
    simulate->add_option("--seed", sim.seed, "signal seed");
    simulate->add_option("--out", sim.out, "output trajectory CSV");

    CommonOpts bench_opts;
    auto* bench = app.add_subcommand("bench", "Monte-Carlo benchmark against baseline shifts");
    add_common_options(bench, bench_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) {
            apply_config_file(design_opts, design);
            apply_preset(design_opts, design);
            validate(design_opts);
            return cmd_design(design_opts);
        }
        if (synthesize->parsed()) return cmd_synthesize(syn);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (bench->parsed()) {
            apply_config_file(bench_opts, bench);
            apply_preset(bench_opts, bench);
            validate(bench_opts);
            return cmd_bench(bench_opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
