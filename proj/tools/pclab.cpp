// pclab: simulate, certify, and survey piecewise-affine contractions.
//
// Subcommands: sim, certify, orbits, sweep, growth, entropy, hoffman,
// probe-T, probe-E, probe-stability, staircase, cylinders, connections,
// exceptional. Exit codes: 0 success / certified, 2 undecided, 1 error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pclab/config.hpp"
#include "pclab/records.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> depth_max;
    std::optional<double> tol_eta, tol_slack, tol_residual, tol_connection;
    bool no_boundary_singular = false;
    bool timings = false;
    bool full_scan = false;
    std::optional<int> steps;
    bool total = false;
    std::string out_path;
};

void apply_overrides(pclab::json& j, const Overrides& o) {
    if (o.seed) j["seed"] = *o.seed;
    if (o.workers) j["workers"] = *o.workers;
    if (o.depth_max) {
        j["schedule"]["depth_max"] = *o.depth_max;
        j["schedule"]["depths"] = pclab::json::array();
    }
    if (o.tol_eta) j["tolerances"]["eta"] = *o.tol_eta;
    if (o.tol_slack) j["tolerances"]["certificate_slack"] = *o.tol_slack;
    if (o.tol_residual) j["tolerances"]["orbit_residual"] = *o.tol_residual;
    if (o.tol_connection) j["tolerances"]["connection_tol"] = *o.tol_connection;
    if (o.no_boundary_singular) j["tolerances"]["boundary_singular"] = false;
    if (o.full_scan) j["scan"]["full"] = true;
    if (o.steps) j["sim"]["steps"] = *o.steps;
    if (o.total) j["sim"]["total"] = true;
}

pclab::RunConfig load(const std::string& path, const Overrides& o) {
    std::ifstream in(path);
    if (!in) throw pclab::ConfigError("cannot open config file: " + path);
    pclab::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw pclab::ConfigError("config parse error in " + path + ": " + e.what());
    }
    apply_overrides(j, o);
    return pclab::parse_config(j);
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw pclab::ConfigError("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

const pclab::PiecewiseContraction& need_map(const pclab::RunConfig& cfg) {
    if (!cfg.map) throw pclab::ConfigError("map: this subcommand needs a 'map' section");
    return *cfg.map;
}

const pclab::FamilySpec& need_family(const pclab::RunConfig& cfg) {
    if (!cfg.family) throw pclab::ConfigError("family: this subcommand needs a 'family' section");
    return *cfg.family;
}

Eigen::VectorXd probe_center(const pclab::RunConfig& cfg) {
    if (cfg.mu_star) return *cfg.mu_star;
    const auto& spec = need_family(cfg);
    return 0.5 * (spec.lo + spec.hi);
}

pclab::CertifySettings settings_from(const pclab::RunConfig& cfg) {
    pclab::CertifySettings s;
    s.schedule = cfg.schedule;
    s.slack = cfg.tol.certificate_slack;
    s.orbit_residual = cfg.tol.orbit_residual;
    s.cap = cfg.enumeration_cap;
    return s;
}

int cmd_sim(const pclab::RunConfig& cfg, Output& out) {
    const auto& f = need_map(cfg);
    Eigen::VectorXd x = cfg.sim_x0.size() ? cfg.sim_x0 : pclab::default_base_point(f);
    pclab::write_csv_row(out.stream(), {"k", "x", "label", "dist_to_singular"});
    bool failed_reported = false;
    for (int k = 0; k <= cfg.sim_steps; ++k) {
        const pclab::LabelResult lr = pclab::label(f, x);
        std::string label_txt = lr.is_regular ? std::to_string(lr.label) : "singular";
        pclab::write_csv_row(out.stream(), {std::to_string(k), pclab::fmt_vec(x, ";"), label_txt,
                                            pclab::fmt17(pclab::dist_to_singular(f, x))});
        if (!lr.is_regular && !failed_reported) {
            out.stream() << "# FailedAt(" << k << ")\n";
            failed_reported = true;
        }
        // 1-D maps are total through the A1 side convention; hyperplane mode
        // stops at the singular set unless total evaluation was requested.
        if (!lr.is_regular && !f.is_interval() && !cfg.sim_total) break;
        if (k < cfg.sim_steps)
            x = cfg.sim_total ? pclab::step_total(f, x) : pclab::step(f, x);
    }
    return 0;
}

int cmd_certify(const pclab::RunConfig& cfg, Output& out, bool orbits_only) {
    const auto& f = need_map(cfg);
    const Eigen::VectorXd x0 = cfg.certify_x0 ? *cfg.certify_x0 : pclab::default_base_point(f);
    const pclab::CertifyOutcome outcome = pclab::certify(f, x0, settings_from(cfg));
    if (const auto* cert = std::get_if<pclab::PeriodicityCertificate>(&outcome)) {
        if (orbits_only) {
            for (std::size_t k = 0; k < cert->orbits.size(); ++k) {
                const auto& orbit = cert->orbits[k];
                out.stream() << "orbit " << k << " period " << orbit.period;
                for (const auto& p : orbit.points)
                    out.stream() << " point " << pclab::fmt_vec(p, ",");
                out.stream() << '\n';
            }
        } else {
            pclab::write_certificate(out.stream(), *cert);
        }
        return 0;
    }
    pclab::write_undecided(out.stream(), std::get<pclab::Undecided>(outcome));
    return 2;
}

int cmd_sweep(const pclab::RunConfig& cfg, Output& out, bool timings) {
    const auto& spec = need_family(cfg);
    pclab::SweepPlan plan;
    plan.sampler = cfg.sampler;
    plan.count = cfg.sweep_count;
    plan.seed = cfg.seed;
    plan.schedule = cfg.schedule;
    plan.workers = cfg.workers;
    plan.cap = cfg.enumeration_cap;
    plan.slack = cfg.tol.certificate_slack;
    plan.orbit_residual = cfg.tol.orbit_residual;
    const auto records = pclab::sweep(spec, plan);
    for (const auto& rec : records) out.stream() << pclab::sweep_record_line(rec, timings) << '\n';
    pclab::write_sweep_summary(out.stream(), pclab::summarize(records));
    return 0;
}

int cmd_growth(const pclab::RunConfig& cfg, Output& out) {
    const auto& f = need_map(cfg);
    pclab::CylinderEnumerator en(f, cfg.enumeration_cap);
    std::vector<std::size_t> counts;
    for (int n = 1; n <= cfg.n_max; ++n) counts.push_back(en.extend_to(n).size());
    const pclab::GrowthRates rates = pclab::growth_rate(counts);
    pclab::write_csv_row(out.stream(), {"n", "count", "rate", "limsup_proxy"});
    for (std::size_t i = 0; i < counts.size(); ++i)
        pclab::write_csv_row(out.stream(),
                             {std::to_string(i + 1), std::to_string(counts[i]),
                              pclab::fmt17(rates.rate[i]), pclab::fmt17(rates.limsup_proxy[i])});
    return 0;
}

int cmd_entropy(const pclab::RunConfig& cfg, Output& out) {
    const auto& f = need_map(cfg);
    const auto rows = pclab::mult_entropy_estimate(f, cfg.n_max, cfg.enumeration_cap);
    pclab::write_csv_row(out.stream(), {"n", "mult", "rate", "exact"});
    for (const auto& r : rows)
        pclab::write_csv_row(out.stream(), {std::to_string(r.n), pclab::fmt17(r.mult),
                                            pclab::fmt17(r.rate), r.exact ? "1" : "0"});
    return 0;
}

int cmd_hoffman(const pclab::RunConfig& cfg, Output& out) {
    if (!cfg.matrix) throw pclab::ConfigError("matrix: hoffman needs a 'matrix' section");
    const double beta = pclab::hoffman_beta(*cfg.matrix);
    pclab::write_csv_row(out.stream(), {"beta"});
    pclab::write_csv_row(out.stream(), {pclab::fmt17(beta)});
    if (cfg.hoffman_b0 && cfg.hoffman_b && cfg.hoffman_x0) {
        const bool ok = pclab::verify_hoffman_bound(*cfg.matrix, *cfg.hoffman_b0, *cfg.hoffman_b,
                                                    *cfg.hoffman_x0);
        pclab::write_csv_row(out.stream(), {"bound_holds"});
        pclab::write_csv_row(out.stream(), {ok ? "1" : "0"});
    }
    return 0;
}

int cmd_probe_t(const pclab::RunConfig& cfg, Output& out) {
    const auto& spec = need_family(cfg);
    double delta0 = cfg.probe.delta0;
    if (delta0 <= 0 && spec.kind == pclab::FamilyKind::HyperplaneMultiD) delta0 = 1.0;
    const auto report = pclab::hypothesis_T_probe(spec, probe_center(cfg), delta0,
                                                  cfg.probe.epsilons, cfg.probe.samples,
                                                  cfg.probe.depths, 8, cfg.seed);
    pclab::write_csv_row(out.stream(), {"epsilon", "estimate", "bound", "ratio", "sigma"});
    for (const auto& row : report.rows)
        pclab::write_csv_row(out.stream(),
                             {pclab::fmt17(row.epsilon), pclab::fmt17(row.estimate),
                              pclab::fmt17(row.bound), pclab::fmt17(row.ratio),
                              pclab::fmt17(row.sigma)});
    return 0;
}

int cmd_probe_e(const pclab::RunConfig& cfg, Output& out) {
    const auto& spec = need_family(cfg);
    const auto report =
        pclab::hypothesis_E_probe(spec, probe_center(cfg), cfg.probe.delta, cfg.probe.n_max,
                                  std::max(10, cfg.probe.samples / 100), cfg.seed,
                                  cfg.enumeration_cap);
    pclab::write_csv_row(out.stream(), {"delta", "n", "count", "rate"});
    for (const auto& row : report.rows)
        pclab::write_csv_row(out.stream(), {pclab::fmt17(row.delta), std::to_string(row.n),
                                            std::to_string(row.count), pclab::fmt17(row.rate)});
    out.stream() << '\n';
    pclab::write_csv_row(out.stream(), {"delta", "limsup_proxy"});
    for (const auto& kv : report.limsup_proxy)
        pclab::write_csv_row(out.stream(), {pclab::fmt17(kv.first), pclab::fmt17(kv.second)});
    return 0;
}

int cmd_probe_stability(const pclab::RunConfig& cfg, Output& out) {
    const auto& spec = need_family(cfg);
    const auto rows =
        pclab::stability_probe(spec, probe_center(cfg), cfg.probe.stability_n,
                               cfg.probe.stability_deltas, std::max(10, cfg.probe.samples / 100),
                               cfg.seed);
    pclab::write_csv_row(out.stream(), {"delta", "identical_fraction", "max_dh_ratio"});
    for (const auto& row : rows)
        pclab::write_csv_row(out.stream(), {pclab::fmt17(row.delta),
                                            pclab::fmt17(row.identical_fraction),
                                            pclab::fmt17(row.max_dh_ratio)});
    return 0;
}

int cmd_staircase(const pclab::RunConfig& cfg, Output& out) {
    const auto& spec = need_family(cfg);
    if (spec.kind != pclab::FamilyKind::ContractedRotation)
        throw pclab::ConfigError("family.kind: staircase needs a contracted_rotation family");
    pclab::write_csv_row(out.stream(), {"b", "rho"});
    for (std::size_t i = 0; i < cfg.staircase_grid; ++i) {
        const double b = spec.lo(0) + (spec.hi(0) - spec.lo(0)) *
                                          (static_cast<double>(i) + 0.5) /
                                          static_cast<double>(cfg.staircase_grid);
        const double rho = pclab::rotation_lift_average(spec.cr_lambda, b, cfg.staircase_horizon);
        pclab::write_csv_row(out.stream(), {pclab::fmt17(b), pclab::fmt17(rho)});
    }
    return 0;
}

int cmd_cylinders(const pclab::RunConfig& cfg, Output& out) {
    const auto& f = need_map(cfg);
    const pclab::CylinderCollection coll =
        pclab::enumerate_itineraries(f, cfg.n_max, cfg.enumeration_cap);
    pclab::write_cylinders(out.stream(), coll);
    return 0;
}

int cmd_connections(const pclab::RunConfig& cfg, Output& out) {
    const auto& f = need_map(cfg);
    const auto hits = pclab::singular_connection_search(f, cfg.scan_depth, cfg.tol.connection_tol,
                                                        cfg.scan_full);
    pclab::write_csv_row(out.stream(), {"alpha", "i", "j", "gap"});
    for (const auto& h : hits)
        pclab::write_csv_row(out.stream(), {pclab::word_to_string(h.alpha), std::to_string(h.i + 1),
                                            std::to_string(h.j + 1), pclab::fmt17(h.gap)});
    return 0;
}

int cmd_exceptional(const pclab::RunConfig& cfg, Output& out) {
    const auto& f = need_map(cfg);
    const auto hits =
        pclab::homothety_exceptional_check(f, cfg.scan_depth, cfg.tol.connection_tol);
    pclab::write_csv_row(out.stream(), {"alpha", "j", "value"});
    for (const auto& h : hits)
        pclab::write_csv_row(out.stream(), {pclab::word_to_string(h.alpha),
                                            std::to_string(h.j + 1), pclab::fmt17(h.value)});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise contraction laboratory"};
    app.require_subcommand(0, 1);

    bool print_config = false;
    app.add_flag("--print-config", print_config, "print the default configuration and exit");

    Overrides o;
    std::string config_path;
    std::string command;
    for (const char* name : {"sim", "certify", "orbits", "sweep", "growth", "entropy", "hoffman",
                             "probe-T", "probe-E", "probe-stability", "staircase", "cylinders",
                             "connections", "exceptional"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--seed", o.seed, "override the run seed");
        sub->add_option("--workers", o.workers, "override the worker count");
        sub->add_option("--depth-max", o.depth_max, "override the deepest certification depth");
        sub->add_option("--tol-eta", o.tol_eta, "override the singular band eta");
        sub->add_option("--tol-slack", o.tol_slack, "override the certificate safety slack");
        sub->add_option("--tol-residual", o.tol_residual, "override the orbit residual");
        sub->add_option("--tol-connection", o.tol_connection, "override the connection tolerance");
        sub->add_flag("--no-boundary-singular", o.no_boundary_singular,
                      "exclude the boundary of X from the singular distance");
        sub->add_option("--out", o.out_path, "write output to a file instead of stdout");
        sub->add_flag("--timings", o.timings, "include wall_time in sweep records");
        sub->add_flag("--full-scan", o.full_scan, "connections: scan all words, not just pruned");
        sub->add_option("--steps", o.steps, "sim: number of steps");
        sub->add_flag("--total", o.total, "sim: evaluate through singular points (total map)");
        sub->callback([&command, name]() { command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    if (print_config) {
        std::cout << pclab::default_config_json() << '\n';
        return 0;
    }
    if (command.empty()) {
        std::cerr << app.help() << '\n';
        return 1;
    }

    try {
        pclab::RunConfig cfg = load(config_path, o);
        Output out(o.out_path);
        if (command == "sim") return cmd_sim(cfg, out);
        if (command == "certify") return cmd_certify(cfg, out, false);
        if (command == "orbits") return cmd_certify(cfg, out, true);
        if (command == "sweep") return cmd_sweep(cfg, out, o.timings);
        if (command == "growth") return cmd_growth(cfg, out);
        if (command == "entropy") return cmd_entropy(cfg, out);
        if (command == "hoffman") return cmd_hoffman(cfg, out);
        if (command == "probe-T") return cmd_probe_t(cfg, out);
        if (command == "probe-E") return cmd_probe_e(cfg, out);
        if (command == "probe-stability") return cmd_probe_stability(cfg, out);
        if (command == "staircase") return cmd_staircase(cfg, out);
        if (command == "cylinders") return cmd_cylinders(cfg, out);
        if (command == "connections") return cmd_connections(cfg, out);
        if (command == "exceptional") return cmd_exceptional(cfg, out);
        std::cerr << "unknown subcommand " << command << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
