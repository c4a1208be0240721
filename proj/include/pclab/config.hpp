#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pclab/errors.hpp"
#include "pclab/families.hpp"
#include "pclab/pwc.hpp"

namespace pclab {

using nlohmann::json;

namespace cfg_detail {

inline std::string path_join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(path_join(path, key) + ": missing required field");
    return j.at(key);
}

inline double num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

inline double get_num(const json& j, const std::string& key, const std::string& path) {
    return num(require(j, key, path), path_join(path, key));
}

inline double get_num_or(const json& j, const std::string& key, const std::string& path,
                         double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return num(j.at(key), path_join(path, key));
}

inline long long get_int_or(const json& j, const std::string& key, const std::string& path,
                            long long fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path_join(path, key) + ": expected an integer");
    return v.get<long long>();
}

inline bool get_bool_or(const json& j, const std::string& key, const std::string& path,
                        bool fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(path_join(path, key) + ": expected a boolean");
    return v.get<bool>();
}

inline std::string get_str(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) throw ConfigError(path_join(path, key) + ": expected a string");
    return v.get<std::string>();
}

inline Eigen::VectorXd vec(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<int>(i)) = num(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

inline Eigen::MatrixXd mat(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ConfigError(path + ": expected rows of numbers");
    Eigen::MatrixXd m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigError(rp + ": ragged matrix row");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = num(j[r][c], rp);
    }
    return m;
}

} // namespace cfg_detail

struct Tolerances {
    double eta = 1e-9;
    double certificate_slack = 1e-12;
    double orbit_residual = 1e-10;
    double connection_tol = 1e-9;
    bool boundary_singular = true;
};

struct ProbeConfig {
    double delta0 = 0.0; // 0: whole parameter domain (hyperplane kind defaults to 1)
    double delta = 1e-3;
    std::vector<double> epsilons = {0.1, 0.05, 0.01};
    int samples = 2000;
    std::vector<int> depths = {3, 5};
    int n_max = 20;
    int stability_n = 4;
    std::vector<double> stability_deltas = {1e-2, 1e-3, 1e-4};
};

struct RunConfig {
    std::optional<PiecewiseContraction> map;
    std::optional<FamilySpec> family;
    std::optional<Eigen::VectorXd> mu_star; // probe center; family sweeps ignore it
    std::optional<Eigen::MatrixXd> matrix;  // hoffman input
    std::optional<Eigen::VectorXd> hoffman_b0, hoffman_b, hoffman_x0;

    Tolerances tol;
    std::vector<int> schedule;
    int depth_max = 64;
    std::uint64_t seed = 1;
    int workers = 1;
    std::size_t enumeration_cap = 1000000;
    Norm norm;

    // sim
    Eigen::VectorXd sim_x0;
    int sim_steps = 16;
    bool sim_total = false;

    // certify base point override (default: interval 0, polytope Chebyshev center)
    std::optional<Eigen::VectorXd> certify_x0;

    // sweep
    SamplerKind sampler = SamplerKind::Uniform;
    std::size_t sweep_count = 1000;

    // staircase
    std::size_t staircase_grid = 2000;
    long long staircase_horizon = 100000;

    // connection / exceptional scans
    int scan_depth = 12;
    bool scan_full = false;

    int n_max = 20; // growth/entropy depth

    ProbeConfig probe;
};

namespace cfg_detail {

inline Norm parse_norm(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    const std::string kind = get_str(j, "kind", path);
    if (kind == "euclidean") return Norm::euclidean();
    if (kind == "weighted") return Norm::weighted(mat(require(j, "weight", path), path + ".weight"));
    throw ConfigError(path + ".kind: unknown norm kind '" + kind + "'");
}

inline std::vector<AffineContraction> parse_branches_1d(const json& j, const std::string& path,
                                                        const Norm& norm) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array");
    std::vector<AffineContraction> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string bp = path + "[" + std::to_string(i) + "]";
        const double slope = get_num(j[i], "slope", bp);
        const double intercept = get_num(j[i], "intercept", bp);
        if (!(std::abs(slope) < 1.0))
            throw ConfigError(bp + ".slope: |slope| must be < 1 (got " + std::to_string(slope) +
                              ")");
        out.push_back(make_contraction_1d(slope, intercept, norm));
    }
    return out;
}

inline std::vector<AffineContraction> parse_branches_nd(const json& j, const std::string& path,
                                                        const Norm& norm) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array");
    std::vector<AffineContraction> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string bp = path + "[" + std::to_string(i) + "]";
        Eigen::MatrixXd L = mat(require(j[i], "Lambda", bp), bp + ".Lambda");
        Eigen::VectorXd b = vec(require(j[i], "b", bp), bp + ".b");
        out.push_back(make_contraction(std::move(L), std::move(b), norm));
    }
    return out;
}

inline Polytope parse_polytope(const json& j, const std::string& path) {
    Eigen::MatrixXd A = mat(require(j, "A", path), path + ".A");
    Eigen::VectorXd b = vec(require(j, "b", path), path + ".b");
    if (A.rows() != b.size()) throw ConfigError(path + ": A and b row counts differ");
    return Polytope::from_rows(std::move(A), std::move(b));
}

inline PiecewiseContraction parse_map(const json& j, const std::string& path, const Tolerances& tol,
                                      const Norm& norm) {
    const std::string kind = get_str(j, "kind", path);
    if (kind == "contracted_rotation") {
        return contracted_rotation(get_num(j, "lambda", path), get_num(j, "b", path), tol.eta);
    }
    if (kind == "interval") {
        Eigen::VectorXd bp = vec(require(j, "breakpoints", path), path + ".breakpoints");
        std::vector<double> breakpoints(bp.data(), bp.data() + bp.size());
        auto branches = parse_branches_1d(require(j, "branches", path), path + ".branches", norm);
        const bool require_a2 = get_bool_or(j, "require_a2", path, true);
        return make_interval_pwc(std::move(branches), std::move(breakpoints), tol.eta, require_a2);
    }
    if (kind == "hyperplane") {
        Polytope X = parse_polytope(require(j, "polytope", path), path + ".polytope");
        Eigen::MatrixXd V = mat(require(j, "normals", path), path + ".normals");
        Eigen::VectorXd mu = vec(require(j, "offsets", path), path + ".offsets");
        auto branches = parse_branches_nd(require(j, "branches", path), path + ".branches", norm);
        return make_hyperplane_pwc(std::move(X), std::move(branches), std::move(V), std::move(mu),
                                   tol.eta, tol.boundary_singular, norm);
    }
    throw ConfigError(path + ".kind: unknown map kind '" + kind + "'");
}

inline FamilySpec parse_family(const json& j, const std::string& path, const Tolerances& tol,
                               const Norm& norm) {
    FamilySpec spec;
    spec.eta = tol.eta;
    spec.boundary_singular = tol.boundary_singular;
    spec.norm = norm;
    const std::string kind = get_str(j, "kind", path);
    if (kind == "contracted_rotation") {
        spec.kind = FamilyKind::ContractedRotation;
        spec.cr_lambda = get_num(j, "lambda", path);
        spec.lo = vec(require(j, "lo", path), path + ".lo");
        spec.hi = vec(require(j, "hi", path), path + ".hi");
        if (spec.lo.size() != 1 || spec.hi.size() != 1)
            throw ConfigError(path + ": contracted rotation has a single parameter b");
    } else if (kind == "interval") {
        spec.kind = FamilyKind::Interval1D;
        spec.branches = parse_branches_1d(require(j, "branches", path), path + ".branches", norm);
        const int M = static_cast<int>(spec.branches.size()) - 1;
        spec.lo = j.contains("lo") ? vec(j.at("lo"), path + ".lo")
                                   : Eigen::VectorXd::Constant(M, 0.0);
        spec.hi = j.contains("hi") ? vec(j.at("hi"), path + ".hi")
                                   : Eigen::VectorXd::Constant(M, 1.0);
        if (spec.lo.size() != M || spec.hi.size() != M)
            throw ConfigError(path + ": lo/hi must have one entry per breakpoint");
    } else if (kind == "hyperplane") {
        spec.kind = FamilyKind::HyperplaneMultiD;
        spec.X = parse_polytope(require(j, "polytope", path), path + ".polytope");
        spec.normals = mat(require(j, "normals", path), path + ".normals");
        for (int r = 0; r < spec.normals.rows(); ++r) {
            const double len = spec.normals.row(r).norm();
            if (len < 1e-14) throw ConfigError(path + ".normals: zero normal");
            spec.normals.row(r) /= len;
        }
        spec.branches = parse_branches_nd(require(j, "branches", path), path + ".branches", norm);
        if (spec.branches.size() != (std::size_t{1} << spec.normals.rows()))
            throw ConfigError(path + ".branches: need exactly 2^l branches in label order");
        spec.lo = vec(require(j, "lo", path), path + ".lo");
        spec.hi = vec(require(j, "hi", path), path + ".hi");
        if (spec.lo.size() != spec.normals.rows() || spec.hi.size() != spec.normals.rows())
            throw ConfigError(path + ": lo/hi must have one entry per hyperplane");
    } else {
        throw ConfigError(path + ".kind: unknown family kind '" + kind + "'");
    }
    for (int i = 0; i < spec.lo.size(); ++i)
        if (!(spec.lo(i) < spec.hi(i)))
            throw ConfigError(path + ": parameter box must satisfy lo < hi componentwise");
    return spec;
}

} // namespace cfg_detail

inline std::string default_config_json() {
    return R"({
  "map": {"kind": "contracted_rotation", "lambda": 0.5, "b": 0.8},
  "tolerances": {
    "eta": 1e-09,
    "certificate_slack": 1e-12,
    "orbit_residual": 1e-10,
    "connection_tol": 1e-09,
    "boundary_singular": true
  },
  "schedule": {"depths": [], "depth_max": 64},
  "seed": 1,
  "workers": 1,
  "enumeration_cap": 1000000,
  "norm": {"kind": "euclidean"},
  "sim": {"x0": [0.0], "steps": 16, "total": false},
  "sweep": {"sampler": "uniform", "count": 1000},
  "staircase": {"grid": 2000, "horizon": 100000},
  "scan": {"depth": 12, "full": false},
  "growth": {"n_max": 20},
  "probe": {
    "delta0": 0.0,
    "delta": 0.001,
    "epsilons": [0.1, 0.05, 0.01],
    "samples": 2000,
    "depths": [3, 5],
    "n_max": 20,
    "stability_n": 4,
    "stability_deltas": [0.01, 0.001, 0.0001]
  }
})";
}

inline RunConfig parse_config(const json& j) {
    using namespace cfg_detail;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    RunConfig cfg;
    if (j.contains("norm")) cfg.norm = parse_norm(j.at("norm"), "norm");
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        cfg.tol.eta = get_num_or(t, "eta", "tolerances", cfg.tol.eta);
        cfg.tol.certificate_slack =
            get_num_or(t, "certificate_slack", "tolerances", cfg.tol.certificate_slack);
        cfg.tol.orbit_residual = get_num_or(t, "orbit_residual", "tolerances", cfg.tol.orbit_residual);
        cfg.tol.connection_tol = get_num_or(t, "connection_tol", "tolerances", cfg.tol.connection_tol);
        cfg.tol.boundary_singular =
            get_bool_or(t, "boundary_singular", "tolerances", cfg.tol.boundary_singular);
        if (cfg.tol.eta < 0) throw ConfigError("tolerances.eta: must be >= 0");
    }
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        cfg.depth_max = static_cast<int>(get_int_or(s, "depth_max", "schedule", cfg.depth_max));
        if (s.contains("depths")) {
            for (std::size_t i = 0; i < s.at("depths").size(); ++i) {
                const json& v = s.at("depths")[i];
                if (!v.is_number_integer())
                    throw ConfigError("schedule.depths[" + std::to_string(i) + "]: expected integer");
                cfg.schedule.push_back(v.get<int>());
            }
        }
    }
    if (cfg.schedule.empty()) cfg.schedule = default_schedule(cfg.depth_max);
    cfg.seed = static_cast<std::uint64_t>(get_int_or(j, "seed", "", 1));
    cfg.workers = static_cast<int>(get_int_or(j, "workers", "", 1));
    if (cfg.workers < 1) throw ConfigError("workers: must be >= 1");
    cfg.enumeration_cap =
        static_cast<std::size_t>(get_int_or(j, "enumeration_cap", "", 1000000));

    if (j.contains("map")) cfg.map = parse_map(j.at("map"), "map", cfg.tol, cfg.norm);
    if (j.contains("family"))
        cfg.family = parse_family(j.at("family"), "family", cfg.tol, cfg.norm);
    if (j.contains("mu_star")) cfg.mu_star = vec(j.at("mu_star"), "mu_star");
    if (j.contains("matrix")) cfg.matrix = mat(j.at("matrix"), "matrix");
    if (j.contains("hoffman")) {
        const json& h = j.at("hoffman");
        if (h.contains("b0")) cfg.hoffman_b0 = vec(h.at("b0"), "hoffman.b0");
        if (h.contains("b")) cfg.hoffman_b = vec(h.at("b"), "hoffman.b");
        if (h.contains("x0")) cfg.hoffman_x0 = vec(h.at("x0"), "hoffman.x0");
    }
    if (j.contains("sim")) {
        const json& s = j.at("sim");
        if (s.contains("x0")) cfg.sim_x0 = vec(s.at("x0"), "sim.x0");
        cfg.sim_steps = static_cast<int>(get_int_or(s, "steps", "sim", cfg.sim_steps));
        cfg.sim_total = get_bool_or(s, "total", "sim", cfg.sim_total);
    }
    if (j.contains("certify") && j.at("certify").contains("x0"))
        cfg.certify_x0 = vec(j.at("certify").at("x0"), "certify.x0");
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.contains("sampler")) {
            const std::string kind = get_str(s, "sampler", "sweep");
            if (kind == "grid") cfg.sampler = SamplerKind::Grid;
            else if (kind == "uniform") cfg.sampler = SamplerKind::Uniform;
            else throw ConfigError("sweep.sampler: expected 'grid' or 'uniform'");
        }
        cfg.sweep_count = static_cast<std::size_t>(get_int_or(s, "count", "sweep", 1000));
    }
    if (j.contains("staircase")) {
        const json& s = j.at("staircase");
        cfg.staircase_grid = static_cast<std::size_t>(get_int_or(s, "grid", "staircase", 2000));
        cfg.staircase_horizon = get_int_or(s, "horizon", "staircase", 100000);
    }
    if (j.contains("scan")) {
        const json& s = j.at("scan");
        cfg.scan_depth = static_cast<int>(get_int_or(s, "depth", "scan", cfg.scan_depth));
        cfg.scan_full = get_bool_or(s, "full", "scan", cfg.scan_full);
    }
    if (j.contains("growth"))
        cfg.n_max = static_cast<int>(get_int_or(j.at("growth"), "n_max", "growth", cfg.n_max));
    if (j.contains("probe")) {
        const json& p = j.at("probe");
        cfg.probe.delta0 = get_num_or(p, "delta0", "probe", cfg.probe.delta0);
        cfg.probe.delta = get_num_or(p, "delta", "probe", cfg.probe.delta);
        if (p.contains("epsilons")) {
            cfg.probe.epsilons.clear();
            for (std::size_t i = 0; i < p.at("epsilons").size(); ++i)
                cfg.probe.epsilons.push_back(
                    num(p.at("epsilons")[i], "probe.epsilons[" + std::to_string(i) + "]"));
        }
        cfg.probe.samples = static_cast<int>(get_int_or(p, "samples", "probe", cfg.probe.samples));
        if (p.contains("depths")) {
            cfg.probe.depths.clear();
            for (std::size_t i = 0; i < p.at("depths").size(); ++i) {
                const json& v = p.at("depths")[i];
                if (!v.is_number_integer())
                    throw ConfigError("probe.depths[" + std::to_string(i) + "]: expected integer");
                cfg.probe.depths.push_back(v.get<int>());
            }
        }
        cfg.probe.n_max = static_cast<int>(get_int_or(p, "n_max", "probe", cfg.probe.n_max));
        cfg.probe.stability_n =
            static_cast<int>(get_int_or(p, "stability_n", "probe", cfg.probe.stability_n));
        if (p.contains("stability_deltas")) {
            cfg.probe.stability_deltas.clear();
            for (std::size_t i = 0; i < p.at("stability_deltas").size(); ++i)
                cfg.probe.stability_deltas.push_back(num(
                    p.at("stability_deltas")[i], "probe.stability_deltas[" + std::to_string(i) + "]"));
        }
    }
    if (cfg.sim_x0.size() == 0 && cfg.map) {
        cfg.sim_x0 = default_base_point(*cfg.map);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

} // namespace pclab
