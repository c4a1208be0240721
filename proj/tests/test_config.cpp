#include <catch2/catch.hpp>

#include "pclab/config.hpp"

using namespace pclab;

TEST_CASE("config: contracted rotation map with defaults", "[config]") {
    const json j = json::parse(R"({"map": {"kind": "contracted_rotation",
                                           "lambda": 0.5, "b": 0.8}})");
    const RunConfig cfg = parse_config(j);
    REQUIRE(cfg.map.has_value());
    REQUIRE(cfg.map->breakpoints().mu[0] == Approx(0.4));
    REQUIRE(cfg.schedule.front() == 4);
    REQUIRE(cfg.schedule.back() == 64);
    REQUIRE(cfg.tol.eta == 1e-9);
}

TEST_CASE("config: default print round-trips through the parser", "[config]") {
    const RunConfig cfg = parse_config(json::parse(default_config_json()));
    REQUIRE(cfg.map.has_value());
    REQUIRE(cfg.seed == 1);
    REQUIRE(cfg.workers == 1);
    REQUIRE(cfg.sweep_count == 1000);
    REQUIRE(cfg.staircase_grid == 2000);
}

TEST_CASE("config: field-precise rejection messages", "[config]") {
    auto message_of = [](const char* text) {
        try {
            parse_config(json::parse(text));
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    REQUIRE(message_of(R"({"map": {"kind": "interval"}})") ==
            "map.breakpoints: missing required field");
    REQUIRE(message_of(R"({"map": {"kind": "interval", "breakpoints": [0.5],
                                   "branches": [{"slope": 1.25, "intercept": 0.1},
                                                {"slope": 0.5, "intercept": 0.1}]}})")
                .find("map.branches[0].slope") == 0);
    REQUIRE(message_of(R"({"map": {"kind": "nonsense"}})").find("map.kind") == 0);
    REQUIRE(message_of(R"({"workers": 0})") == "workers: must be >= 1");
    REQUIRE(message_of(R"({"map": {"kind": "contracted_rotation",
                                   "lambda": 0.5, "b": "x"}})")
                .find("map.b") == 0);
}

TEST_CASE("config: invariants validated at load", "[config]") {
    // unordered breakpoints
    REQUIRE_THROWS_AS(parse_config(json::parse(
                          R"({"map": {"kind": "interval", "breakpoints": [0.7, 0.3],
                              "branches": [{"slope": 0.4, "intercept": 0.2},
                                           {"slope": 0.4, "intercept": 0.2},
                                           {"slope": 0.4, "intercept": 0.2}]}})")),
                      ConfigError);
    // branch image escapes (0,1): violates A2
    REQUIRE_THROWS_AS(parse_config(json::parse(
                          R"({"map": {"kind": "interval", "breakpoints": [0.5],
                              "branches": [{"slope": 0.5, "intercept": 0.6},
                                           {"slope": 0.4, "intercept": 0.2}]}})")),
                      ConfigError);
    // hyperplane branch leaving relint(X)
    REQUIRE_THROWS_AS(parse_config(json::parse(
                          R"({"map": {"kind": "hyperplane",
                              "polytope": {"A": [[1,0],[-1,0],[0,1],[0,-1]],
                                           "b": [1,0,1,0]},
                              "normals": [[1,0]], "offsets": [0.5],
                              "branches": [
                                {"Lambda": [[0.5,0],[0,0.5]], "b": [0.9,0.1]},
                                {"Lambda": [[0.5,0],[0,0.5]], "b": [0.2,0.2]}]}})")),
                      ConfigError);
    // contraction factor >= 1 in a 2-D branch
    REQUIRE_THROWS_AS(parse_config(json::parse(
                          R"({"map": {"kind": "hyperplane",
                              "polytope": {"A": [[1,0],[-1,0],[0,1],[0,-1]],
                                           "b": [1,0,1,0]},
                              "normals": [[1,0]], "offsets": [0.5],
                              "branches": [
                                {"Lambda": [[1.01,0],[0,0.2]], "b": [0.1,0.1]},
                                {"Lambda": [[0.5,0],[0,0.5]], "b": [0.2,0.2]}]}})")),
                      NotAContraction);
}

TEST_CASE("config: weighted norm changes the contraction factor", "[config]") {
    // Lambda = [[0.5, 0.9], [0, 0.5]] has spectral norm > 1 in the Euclidean
    // metric but contracts in a suitable weighted metric.
    Eigen::MatrixXd L(2, 2);
    L << 0.5, 0.9, 0.0, 0.5;
    REQUIRE(Norm().op(L) >= 1.0);
    Eigen::MatrixXd W(2, 2);
    W << 1.0, 0.0, 0.0, 25.0;
    REQUIRE(Norm::weighted(W).op(L) < 1.0);
    REQUIRE_THROWS_AS(Norm::weighted(-W), ConfigError);
}

TEST_CASE("config: certify base point override", "[config]") {
    const json j = json::parse(R"({"map": {"kind": "contracted_rotation",
                                           "lambda": 0.5, "b": 0.8},
                                   "certify": {"x0": [0.25]}})");
    const RunConfig cfg = parse_config(j);
    REQUIRE(cfg.certify_x0.has_value());
    REQUIRE((*cfg.certify_x0)(0) == 0.25);
}

TEST_CASE("config: family parsing with parameter boxes", "[config]") {
    const json j = json::parse(R"({"family": {"kind": "contracted_rotation",
                                              "lambda": 0.5,
                                              "lo": [0.55], "hi": [0.95]},
                                   "sweep": {"sampler": "grid", "count": 7}})");
    const RunConfig cfg = parse_config(j);
    REQUIRE(cfg.family.has_value());
    REQUIRE(cfg.sampler == SamplerKind::Grid);
    REQUIRE(cfg.sweep_count == 7);
    REQUIRE_THROWS_AS(parse_config(json::parse(
                          R"({"family": {"kind": "contracted_rotation", "lambda": 0.5,
                              "lo": [0.9], "hi": [0.6]}})")),
                      ConfigError);
}
