#include <catch2/catch.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

#include "pclab/families.hpp"
#include "pclab/records.hpp"
#include "support/generators.hpp"

using namespace pclab;

TEST_CASE("contracted rotation: breakpoint formula and parameter limits", "[families]") {
    const PiecewiseContraction f = contracted_rotation(0.5, 0.8);
    REQUIRE(f.breakpoints().mu[0] == Approx(0.4).margin(1e-15));
    // b -> (1 - lambda)+ pushes the breakpoint toward 1
    const PiecewiseContraction g = contracted_rotation(0.5, 0.5 + 1e-6);
    REQUIRE(g.breakpoints().mu[0] > 0.999);
    REQUIRE_THROWS_AS(contracted_rotation(0.5, 0.5), InvalidParameter);
    REQUIRE_THROWS_AS(contracted_rotation(0.5, 1.0), InvalidParameter);
    REQUIRE_THROWS_AS(contracted_rotation(1.1, 0.8), InvalidParameter);
}

TEST_CASE("contracted rotation branch images stay inside the interval", "[families]") {
    SplitMix64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const double lambda = rng.uniform(0.1, 0.9);
        const double b = rng.uniform(1.0 - lambda + 1e-6, 1.0 - 1e-6);
        const PiecewiseContraction f = contracted_rotation(lambda, b);
        const double bp = f.breakpoints().mu[0];
        // branch 0 over (0, bp): (b, 1); branch 1 over (bp, 1): (0, lambda + b - 1)
        REQUIRE(f.branches[0].apply1(0.0) == Approx(b));
        REQUIRE(f.branches[0].apply1(bp) == Approx(1.0).margin(1e-12));
        REQUIRE(f.branches[1].apply1(bp) == Approx(0.0).margin(1e-12));
        REQUIRE(f.branches[1].apply1(1.0) == Approx(lambda + b - 1.0).margin(1e-12));
        REQUIRE(lambda + b - 1.0 < 1.0);
    }
}

TEST_CASE("rotation number of the worked example is 1/2", "[families]") {
    const RotationNumber rho = rotation_number(0.5, 0.8, 100000);
    REQUIRE(rho.cycle_detected);
    REQUIRE(rho.p == 1);
    REQUIRE(rho.q == 2);
    REQUIRE(rho.value == Approx(0.5).margin(1e-15));
}

TEST_CASE("rotation number approaches 1 as b does", "[families]") {
    REQUIRE(rotation_number(0.5, 0.99, 100000).value > 0.8);
    REQUIRE(rotation_number(0.5, 0.99999, 100000).value > 0.9);
    REQUIRE(rotation_number(0.5, 0.99999, 100000).value < 1.0);
}

TEST_CASE("lift average is nondecreasing on a b-grid", "[families]") {
    const double lambda = 0.5;
    double prev = -1.0;
    for (int i = 0; i < 200; ++i) {
        const double b = 0.5 + 0.5 * (i + 0.5) / 200.0;
        const double rho = rotation_lift_average(lambda, b, 20000);
        REQUIRE(rho >= prev - 1e-12);
        prev = rho;
    }
}

TEST_CASE("rotation-number period matches the certified orbit period", "[families]") {
    SplitMix64 rng(72);
    int checked = 0;
    for (int trial = 0; trial < 12 && checked < 5; ++trial) {
        const double b = rng.uniform(0.55, 0.95);
        const RotationNumber rho = rotation_number(0.5, b, 100000);
        if (!rho.cycle_detected || rho.q > 40) continue;
        CertifySettings settings;
        settings.schedule = default_schedule(64);
        const CertifyOutcome outcome = certify(contracted_rotation(0.5, b), settings);
        if (!certified(outcome)) continue;
        const auto& cert = std::get<PeriodicityCertificate>(outcome);
        REQUIRE(cert.orbits.size() == 1);
        REQUIRE(cert.orbits[0].period == rho.q);
        ++checked;
    }
    REQUIRE(checked >= 3);
}

TEST_CASE("singular connection: fixed point sitting on the breakpoint", "[families]") {
    // phi_0(x) = x/2 + 1/4 fixes 1/2; place the breakpoint there
    std::vector<AffineContraction> branches = {make_contraction_1d(0.5, 0.25),
                                               make_contraction_1d(0.5, 0.3)};
    const PiecewiseContraction f = make_interval_pwc(std::move(branches), {0.5}, 1e-9);
    const auto hits = singular_connection_search(f, 3, 1e-9);
    REQUIRE_FALSE(hits.empty());
    bool found = false;
    for (const auto& h : hits)
        if (h.alpha == Word{0} && h.i == 0 && h.j == 0) found = true;
    REQUIRE(found);
}

TEST_CASE("singular connection: generic parameters are clean", "[families]") {
    SplitMix64 rng(73);
    for (int trial = 0; trial < 5; ++trial) {
        const PiecewiseContraction f = testgen::random_interval_map(rng, 3);
        REQUIRE(singular_connection_search(f, 12, 1e-9).empty());
    }
}

TEST_CASE("singular connection: constructed cross-breakpoint hit", "[families]") {
    SplitMix64 rng(74);
    auto branches = testgen::random_1d_branches(rng, 3);
    const double mu1 = 0.35;
    const double mu2 = branches[0].apply1(mu1); // phi_0(mu_1) lands on mu_2
    REQUIRE(mu2 > mu1 + 0.02);
    REQUIRE(mu2 < 0.98);
    const PiecewiseContraction f =
        make_interval_pwc(branches, {mu1, mu2}, 1e-9);
    const auto hits = singular_connection_search(f, 4, 1e-9);
    bool found = false;
    for (const auto& h : hits)
        if (h.alpha == Word{0} && h.i == 0 && h.j == 1) found = true;
    REQUIRE(found);
}

TEST_CASE("full-scan connection search agrees with the pruned scan", "[families]") {
    std::vector<AffineContraction> branches = {make_contraction_1d(0.5, 0.25),
                                               make_contraction_1d(0.5, 0.3)};
    const PiecewiseContraction f = make_interval_pwc(std::move(branches), {0.5}, 1e-9);
    const auto pruned = singular_connection_search(f, 4, 1e-9, false);
    const auto full = singular_connection_search(f, 4, 1e-9, true);
    // every pruned hit appears in the full scan
    for (const auto& h : pruned) {
        bool found = false;
        for (const auto& g : full)
            if (g.alpha == h.alpha && g.i == h.i && g.j == h.j) found = true;
        REQUIRE(found);
    }
}

TEST_CASE("homothety exceptional value of a single branch", "[families]") {
    // lambda = 0.5, b = (0.5, 0.5), v = (1, 0): mu_1 = 0.5/(1-0.5) = 1 is exceptional
    Eigen::MatrixXd V(1, 2);
    V << 1, 0;
    Eigen::VectorXd mu(1);
    mu << 0.5;
    Eigen::VectorXd shift(2);
    shift << 0.5, 0.5;
    std::vector<AffineContraction> branches;
    branches.push_back(make_contraction(0.5 * Eigen::MatrixXd::Identity(2, 2), 0.5 * shift));
    branches.push_back(make_contraction(0.5 * Eigen::MatrixXd::Identity(2, 2), 0.5 * shift));
    Eigen::VectorXd lo(2), hi(2);
    lo << -2, -2;
    hi << 3, 3;
    PiecewiseContraction f = make_hyperplane_pwc(Polytope::box(lo, hi), branches, V, mu, 1e-9);
    const auto hits = homothety_exceptional_check(f, 2, 1e-9);
    // b_alpha = (0.25, 0.25) + ... : depth-1 word gives <v, (0.25,0.25)>/(1-0.5) = 0.5 = mu_1
    REQUIRE_FALSE(hits.empty());
    for (const auto& h : hits) REQUIRE(h.value == Approx(0.5).margin(1e-12));
}

TEST_CASE("generic offsets avoid every exceptional hyperplane", "[families]") {
    SplitMix64 rng(75);
    auto inst = testgen::random_hyperplane_instance(rng, 2, true);
    const PiecewiseContraction f = instantiate(inst.family, inst.mu);
    REQUIRE(homothety_exceptional_check(f, 6, 1e-9).empty());
}

TEST_CASE("exceptional check flags an offset planted on the formula value", "[families]") {
    SplitMix64 rng(76);
    auto inst = testgen::random_hyperplane_instance(rng, 1, true);
    // plant mu exactly on the depth-1 exceptional value of branch 0
    const auto& phi = inst.family.branches[0];
    const double lam = phi.Lambda(0, 0);
    inst.mu(0) = inst.family.normals.row(0).dot(phi.b) / (1.0 - lam);
    const auto hits = [&]() {
        PiecewiseContraction f = instantiate(inst.family, inst.mu);
        return homothety_exceptional_check(f, 3, 1e-9);
    }();
    REQUIRE_FALSE(hits.empty());
}

TEST_CASE("hypothesis T probe: 1-D bound respected and tight-ish", "[families]") {
    SplitMix64 rng(77);
    FamilySpec spec = testgen::interval_family(testgen::random_1d_branches(rng, 2));
    Eigen::VectorXd mu_star(1);
    mu_star << 0.5;
    const HypTReport report =
        hypothesis_T_probe(spec, mu_star, 0.0, {0.1, 0.05, 0.01}, 2000, {3, 5}, 6, 7);
    REQUIRE(report.c == Approx(2.0)); // 2(N-1) with N = 2
    for (const auto& row : report.rows) {
        REQUIRE(row.ratio <= 1.0 + 3.0 * row.sigma / std::max(row.bound, 1e-300));
        REQUIRE(row.estimate >= 0.0);
    }
}

TEST_CASE("hypothesis T probe: epsilon zero has zero measure", "[families]") {
    SplitMix64 rng(78);
    FamilySpec spec = testgen::interval_family(testgen::random_1d_branches(rng, 2));
    Eigen::VectorXd mu_star(1);
    mu_star << 0.5;
    const HypTReport report = hypothesis_T_probe(spec, mu_star, 0.0, {0.0}, 1000, {3}, 4, 9);
    REQUIRE(report.rows[0].estimate == 0.0);
}

TEST_CASE("hypothesis E probe: single branch family has zero growth", "[families]") {
    FamilySpec spec = testgen::interval_family({make_contraction_1d(0.5, 0.25)});
    const HypEReport report = hypothesis_E_probe(spec, Eigen::VectorXd(), 1e-3, 10, 10, 5);
    for (const auto& row : report.rows) {
        REQUIRE(row.count == 1);
        REQUIRE(row.rate == 0.0);
    }
}

TEST_CASE("hypothesis E probe: contracted rotation growth stays subexponential", "[families]") {
    FamilySpec spec;
    spec.kind = FamilyKind::ContractedRotation;
    spec.cr_lambda = 0.5;
    spec.lo = Eigen::VectorXd::Constant(1, 0.55);
    spec.hi = Eigen::VectorXd::Constant(1, 0.95);
    Eigen::VectorXd mu_star(1);
    mu_star << 0.8;
    const HypEReport report = hypothesis_E_probe(spec, mu_star, 1e-3, 40, 10, 5);
    for (const auto& row : report.rows) {
        REQUIRE(row.count <= static_cast<std::size_t>(std::pow(2.0, row.n)));
        if (row.n == 40) REQUIRE(row.rate < 0.15);
    }
    // rates shrink (weakly) as delta shrinks
    const double r_big = report.limsup_proxy.rbegin()->second;
    const double r_small = report.limsup_proxy.begin()->second;
    REQUIRE(r_small <= r_big + 1e-12);
}

TEST_CASE("stability probe: identical sets at mu*, ratios bounded by slope products",
          "[families]") {
    SplitMix64 rng(79);
    FamilySpec spec = testgen::interval_family(testgen::random_1d_branches(rng, 2));
    Eigen::VectorXd mu_star(1);
    mu_star << 0.5;
    const int n = 4;
    const auto rows = stability_probe(spec, mu_star, n, {1e-2, 1e-3, 1e-4}, 20, 11);
    REQUIRE(rows.size() == 3);
    // shrinking delta drives the identical-itinerary fraction to one
    REQUIRE(rows[2].identical_fraction >= rows[0].identical_fraction);
    REQUIRE(rows[2].identical_fraction == Approx(1.0));
    double min_slope = 1.0;
    for (const auto& phi : spec.branches)
        min_slope = std::min(min_slope, std::abs(phi.Lambda(0, 0)));
    const double bound = std::pow(1.0 / min_slope, n);
    for (const auto& row : rows) REQUIRE(row.max_dh_ratio <= bound + 1e-9);
}

TEST_CASE("stability probe at mu* itself reports zero distance", "[families]") {
    SplitMix64 rng(80);
    FamilySpec spec = testgen::interval_family(testgen::random_1d_branches(rng, 2));
    Eigen::VectorXd mu_star(1);
    mu_star << 0.4;
    PiecewiseContraction f = instantiate(spec, mu_star);
    const CylinderCollection coll = enumerate_itineraries(f, 3);
    for (const auto& c : coll.cylinders)
        REQUIRE(region_hausdorff(c.region, c.region) == 0.0);
}

TEST_CASE("sweep: determinism, known sample, and empty plans", "[families]") {
    FamilySpec spec;
    spec.kind = FamilyKind::ContractedRotation;
    spec.cr_lambda = 0.5;
    spec.lo = Eigen::VectorXd::Constant(1, 0.55);
    spec.hi = Eigen::VectorXd::Constant(1, 0.95);

    SweepPlan plan;
    plan.count = 40;
    plan.seed = 13;
    plan.schedule = default_schedule(48);
    plan.workers = 2;

    const auto records1 = sweep(spec, plan);
    const auto records2 = sweep(spec, plan);
    std::ostringstream s1, s2;
    for (const auto& r : records1) s1 << sweep_record_line(r) << '\n';
    for (const auto& r : records2) s2 << sweep_record_line(r) << '\n';
    REQUIRE(s1.str() == s2.str());

    const SweepSummary summary = summarize(records1);
    REQUIRE(summary.count == 40);
    REQUIRE(summary.fraction > 0.8);
    REQUIRE(summary.wilson_lo <= summary.fraction);
    REQUIRE(summary.wilson_hi >= summary.fraction);

    // a known certified parameter as a single grid sample
    FamilySpec single = spec;
    single.lo(0) = 0.8 - 1e-9;
    single.hi(0) = 0.8 + 1e-9;
    SweepPlan one;
    one.sampler = SamplerKind::Grid;
    one.count = 1;
    one.schedule = default_schedule(24);
    const auto rec = sweep(single, one);
    REQUIRE(rec.size() == 1);
    REQUIRE(rec[0].certified);
    REQUIRE(rec[0].periods == std::vector<int>{2});

    SweepPlan empty;
    empty.count = 0;
    REQUIRE(sweep(spec, empty).empty());
}

TEST_CASE("sweep records serialize with 17 significant digits", "[families]") {
    SweepRecord rec;
    rec.index = 3;
    rec.mu = Eigen::VectorXd::Constant(1, 1.0 / 3.0);
    rec.certified = true;
    rec.depth = 8;
    rec.margin = 0.0625;
    rec.orbit_count = 1;
    rec.periods = {2};
    const std::string line = sweep_record_line(rec);
    REQUIRE(line.find("0.33333333333333331") != std::string::npos);
    REQUIRE(line.find("wall_time") == std::string::npos);
    REQUIRE(sweep_record_line(rec, true).find("wall_time") != std::string::npos);
}
