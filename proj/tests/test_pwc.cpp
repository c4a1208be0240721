#include <catch2/catch.hpp>

#include "pclab/families.hpp"
#include "pclab/pwc.hpp"
#include "pclab/rng.hpp"
#include "support/generators.hpp"

using namespace pclab;

namespace {

Eigen::VectorXd point2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

// unit square cut by one vertical hyperplane x = mu1
PiecewiseContraction one_hyperplane_map(double mu1, double eta) {
    Eigen::MatrixXd V(1, 2);
    V << 1, 0;
    Eigen::VectorXd mu(1);
    mu << mu1;
    std::vector<AffineContraction> branches;
    for (int i = 0; i < 2; ++i) {
        Eigen::VectorXd c = point2(0.35 + 0.3 * i, 0.5);
        branches.push_back(make_contraction(0.3 * Eigen::MatrixXd::Identity(2, 2), 0.7 * c));
    }
    return make_hyperplane_pwc(Polytope::unit_square(), std::move(branches), V, mu, eta);
}

} // namespace

TEST_CASE("label: strict side of a hyperplane", "[pwc]") {
    const PiecewiseContraction f = one_hyperplane_map(0.5, 1e-9);
    const LabelResult lr = label(f, point2(0.7, 0.2));
    REQUIRE(lr.is_regular);
    REQUIRE(lr.label == 1); // s_1 = +1 since 0.7 > 0.5
    const LabelResult lo = label(f, point2(0.3, 0.2));
    REQUIRE(lo.is_regular);
    REQUIRE(lo.label == 0);
}

TEST_CASE("label on the hyperplane: total map takes -1, certification says singular", "[pwc]") {
    const PiecewiseContraction f = one_hyperplane_map(0.5, 0.0);
    const Eigen::VectorXd x = point2(0.5, 0.2);
    // total evaluation follows the tie convention s_j = -1
    REQUIRE(label_total(f, x) == 0);
    // certification classification keeps exact hits singular even at eta = 0
    const LabelResult lr = label(f, x);
    REQUIRE_FALSE(lr.is_regular);
    REQUIRE(lr.singular_distance == 0.0);
}

TEST_CASE("label: eta band around a 1-D breakpoint", "[pwc]") {
    const double eta = 1e-9;
    SplitMix64 rng(31);
    auto branches = testgen::random_1d_branches(rng, 2);
    const PiecewiseContraction f = make_interval_pwc(std::move(branches), {0.4}, eta);
    REQUIRE(label(f, point1(0.4 + 10 * eta)).is_regular);
    REQUIRE(label(f, point1(0.4 - 10 * eta)).is_regular);
    REQUIRE_FALSE(label(f, point1(0.4 + 0.5 * eta)).is_regular);
    REQUIRE_FALSE(label(f, point1(0.4 - 0.5 * eta)).is_regular);
    REQUIRE(label(f, point1(0.4 + 10 * eta)).label == 1);
    REQUIRE(label(f, point1(0.4 - 10 * eta)).label == 0);
}

TEST_CASE("label rejects points outside the space", "[pwc]") {
    const PiecewiseContraction f = contracted_rotation(0.5, 0.8);
    REQUIRE_THROWS_AS(label(f, point1(1.5)), OutsideDomain);
}

TEST_CASE("step follows the contracted rotation formula", "[pwc]") {
    const PiecewiseContraction f = contracted_rotation(0.5, 0.8);
    REQUIRE(step(f, point1(0.0))(0) == Approx(0.8).margin(1e-15));
    REQUIRE(step(f, point1(0.8))(0) == Approx(0.2).margin(1e-15)); // 0.8 >= 0.4: second branch
}

TEST_CASE("the fixed point of a single-branch map steps to itself", "[pwc]") {
    const PiecewiseContraction f =
        make_interval_pwc({make_contraction_1d(0.5, 0.25)}, {}, 1e-9);
    const Eigen::VectorXd fp = fixed_point(f.branches[0]);
    REQUIRE(step(f, fp)(0) == Approx(fp(0)).margin(1e-12));
}

TEST_CASE("step at a singular point: 1-D side convention, hyperplane error", "[pwc]") {
    // the contracted rotation wraps its breakpoint to 0 (mod-1 semantics)
    const PiecewiseContraction cr = contracted_rotation(0.5, 0.8);
    REQUIRE(step(cr, point1(0.4))(0) == Approx(0.0).margin(1e-15));
    // a generic interval map keeps the default left-continuous convention
    std::vector<AffineContraction> branches = {make_contraction_1d(0.5, 0.1),
                                               make_contraction_1d(0.5, 0.3)};
    const PiecewiseContraction g = make_interval_pwc(std::move(branches), {0.4}, 1e-9);
    REQUIRE(step(g, point1(0.4))(0) == Approx(0.3).margin(1e-15)); // left branch value
    const PiecewiseContraction hp = one_hyperplane_map(0.5, 1e-9);
    REQUIRE_THROWS_AS(step(hp, point2(0.5, 0.3)), SingularPoint);
}

TEST_CASE("itinerary of a single-branch map is constant", "[pwc]") {
    const PiecewiseContraction f =
        make_interval_pwc({make_contraction_1d(0.5, 0.25)}, {}, 1e-9);
    const ItineraryResult it = itinerary(f, point1(0.3), 5);
    REQUIRE(it.complete());
    REQUIRE(it.word == Word{0, 0, 0, 0, 0});
}

TEST_CASE("itinerary of the contracted rotation alternates on the 2-cycle", "[pwc]") {
    const PiecewiseContraction f = contracted_rotation(0.5, 0.8);
    const ItineraryResult it = itinerary(f, point1(4.0 / 15.0), 4);
    REQUIRE(it.complete());
    REQUIRE(it.word == Word{0, 1, 0, 1}); // cells (0,0.4) and (0.4,1) in turn
}

TEST_CASE("itinerary fails immediately on a breakpoint", "[pwc]") {
    const PiecewiseContraction f = contracted_rotation(0.5, 0.8);
    const ItineraryResult it = itinerary(f, point1(0.4), 4);
    REQUIRE_FALSE(it.complete());
    REQUIRE(*it.failed_at == 0);
    REQUIRE(it.word.empty());
}

TEST_CASE("dist_to_singular in one dimension", "[pwc]") {
    SplitMix64 rng(32);
    auto branches = testgen::random_1d_branches(rng, 2);
    const PiecewiseContraction f = make_interval_pwc(std::move(branches), {0.4}, 1e-9);
    REQUIRE(dist_to_singular(f, point1(0.55)) == Approx(0.15).margin(1e-15));
    REQUIRE(dist_to_singular(f, point1(0.4)) == 0.0);
    REQUIRE(dist_to_singular(f, point1(0.05)) == Approx(0.05).margin(1e-15)); // boundary wins
}

TEST_CASE("dist_to_singular with two hyperplanes and the boundary flag", "[pwc]") {
    Eigen::MatrixXd V(2, 2);
    V << 1, 0, 0, 1;
    Eigen::VectorXd mu(2);
    mu << 0.3, 0.7;
    std::vector<AffineContraction> branches;
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd c = point2(0.4 + 0.05 * i, 0.5);
        branches.push_back(make_contraction(0.25 * Eigen::MatrixXd::Identity(2, 2), 0.75 * c));
    }
    PiecewiseContraction f =
        make_hyperplane_pwc(Polytope::unit_square(), branches, V, mu, 1e-9, true);
    REQUIRE(dist_to_singular(f, point2(0.5, 0.5)) == Approx(0.2).margin(1e-15));
    // near the right wall the flag decides
    REQUIRE(dist_to_singular(f, point2(0.95, 0.5)) == Approx(0.05).margin(1e-15));
    PiecewiseContraction g =
        make_hyperplane_pwc(Polytope::unit_square(), branches, V, mu, 1e-9, false);
    REQUIRE(dist_to_singular(g, point2(0.95, 0.5)) == Approx(0.2).margin(1e-15));
}

TEST_CASE("orbits of regular points stay in the space", "[pwc]") {
    SplitMix64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const PiecewiseContraction f = testgen::random_interval_map(rng, 3);
        const auto pts = orbit(f, point1(rng.uniform(0.05, 0.95)), 200);
        for (const auto& p : pts) REQUIRE(f.space.min_slack(p.x) >= -1e-10);
    }
}

TEST_CASE("shared itineraries contract by lambda^n", "[pwc]") {
    SplitMix64 rng(34);
    for (int trial = 0; trial < 20; ++trial) {
        const PiecewiseContraction f = testgen::random_interval_map(rng, 2);
        const double x = rng.uniform(0.05, 0.95);
        const double y = x + rng.uniform(-1e-3, 1e-3);
        if (y <= 0.0 || y >= 1.0) continue;
        const int n = 8;
        const ItineraryResult ix = itinerary(f, point1(x), n);
        const ItineraryResult iy = itinerary(f, point1(y), n);
        if (!ix.complete() || !iy.complete() || ix.word != iy.word) continue;
        Eigen::VectorXd fx = point1(x), fy = point1(y);
        for (int k = 0; k < n; ++k) {
            fx = step(f, fx);
            fy = step(f, fy);
        }
        REQUIRE((fx - fy).norm() <= pow_int(f.lambda, n) * std::abs(x - y) + 1e-14);
    }
}

TEST_CASE("itinerary symbols agree with per-step labels", "[pwc]") {
    SplitMix64 rng(35);
    const PiecewiseContraction f = testgen::random_interval_map(rng, 3);
    const Eigen::VectorXd x0 = point1(0.37);
    const ItineraryResult it = itinerary(f, x0, 12);
    if (it.complete()) {
        Eigen::VectorXd x = x0;
        for (int k = 0; k < 12; ++k) {
            REQUIRE(label(f, x).label == it.word[static_cast<std::size_t>(k)]);
            x = step(f, x);
        }
    }
}

TEST_CASE("failure index equals the first singular iterate", "[pwc]") {
    // breakpoint 0.25 placed exactly where branch 0 sends x = 0.2
    std::vector<AffineContraction> branches = {make_contraction_1d(0.5, 0.15),
                                               make_contraction_1d(0.5, 0.2)};
    const PiecewiseContraction f = make_interval_pwc(std::move(branches), {0.25}, 1e-12);
    REQUIRE(*itinerary(f, point1(0.25), 5).failed_at == 0); // on the singular set itself
    const ItineraryResult it = itinerary(f, point1(0.2), 5);
    REQUIRE_FALSE(it.complete());
    REQUIRE(*it.failed_at == 1);
    REQUIRE(it.word == Word{0});
    // a start whose whole orbit stays clear is regular of every tested order
    REQUIRE(itinerary(f, point1(0.8), 12).complete());
}
