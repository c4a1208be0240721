#pragma once

// Shared random-instance generators for the unit and acceptance suites. All
// draws go through SplitMix64 so the suites are reproducible bit for bit.

#include <vector>

#include "pclab/families.hpp"
#include "pclab/geometry.hpp"
#include "pclab/ifs.hpp"
#include "pclab/pwc.hpp"
#include "pclab/rng.hpp"

namespace pclab::testgen {

// 1-D branches with images inside (margin, 1-margin): assumption A2 with room
// to spare, so composition images stay clear of {0,1}.
inline std::vector<AffineContraction> random_1d_branches(SplitMix64& rng, int n,
                                                         double margin = 0.15) {
    std::vector<AffineContraction> out;
    for (int i = 0; i < n; ++i) {
        double slope = rng.uniform(0.2, 0.6);
        if (rng.uniform01() < 0.5) slope = -slope;
        const double lo = margin + (slope < 0 ? -slope : 0.0);
        const double hi = 1.0 - margin - (slope > 0 ? slope : 0.0);
        const double intercept = rng.uniform(lo, hi);
        out.push_back(make_contraction_1d(slope, intercept));
    }
    return out;
}

inline std::vector<double> random_breakpoints(SplitMix64& rng, int count, double min_gap = 0.05) {
    for (;;) {
        std::vector<double> mu(static_cast<std::size_t>(count));
        for (auto& m : mu) m = rng.uniform(0.1, 0.9);
        std::sort(mu.begin(), mu.end());
        bool ok = true;
        for (int i = 0; i + 1 < count; ++i)
            if (mu[static_cast<std::size_t>(i + 1)] - mu[static_cast<std::size_t>(i)] < min_gap)
                ok = false;
        if (ok) return mu;
    }
}

inline PiecewiseContraction random_interval_map(SplitMix64& rng, int n_branches,
                                                double eta = 1e-9) {
    auto branches = random_1d_branches(rng, n_branches);
    auto mu = random_breakpoints(rng, n_branches - 1);
    return make_interval_pwc(std::move(branches), std::move(mu), eta);
}

inline Eigen::VectorXd random_unit_vector(SplitMix64& rng, int d) {
    Eigen::VectorXd v(d);
    for (;;) {
        for (int i = 0; i < d; ++i) v(i) = rng.uniform(-1.0, 1.0);
        const double len = v.norm();
        if (len > 0.2) return v / len;
    }
}

// Homothety branches on the unit square: contraction centers well inside, so
// every branch image stays inside relint(X).
inline std::vector<AffineContraction> random_homothety_branches(SplitMix64& rng, int count,
                                                                double lam_lo = 0.2,
                                                                double lam_hi = 0.42) {
    std::vector<AffineContraction> out;
    for (int i = 0; i < count; ++i) {
        const double lam = rng.uniform(lam_lo, lam_hi);
        Eigen::VectorXd c(2);
        c << rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7);
        out.push_back(make_contraction(lam * Eigen::MatrixXd::Identity(2, 2),
                                       (1.0 - lam) * c));
    }
    return out;
}

// General (rotation + scale) contraction branches on the unit square, image
// pinned inside the square by centering.
inline std::vector<AffineContraction> random_general_branches_2d(SplitMix64& rng, int count) {
    std::vector<AffineContraction> out;
    for (int i = 0; i < count; ++i) {
        const double lam = rng.uniform(0.2, 0.4);
        const double theta = rng.uniform(0.0, 6.283185307179586);
        Eigen::MatrixXd L(2, 2);
        L << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        L *= lam;
        Eigen::VectorXd c(2);
        c << rng.uniform(0.35, 0.65), rng.uniform(0.35, 0.65);
        out.push_back(make_contraction(L, c - L * c));
    }
    return out;
}

struct HyperplaneInstance {
    FamilySpec family;
    Eigen::VectorXd mu;
};

// Random hyperplane family on the unit square with offsets drawn so that each
// hyperplane cuts through the middle of the square.
inline HyperplaneInstance random_hyperplane_instance(SplitMix64& rng, int l,
                                                     bool homothety = true,
                                                     double eta = 1e-9) {
    HyperplaneInstance inst;
    inst.family.kind = FamilyKind::HyperplaneMultiD;
    inst.family.X = Polytope::unit_square();
    inst.family.eta = eta;
    inst.family.normals.resize(l, 2);
    inst.family.lo.resize(l);
    inst.family.hi.resize(l);
    inst.mu.resize(l);
    for (int j = 0; j < l; ++j) {
        inst.family.normals.row(j) = random_unit_vector(rng, 2).transpose();
        Eigen::VectorXd p(2);
        p << rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7);
        inst.mu(j) = inst.family.normals.row(j).dot(p);
        inst.family.lo(j) = inst.mu(j) - 0.25;
        inst.family.hi(j) = inst.mu(j) + 0.25;
    }
    inst.family.branches = homothety ? random_homothety_branches(rng, 1 << l)
                                     : random_general_branches_2d(rng, 1 << l);
    return inst;
}

inline FamilySpec interval_family(std::vector<AffineContraction> branches, double eta = 1e-9) {
    FamilySpec spec;
    spec.kind = FamilyKind::Interval1D;
    spec.branches = std::move(branches);
    const int m = static_cast<int>(spec.branches.size()) - 1;
    spec.lo = Eigen::VectorXd::Constant(m, 0.0);
    spec.hi = Eigen::VectorXd::Constant(m, 1.0);
    spec.eta = eta;
    return spec;
}

} // namespace pclab::testgen
