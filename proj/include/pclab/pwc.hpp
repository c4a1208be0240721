#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/geometry.hpp"
#include "pclab/ifs.hpp"
#include "pclab/norms.hpp"

namespace pclab {

// 1-D partition 0 < mu_1 < ... < mu_{N-1} < 1 of [0,1] into N open cells.
struct Breakpoints1D {
    std::vector<double> mu;
};

// Hyperplanes <v_j, x> = mu_j cutting a polytope X into up to 2^l cells,
// labelled by the sign vector (s_1,...,s_l); bit j of the label index is set
// exactly when s_{j+1} = +1.
struct HyperplaneFamily {
    Eigen::MatrixXd V; // unit rows v^{(j)}
    Eigen::VectorXd mu;
};

using PartitionSpec = std::variant<Breakpoints1D, HyperplaneFamily>;

// Side a breakpoint belongs to when a total 1-D map is requested (A1).
enum class SingularSide { Left, Right };

struct PiecewiseContraction {
    Polytope space;
    std::vector<AffineContraction> branches; // label-indexed
    PartitionSpec partition;
    double lambda = 0.0;           // max branch contraction factor
    double eta = 1e-9;             // singular classification band
    bool boundary_singular = true; // hyperplane mode: count dist to boundary of X
    Norm norm;
    std::vector<SingularSide> side; // per-breakpoint convention, 1-D only

    bool is_interval() const { return std::holds_alternative<Breakpoints1D>(partition); }
    int dim() const { return space.dim(); }
    int num_labels() const { return static_cast<int>(branches.size()); }

    const Breakpoints1D& breakpoints() const { return std::get<Breakpoints1D>(partition); }
    const HyperplaneFamily& hyperplanes() const { return std::get<HyperplaneFamily>(partition); }
};

struct LabelResult {
    bool is_regular = false;
    Label label = -1;
    double singular_distance = 0.0;

    static LabelResult regular(Label l) { return {true, l, 0.0}; }
    static LabelResult singular(double dist) { return {false, -1, dist}; }
};

namespace pwc_detail {

inline void check_in_space(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    if (!f.space.contains(x, 1e-12))
        throw OutsideDomain("point lies outside the phase space");
}

inline double dist_to_singular_1d(const PiecewiseContraction& f, double x) {
    const auto& bp = f.breakpoints().mu;
    double best = std::min(std::abs(x), std::abs(1.0 - x));
    for (double m : bp) best = std::min(best, std::abs(x - m));
    return best;
}

inline Label label_total_1d(const PiecewiseContraction& f, double x) {
    const auto& bp = f.breakpoints().mu;
    // cell i is (mu_{i-1}, mu_i); a Left breakpoint belongs to the cell on its left
    Label l = 0;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        const bool above =
            (f.side.empty() || f.side[i] == SingularSide::Left) ? x > bp[i] : x >= bp[i];
        if (above) l = static_cast<Label>(i + 1);
        else break;
    }
    return l;
}

inline double dist_to_singular_hp(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    const auto& hp = f.hyperplanes();
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < hp.V.rows(); ++j) {
        const double gap = std::abs(hp.V.row(j).dot(x) - hp.mu(j));
        best = std::min(best, gap / f.norm.dual(hp.V.row(j).transpose()));
    }
    if (f.boundary_singular) {
        // The boundary of X is inside the union of its row hyperplanes, so the
        // minimum row slack is a lower bound of the true boundary distance;
        // underestimating only tightens certificates.
        for (int i = 0; i < f.space.rows(); ++i) {
            const double gap = f.space.b(i) - f.space.A.row(i).dot(x);
            best = std::min(best, std::abs(gap) / f.norm.dual(f.space.A.row(i).transpose()));
        }
    }
    return best;
}

inline Label label_total_hp(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    const auto& hp = f.hyperplanes();
    Label l = 0;
    for (int j = 0; j < hp.V.rows(); ++j)
        if (hp.V.row(j).dot(x) > hp.mu(j)) l |= (1 << j); // ties take s_j = -1
    return l;
}

} // namespace pwc_detail

inline double dist_to_singular(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    if (f.is_interval()) return pwc_detail::dist_to_singular_1d(f, x(0));
    return pwc_detail::dist_to_singular_hp(f, x);
}

// The total label map: hyperplane ties go to s_j = -1, 1-D breakpoints
// follow the per-breakpoint side convention. Use only where a total map is
// explicitly wanted; certification paths classify through label() instead.
inline Label label_total(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    pwc_detail::check_in_space(f, x);
    if (f.is_interval()) return pwc_detail::label_total_1d(f, x(0));
    return pwc_detail::label_total_hp(f, x);
}

// Certification-grade classification: points within eta of the singular set
// report Singular with their measured distance (exact hits included, even at
// eta = 0), everything else gets its partition label.
inline LabelResult label(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    pwc_detail::check_in_space(f, x);
    const double dist = dist_to_singular(f, x);
    if (dist <= f.eta) return LabelResult::singular(dist);
    if (f.is_interval()) return LabelResult::regular(pwc_detail::label_total_1d(f, x(0)));
    return LabelResult::regular(pwc_detail::label_total_hp(f, x));
}

// Total evaluation regardless of singular bands.
inline Eigen::VectorXd step_total(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    const Label l = label_total(f, x);
    return f.branches[static_cast<std::size_t>(l)](x);
}

inline Eigen::VectorXd step(const PiecewiseContraction& f, const Eigen::VectorXd& x) {
    const LabelResult lr = label(f, x);
    if (lr.is_regular) return f.branches[static_cast<std::size_t>(lr.label)](x);
    if (f.is_interval()) return step_total(f, x); // A1 side convention
    throw SingularPoint("step: point within eta of the singular set");
}

struct ItineraryResult {
    Word word;                    // regular prefix, length min(n, failure index)
    std::optional<int> failed_at; // first k with f^k(x) singular

    bool complete() const { return !failed_at.has_value(); }
};

inline ItineraryResult itinerary(const PiecewiseContraction& f, const Eigen::VectorXd& x0,
                                 int n) {
    if (n < 1) throw InvalidParameter("itinerary: n must be >= 1");
    ItineraryResult res;
    Eigen::VectorXd x = x0;
    for (int k = 0; k < n; ++k) {
        const LabelResult lr = label(f, x);
        if (!lr.is_regular) {
            res.failed_at = k;
            return res;
        }
        res.word.push_back(lr.label);
        if (k + 1 < n) x = f.branches[static_cast<std::size_t>(lr.label)](x);
    }
    return res;
}

struct OrbitPoint {
    Eigen::VectorXd x;
    LabelResult label;
};

// Orbit with per-step classification; stops after the first singular point.
inline std::vector<OrbitPoint> orbit(const PiecewiseContraction& f, const Eigen::VectorXd& x0,
                                     int n) {
    std::vector<OrbitPoint> out;
    Eigen::VectorXd x = x0;
    for (int k = 0; k <= n; ++k) {
        OrbitPoint p{x, label(f, x)};
        out.push_back(p);
        if (!p.label.is_regular) break;
        if (k < n) x = f.branches[static_cast<std::size_t>(p.label.label)](x);
    }
    return out;
}

inline Eigen::VectorXd point1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

// --- constructors with invariant validation ---

inline PiecewiseContraction make_interval_pwc(std::vector<AffineContraction> branches,
                                              std::vector<double> breakpoints, double eta = 1e-9,
                                              bool require_a2 = true) {
    PiecewiseContraction f;
    f.space = Polytope::interval(0.0, 1.0);
    f.eta = eta;
    if (branches.size() != breakpoints.size() + 1)
        throw ConfigError("interval map: need one branch per cell (breakpoints + 1)");
    double prev = 0.0;
    for (double m : breakpoints) {
        if (!(m > prev && m < 1.0))
            throw ConfigError("interval map: breakpoints must be strictly increasing in (0,1)");
        prev = m;
    }
    f.lambda = 0.0;
    for (const auto& phi : branches) {
        if (phi.dim() != 1) throw ConfigError("interval map: branches must be 1-D");
        if (!(phi.lip < 1.0)) throw NotAContraction("interval map: branch with lip >= 1");
        f.lambda = std::max(f.lambda, phi.lip);
        if (require_a2) {
            const double a = phi.apply1(0.0), b = phi.apply1(1.0);
            const double lo = std::min(a, b), hi = std::max(a, b);
            if (!(lo > 0.0 && hi < 1.0))
                throw ConfigError("interval map: branch image not inside (0,1) (assumption A2)");
        }
    }
    f.branches = std::move(branches);
    f.side.assign(breakpoints.size(), SingularSide::Left);
    f.partition = Breakpoints1D{std::move(breakpoints)};
    return f;
}

inline PiecewiseContraction make_hyperplane_pwc(Polytope X,
                                                std::vector<AffineContraction> branches,
                                                Eigen::MatrixXd V, Eigen::VectorXd mu,
                                                double eta = 1e-9, bool boundary_singular = true,
                                                const Norm& norm = Norm()) {
    PiecewiseContraction f;
    f.norm = norm;
    f.eta = eta;
    f.boundary_singular = boundary_singular;
    const int l = static_cast<int>(V.rows());
    if (l < 1 || l > 20) throw ConfigError("hyperplane map: need 1..20 hyperplanes");
    if (V.cols() != X.dim() || mu.size() != l)
        throw ConfigError("hyperplane map: normals/offsets shape mismatch");
    if (branches.size() != (std::size_t{1} << l))
        throw ConfigError("hyperplane map: need exactly 2^l branches in label order");
    for (int j = 0; j < l; ++j) {
        const double len = V.row(j).norm();
        if (len < 1e-14) throw ConfigError("hyperplane map: zero normal");
        V.row(j) /= len;
        mu(j) /= len;
    }
    f.lambda = 0.0;
    for (const auto& phi : branches) {
        if (phi.dim() != X.dim()) throw ConfigError("hyperplane map: branch dimension mismatch");
        const double lip = norm.op(phi.Lambda);
        if (!(lip < 1.0)) throw NotAContraction("hyperplane map: branch with lip >= 1");
        f.lambda = std::max(f.lambda, lip);
        if (!invariance_check(phi, X))
            throw ConfigError("hyperplane map: branch image not inside relint(X)");
    }
    f.space = std::move(X);
    f.branches = std::move(branches);
    f.partition = HyperplaneFamily{std::move(V), std::move(mu)};
    return f;
}

} // namespace pclab
