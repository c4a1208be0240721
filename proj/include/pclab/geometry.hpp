#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/lp.hpp"
#include "pclab/norms.hpp"
#include "pclab/rng.hpp"

namespace pclab {

// Hyperplane <normal, x> = offset with unit normal.
struct Hyperplane {
    Eigen::VectorXd normal;
    double offset = 0.0;

    Hyperplane() = default;
    Hyperplane(Eigen::VectorXd n, double c) : normal(std::move(n)), offset(c) {
        const double len = normal.norm();
        if (std::abs(len - 1.0) > 1e-12) {
            if (len < 1e-14) throw ConfigError("hyperplane normal must be nonzero");
            normal /= len;
            offset /= len;
        }
    }

    double signed_value(const Eigen::VectorXd& x) const { return normal.dot(x) - offset; }
};

// {x : A x <= b}, rows kept unit-norm so row slacks are signed distances.
// Rows flagged strict carry `<` instead of `<=`; feasibility queries decide
// strictness through an interior margin, not through the flag alone.
struct Polytope {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<bool> strict;

    int dim() const { return static_cast<int>(A.cols()); }
    int rows() const { return static_cast<int>(A.rows()); }

    static Polytope from_rows(Eigen::MatrixXd A_in, Eigen::VectorXd b_in,
                              std::vector<bool> strict_in = {}) {
        if (A_in.rows() != b_in.size())
            throw ConfigError("polytope: A and b row counts differ");
        if (!strict_in.empty() && static_cast<int>(strict_in.size()) != A_in.rows())
            throw ConfigError("polytope: strict flag count differs from row count");
        if (strict_in.empty()) strict_in.assign(static_cast<std::size_t>(A_in.rows()), false);
        for (int i = 0; i < A_in.rows(); ++i) {
            const double len = A_in.row(i).norm();
            if (len < 1e-14) throw ConfigError("polytope: zero normal in row " + std::to_string(i));
            A_in.row(i) /= len;
            b_in(i) /= len;
        }
        Polytope p;
        p.A = std::move(A_in);
        p.b = std::move(b_in);
        p.strict = std::move(strict_in);
        return p;
    }

    static Polytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        const int d = static_cast<int>(lo.size());
        Eigen::MatrixXd A(2 * d, d);
        Eigen::VectorXd b(2 * d);
        A.setZero();
        for (int j = 0; j < d; ++j) {
            A(2 * j, j) = 1.0;
            b(2 * j) = hi(j);
            A(2 * j + 1, j) = -1.0;
            b(2 * j + 1) = -lo(j);
        }
        return from_rows(std::move(A), std::move(b));
    }

    static Polytope interval(double lo, double hi) {
        Eigen::VectorXd l(1), h(1);
        l << lo;
        h << hi;
        return box(l, h);
    }

    static Polytope unit_square() {
        Eigen::VectorXd l(2), h(2);
        l << 0, 0;
        h << 1, 1;
        return box(l, h);
    }

    void add_row(const Eigen::VectorXd& a, double rhs, bool is_strict) {
        const double len = a.norm();
        if (len < 1e-14) throw ConfigError("polytope: zero normal row");
        A.conservativeResize(A.rows() + 1, Eigen::NoChange);
        b.conservativeResize(b.size() + 1);
        A.row(A.rows() - 1) = a.transpose() / len;
        b(b.size() - 1) = rhs / len;
        strict.push_back(is_strict);
    }

    Eigen::VectorXd slacks(const Eigen::VectorXd& x) const { return b - A * x; }

    double min_slack(const Eigen::VectorXd& x) const {
        return rows() ? slacks(x).minCoeff() : std::numeric_limits<double>::infinity();
    }

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const {
        return min_slack(x) >= -tol;
    }
};

enum class Feasibility { Feasible, Infeasible };

struct FeasibilityResult {
    Feasibility status = Feasibility::Infeasible;
    std::optional<Eigen::VectorXd> witness;
    std::optional<double> inradius;

    bool feasible() const { return status == Feasibility::Feasible; }
};

// Nonemptiness with interior margin eta: feasible iff the maximized minimum
// slack exceeds eta, which certifies an open region (strict rows included).
inline FeasibilityResult feasible(const Polytope& P, double eta) {
    if (eta < 0) throw ConfigError("feasible: eta must be >= 0");
    ChebyshevResult ch = chebyshev(P.A, P.b);
    FeasibilityResult res;
    if (!ch.solved || !(ch.inradius > eta)) return res;
    res.status = Feasibility::Feasible;
    res.witness = ch.center;
    res.inradius = ch.inradius;
    return res;
}

enum class DistanceNorm { LInf, L2 };

namespace geo_detail {

inline double lp_box_for(const Polytope& P, const Eigen::VectorXd& x0) {
    double scale = 1.0;
    if (P.b.size()) scale = std::max(scale, P.b.cwiseAbs().maxCoeff());
    if (x0.size()) scale = std::max(scale, x0.cwiseAbs().maxCoeff());
    return 1e3 * scale;
}

// Exact Euclidean projection by active-set enumeration; intended for the
// small systems used here (m choose <= d subsets).
inline double l2_distance(const Eigen::VectorXd& x0, const Polytope& P) {
    if (P.contains(x0, 1e-12)) return 0.0;
    const int d = P.dim();
    const int m = P.rows();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> subset;
    // enumerate all subsets of rows of size 1..d
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> comb;
    auto consider = [&](const std::vector<int>& S) {
        const int k = static_cast<int>(S.size());
        Eigen::MatrixXd As(k, d);
        Eigen::VectorXd bs(k);
        for (int i = 0; i < k; ++i) {
            As.row(i) = P.A.row(S[static_cast<std::size_t>(i)]);
            bs(i) = P.b(S[static_cast<std::size_t>(i)]);
        }
        Eigen::MatrixXd M = As * As.transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (!lu.isInvertible()) return;
        Eigen::VectorXd lambda = lu.solve(As * x0 - bs);
        if ((lambda.array() < -1e-10).any()) return; // KKT multipliers must be >= 0
        Eigen::VectorXd x = x0 - As.transpose() * lambda;
        if (!P.contains(x, 1e-9)) return;
        best = std::min(best, (x - x0).norm());
    };
    std::function<void(int, int)> rec = [&](int start, int need) {
        if (need == 0) {
            consider(comb);
            return;
        }
        for (int i = start; i <= m - need; ++i) {
            comb.push_back(i);
            rec(i + 1, need - 1);
            comb.pop_back();
        }
    };
    for (int k = 1; k <= std::min(d, m); ++k) rec(0, k);
    return best;
}

inline double linf_distance(const Eigen::VectorXd& x0, const Polytope& P) {
    const int d = P.dim();
    Eigen::MatrixXd G(P.rows() + 2 * d, d + 1);
    Eigen::VectorXd h(P.rows() + 2 * d);
    G.setZero();
    G.topLeftCorner(P.rows(), d) = P.A;
    h.head(P.rows()) = P.b;
    for (int j = 0; j < d; ++j) {
        G(P.rows() + 2 * j, j) = 1.0;
        G(P.rows() + 2 * j, d) = -1.0;
        h(P.rows() + 2 * j) = x0(j);
        G(P.rows() + 2 * j + 1, j) = -1.0;
        G(P.rows() + 2 * j + 1, d) = -1.0;
        h(P.rows() + 2 * j + 1) = -x0(j);
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
    c(d) = -1.0; // minimize t
    LpResult lp = lp_maximize(G, h, c, lp_box_for(P, x0));
    if (lp.status != LpStatus::Optimal)
        throw DistanceToEmpty("distance_to_polyhedron: target polyhedron is empty");
    return std::max(0.0, lp.x(d));
}

} // namespace geo_detail

inline double distance_to_polyhedron(const Eigen::VectorXd& x0, const Polytope& P,
                                     DistanceNorm norm) {
    ChebyshevResult ch = chebyshev(P.A, P.b);
    if (!ch.solved || ch.inradius < -1e-9)
        throw DistanceToEmpty("distance_to_polyhedron: target polyhedron is empty");
    if (norm == DistanceNorm::LInf) return geo_detail::linf_distance(x0, P);
    return geo_detail::l2_distance(x0, P);
}

// Least beta such that every nonsingular square submatrix B of A has all
// |B^{-1}| entries <= beta. Exhaustive over submatrices, so A is capped at
// 6x6. Submatrices with |det| <= det_tol count as singular.
inline double hoffman_beta(const Eigen::MatrixXd& A, double det_tol = 1e-10) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (m == 0 || n == 0) throw PreconditionFailed("hoffman_beta: empty matrix");
    if (m > 6 || n > 6) throw PreconditionFailed("hoffman_beta: matrix larger than 6x6");
    double beta = 0.0;
    std::vector<int> rsel, csel;
    std::function<void(int, int)> pick_cols;
    std::function<void(int, int)> pick_rows = [&](int start, int need) {
        if (need == 0) {
            csel.clear();
            pick_cols(0, static_cast<int>(rsel.size()));
            return;
        }
        for (int i = start; i <= m - need; ++i) {
            rsel.push_back(i);
            pick_rows(i + 1, need - 1);
            rsel.pop_back();
        }
    };
    pick_cols = [&](int start, int need) {
        if (need == 0) {
            const int k = static_cast<int>(rsel.size());
            Eigen::MatrixXd B(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    B(i, j) = A(rsel[static_cast<std::size_t>(i)], csel[static_cast<std::size_t>(j)]);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
            if (std::abs(lu.determinant()) <= det_tol) return;
            Eigen::MatrixXd inv = lu.inverse();
            beta = std::max(beta, inv.cwiseAbs().maxCoeff());
            return;
        }
        for (int j = start; j <= n - need; ++j) {
            csel.push_back(j);
            pick_cols(j + 1, need - 1);
            csel.pop_back();
        }
    };
    for (int k = 1; k <= std::min(m, n); ++k) {
        rsel.clear();
        pick_rows(0, k);
    }
    return beta;
}

// Perturbation check: dist_inf(x0, G_b) <= n * beta(A) * |b - b0|_inf.
inline bool verify_hoffman_bound(const Eigen::MatrixXd& A, const Eigen::VectorXd& b0,
                                 const Eigen::VectorXd& b, const Eigen::VectorXd& x0) {
    if (b0.size() != A.rows() || b.size() != A.rows() || x0.size() != A.cols())
        throw PreconditionFailed("verify_hoffman_bound: inconsistent dimensions");
    Polytope G0 = Polytope::from_rows(A, b0);
    if (!G0.contains(x0, 1e-9))
        throw PreconditionFailed("verify_hoffman_bound: x0 not in G_b0");
    Polytope Gb = Polytope::from_rows(A, b);
    // from_rows normalizes rows without changing the set G_b; beta and the
    // bound use the raw unnormalized A.
    ChebyshevResult ch = chebyshev(Gb.A, Gb.b);
    if (!ch.solved || ch.inradius < -1e-9)
        throw PreconditionFailed("verify_hoffman_bound: G_b is empty");
    const double lhs = geo_detail::linf_distance(x0, Gb);
    const double rhs = static_cast<double>(A.cols()) * hoffman_beta(A) *
                       (b - b0).cwiseAbs().maxCoeff();
    return lhs <= rhs + 1e-9;
}

// --- vertex enumeration and derived quantities (exact for dim <= 2) ---

namespace geo_detail {

inline void ensure_bounded(const Polytope& P) {
    const double box = lp_box_for(P, Eigen::VectorXd::Zero(P.dim()));
    for (int j = 0; j < P.dim(); ++j) {
        for (double s : {1.0, -1.0}) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(P.dim());
            c(j) = s;
            LpResult lp = lp_maximize(P.A, P.b, c, box);
            if (lp.status != LpStatus::Optimal)
                throw DistanceToEmpty("polytope is empty");
            if (lp.value > 0.999 * box)
                throw UnboundedRegion("polytope is unbounded");
        }
    }
}

} // namespace geo_detail

inline std::vector<Eigen::VectorXd> vertices(const Polytope& P, double tol = 1e-9) {
    const int d = P.dim();
    if (d > 2) throw Unsupported("vertices: exact enumeration implemented for dim <= 2");
    geo_detail::ensure_bounded(P);
    std::vector<Eigen::VectorXd> out;
    if (d == 1) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < P.rows(); ++i) {
            const double a = P.A(i, 0);
            if (a > 0) hi = std::min(hi, P.b(i) / a);
            else lo = std::max(lo, P.b(i) / a);
        }
        Eigen::VectorXd v(1);
        v << lo;
        out.push_back(v);
        v << hi;
        out.push_back(v);
        return out;
    }
    for (int i = 0; i < P.rows(); ++i) {
        for (int j = i + 1; j < P.rows(); ++j) {
            Eigen::Matrix2d M;
            M << P.A(i, 0), P.A(i, 1), P.A(j, 0), P.A(j, 1);
            const double det = M.determinant();
            if (std::abs(det) < 1e-12) continue;
            Eigen::Vector2d rhs(P.b(i), P.b(j));
            Eigen::Vector2d x = M.inverse() * rhs;
            Eigen::VectorXd v = x;
            if (!P.contains(v, tol)) continue;
            bool dup = false;
            for (const auto& w : out)
                if ((w - v).norm() < 10 * tol) dup = true;
            if (!dup) out.push_back(v);
        }
    }
    // order by angle for downstream edge walks
    if (out.size() > 2) {
        Eigen::Vector2d c = Eigen::Vector2d::Zero();
        for (const auto& v : out) c += Eigen::Vector2d(v(0), v(1));
        c /= static_cast<double>(out.size());
        std::sort(out.begin(), out.end(), [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
            return std::atan2(u(1) - c(1), u(0) - c(0)) < std::atan2(v(1) - c(1), v(0) - c(0));
        });
    }
    return out;
}

inline Eigen::VectorXd chebyshev_center(const Polytope& P) {
    ChebyshevResult ch = chebyshev(P.A, P.b);
    if (!ch.solved || ch.inradius < -1e-9) throw DistanceToEmpty("chebyshev_center: empty polytope");
    return ch.center;
}

// diam(X) in the given norm. Exact from vertices for dim <= 2; for higher
// dimensions an axis-box upper bound (safe for certificate radii, which only
// grow).
inline double diameter(const Polytope& P, const Norm& norm = Norm()) {
    if (P.dim() <= 2) {
        auto vs = vertices(P);
        double best = 0.0;
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                best = std::max(best, norm.vec(vs[i] - vs[j]));
        return best;
    }
    geo_detail::ensure_bounded(P);
    const double box = geo_detail::lp_box_for(P, Eigen::VectorXd::Zero(P.dim()));
    Eigen::VectorXd widths(P.dim());
    for (int j = 0; j < P.dim(); ++j) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(P.dim());
        c(j) = 1.0;
        const double hi = lp_maximize(P.A, P.b, c, box).value;
        c(j) = -1.0;
        const double lo = -lp_maximize(P.A, P.b, c, box).value;
        widths(j) = hi - lo;
    }
    return norm.vec(widths);
}

struct HausdorffResult {
    double value = 0.0;
    bool exact = true;
    int samples = 0;

    operator double() const { return value; }
};

// Hausdorff distance between bounded polytopes: exact via vertex enumeration
// for dim <= 2 (the sup of the convex function d(.,Q) sits at a vertex);
// sampled upper estimate beyond that.
inline HausdorffResult hausdorff_distance(const Polytope& P, const Polytope& Q,
                                          int samples = 10000) {
    HausdorffResult res;
    if (P.dim() != Q.dim()) throw ConfigError("hausdorff_distance: dimension mismatch");
    auto one_sided_exact = [](const Polytope& A, const Polytope& B) {
        double worst = 0.0;
        for (const auto& v : vertices(A))
            worst = std::max(worst, geo_detail::l2_distance(v, B));
        return worst;
    };
    if (P.dim() <= 2) {
        res.value = std::max(one_sided_exact(P, Q), one_sided_exact(Q, P));
        res.exact = true;
        return res;
    }
    geo_detail::ensure_bounded(P);
    geo_detail::ensure_bounded(Q);
    res.exact = false;
    res.samples = samples;
    auto one_sided_sampled = [&](const Polytope& A, const Polytope& B) {
        Eigen::VectorXd c = chebyshev_center(A);
        SplitMix64 rng(0xabcdefULL + static_cast<std::uint64_t>(A.rows()));
        double worst = 0.0;
        for (int s = 0; s < samples; ++s) {
            Eigen::VectorXd dir(A.dim());
            for (int j = 0; j < A.dim(); ++j) dir(j) = rng.uniform(-1.0, 1.0);
            if (dir.norm() < 1e-9) continue;
            dir.normalize();
            // step to the boundary of A along dir
            double t = std::numeric_limits<double>::infinity();
            Eigen::VectorXd Ad = A.A * dir;
            Eigen::VectorXd sl = A.slacks(c);
            for (int i = 0; i < A.rows(); ++i)
                if (Ad(i) > 1e-14) t = std::min(t, sl(i) / Ad(i));
            if (!std::isfinite(t)) continue;
            worst = std::max(worst, geo_detail::l2_distance(c + t * dir, B));
        }
        return worst;
    };
    res.value = std::max(one_sided_sampled(P, Q), one_sided_sampled(Q, P));
    return res;
}

} // namespace pclab
