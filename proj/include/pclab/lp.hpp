#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/rng.hpp"

namespace pclab {

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double value = 0.0;
};

namespace lp_detail {

constexpr double kPivotTiny = 1e-13;
constexpr double kFeasTol = 1e-11;

struct Row {
    Eigen::VectorXd a;
    double b;
};

// Seidel's randomized incremental LP: maximize c.x over {rows} within the box
// |x_i| <= box. Every subproblem stays bounded because the box travels down
// the recursion as ordinary constraints. Expected O(m) per level for the
// dimensions used here (<= 6).
inline bool seidel(std::vector<Row> rows, const Eigen::VectorXd& c, double box,
                   SplitMix64& rng, Eigen::VectorXd& out) {
    const int dim = static_cast<int>(c.size());
    if (dim == 1) {
        double lo = -box, hi = box;
        for (const Row& r : rows) {
            const double a = r.a(0);
            if (std::abs(a) < kPivotTiny) {
                if (r.b < -kFeasTol) return false;
                continue;
            }
            if (a > 0) hi = std::min(hi, r.b / a);
            else lo = std::max(lo, r.b / a);
        }
        if (lo > hi + kFeasTol) return false;
        if (lo > hi) hi = lo = 0.5 * (lo + hi);
        out.resize(1);
        out(0) = c(0) >= 0 ? hi : lo;
        return true;
    }

    std::vector<int> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);

    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j)
        x(j) = c(j) > 0 ? box : (c(j) < 0 ? -box : 0.0);

    std::vector<int> seen;
    seen.reserve(rows.size());
    for (int idx : order) {
        const Row& r = rows[idx];
        if (r.a.dot(x) <= r.b + kFeasTol * (1.0 + std::abs(r.b))) {
            seen.push_back(idx);
            continue;
        }
        int k = 0;
        r.a.cwiseAbs().maxCoeff(&k);
        if (std::abs(r.a(k)) < kPivotTiny) {
            if (r.b < -kFeasTol) return false;
            seen.push_back(idx);
            continue;
        }
        // Optimum lies on a.x = b; eliminate x_k and recurse on the rest.
        const double ak = r.a(k);
        auto project = [&](const Eigen::VectorXd& g, double h, Row& sub) {
            sub.a.resize(dim - 1);
            int t = 0;
            const double ratio = g(k) / ak;
            for (int j = 0; j < dim; ++j) {
                if (j == k) continue;
                sub.a(t++) = g(j) - ratio * r.a(j);
            }
            sub.b = h - ratio * r.b;
        };
        std::vector<Row> sub_rows;
        sub_rows.reserve(seen.size() + 2);
        for (int s : seen) {
            Row sr;
            project(rows[s].a, rows[s].b, sr);
            sub_rows.push_back(std::move(sr));
        }
        // Box faces of the eliminated variable become explicit constraints:
        // x_k = (r.b - sum_{j!=k} a_j y_j)/ak must stay inside [-box, box].
        const double sgn = ak > 0 ? 1.0 : -1.0;
        for (int face = 0; face < 2; ++face) {
            const double bound = face == 0 ? box : -box;
            const double s = face == 0 ? -sgn : sgn;
            Row sr;
            sr.a.resize(dim - 1);
            int t = 0;
            for (int j = 0; j < dim; ++j) {
                if (j == k) continue;
                sr.a(t++) = s * r.a(j);
            }
            sr.b = s * (r.b - ak * bound);
            sub_rows.push_back(std::move(sr));
        }
        Eigen::VectorXd sub_c(dim - 1);
        {
            int t = 0;
            const double ratio = c(k) / ak;
            for (int j = 0; j < dim; ++j) {
                if (j == k) continue;
                sub_c(t++) = c(j) - ratio * r.a(j);
            }
        }
        Eigen::VectorXd y;
        if (!seidel(sub_rows, sub_c, box, rng, y)) return false;
        double xk = r.b;
        int t = 0;
        for (int j = 0; j < dim; ++j) {
            if (j == k) continue;
            x(j) = y(t);
            xk -= r.a(j) * y(t);
            ++t;
        }
        x(k) = xk / ak;
        seen.push_back(idx);
    }
    out = x;
    return true;
}

} // namespace lp_detail

// maximize c.x subject to G x <= h and |x_i| <= box. Deterministic: the
// internal shuffle is seeded from the problem size only.
inline LpResult lp_maximize(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                            const Eigen::VectorXd& c, double box) {
    if (G.rows() != h.size() || (G.rows() > 0 && G.cols() != c.size()))
        throw ConfigError("lp_maximize: inconsistent dimensions");
    std::vector<lp_detail::Row> rows(static_cast<std::size_t>(G.rows()));
    for (int i = 0; i < G.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].a = G.row(i).transpose();
        rows[static_cast<std::size_t>(i)].b = h(i);
    }
    SplitMix64 rng(0x5e1de1ULL ^ (static_cast<std::uint64_t>(G.rows()) << 8) ^
                   static_cast<std::uint64_t>(G.cols()));
    LpResult res;
    Eigen::VectorXd x;
    if (!lp_detail::seidel(rows, c, box, rng, x)) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    res.status = LpStatus::Optimal;
    res.x = x;
    res.value = c.dot(x);
    return res;
}

struct ChebyshevResult {
    bool solved = false;       // LP solved (it always is when box is large enough)
    Eigen::VectorXd center;    // argmax of the minimum slack
    double inradius = 0.0;     // value of the maximum slack (negative if empty)
};

// Slack maximization: maximize r subject to A x + r <= b over unit-norm rows.
// The optimum r is the (signed) Chebyshev inradius of {Ax <= b}.
inline ChebyshevResult chebyshev(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 double box = 0.0) {
    const int d = static_cast<int>(A.cols());
    if (box <= 0.0) box = 1e3 * std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 1.0);
    Eigen::MatrixXd G(A.rows(), d + 1);
    if (A.rows() > 0) {
        G.leftCols(d) = A;
        G.col(d).setOnes();
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
    c(d) = 1.0;
    LpResult lp = lp_maximize(G, b, c, box);
    ChebyshevResult res;
    if (lp.status != LpStatus::Optimal) return res;
    res.solved = true;
    res.center = lp.x.head(d);
    res.inradius = lp.x(d);
    return res;
}

} // namespace pclab
