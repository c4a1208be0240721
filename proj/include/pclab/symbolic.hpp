#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <variant>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/geometry.hpp"
#include "pclab/ifs.hpp"
#include "pclab/pwc.hpp"

namespace pclab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

using CylinderRegion = std::variant<Interval, Polytope>;

// Open cylinder A^alpha: all regular points of order |alpha| whose itinerary
// equals alpha. Carries the composed branch map phi^alpha so covers and
// children come for free.
struct Cylinder {
    Word word;
    CylinderRegion region;
    Eigen::VectorXd witness;
    double inradius = 0.0;
    AffineContraction map; // phi^alpha
};

struct CylinderCollection {
    int depth = 0;
    std::vector<Cylinder> cylinders;
    // A candidate region was dropped whose computed inradius was positive but
    // not above eta: the word list may be incomplete, so no certificate may be
    // issued from this collection.
    bool lossy = false;
    std::size_t dropped_thin = 0;

    std::size_t size() const { return cylinders.size(); }

    std::vector<Word> itineraries() const {
        std::vector<Word> out;
        out.reserve(cylinders.size());
        for (const auto& c : cylinders) out.push_back(c.word);
        return out;
    }
};

inline bool region_contains(const CylinderRegion& region, const Eigen::VectorXd& x,
                            double margin = 0.0) {
    if (std::holds_alternative<Interval>(region)) {
        const auto& iv = std::get<Interval>(region);
        return x(0) - iv.lo > margin && iv.hi - x(0) > margin;
    }
    const auto& P = std::get<Polytope>(region);
    return P.min_slack(x) > margin;
}

namespace sym_detail {

constexpr double kThinFloor = 1e-12;

inline Interval cell_interval(const PiecewiseContraction& f, Label l) {
    const auto& mu = f.breakpoints().mu;
    const double lo = l == 0 ? 0.0 : mu[static_cast<std::size_t>(l - 1)];
    const double hi = l == static_cast<Label>(mu.size()) ? 1.0 : mu[static_cast<std::size_t>(l)];
    return Interval{lo, hi};
}

// x with phi(x) in (lo, hi) for the scalar affine phi.
inline Interval pullback_1d(const AffineContraction& phi, double lo, double hi) {
    const double s = phi.Lambda(0, 0), t = phi.b(0);
    if (s > 0) return Interval{(lo - t) / s, (hi - t) / s};
    return Interval{(hi - t) / s, (lo - t) / s};
}

inline Interval intersect(const Interval& a, const Interval& b) {
    return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Append the depth-k constraint block of the closed-form cylinder: the rows
// s_j <v_j, phi^alpha(x)> > s_j mu_j for the sign pattern of label `next`.
inline void append_hyperplane_block(Polytope& region, const PiecewiseContraction& f,
                                    const AffineContraction& prefix_map, Label next) {
    const auto& hp = f.hyperplanes();
    for (int j = 0; j < hp.V.rows(); ++j) {
        const double s = (next >> j) & 1 ? 1.0 : -1.0;
        Eigen::VectorXd row = -s * (prefix_map.Lambda.transpose() * hp.V.row(j).transpose());
        const double rhs = -s * (hp.mu(j) - hp.V.row(j).dot(prefix_map.b));
        region.add_row(row, rhs, true);
    }
}

inline Polytope strict_copy(const Polytope& X) {
    Polytope P = X;
    P.strict.assign(static_cast<std::size_t>(P.rows()), true);
    return P;
}

inline AffineContraction identity_map(int d) {
    AffineContraction id;
    id.Lambda = Eigen::MatrixXd::Identity(d, d);
    id.b = Eigen::VectorXd::Zero(d);
    id.lip = 1.0;
    return id;
}

} // namespace sym_detail

// A^alpha assembled from the prefix compositions; may be empty. 1-D regions
// are exact nested interval pullbacks, hyperplane mode follows the closed-form
// polytope with unit-normalized rows.
inline CylinderRegion cylinder_region(const PiecewiseContraction& f, const Word& alpha) {
    if (alpha.empty()) throw UnknownLabel("cylinder_region: empty word");
    for (Label s : alpha)
        if (s < 0 || s >= f.num_labels())
            throw UnknownLabel("cylinder_region: unknown label " + std::to_string(s));
    if (f.is_interval()) {
        Interval region = sym_detail::cell_interval(f, alpha[0]);
        AffineContraction prefix = f.branches[static_cast<std::size_t>(alpha[0])];
        for (std::size_t k = 1; k < alpha.size(); ++k) {
            const Interval cell = sym_detail::cell_interval(f, alpha[k]);
            region = sym_detail::intersect(region,
                                           sym_detail::pullback_1d(prefix, cell.lo, cell.hi));
            if (k + 1 < alpha.size())
                prefix = compose(f.branches, Word{alpha.begin(), alpha.begin() +
                                                                     static_cast<long>(k + 1)});
        }
        return region;
    }
    Polytope region = sym_detail::strict_copy(f.space);
    AffineContraction prefix = sym_detail::identity_map(f.dim());
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        sym_detail::append_hyperplane_block(region, f, prefix, alpha[k]);
        if (k + 1 < alpha.size()) {
            const auto& phi = f.branches[static_cast<std::size_t>(alpha[k])];
            AffineContraction next;
            next.Lambda = phi.Lambda * prefix.Lambda;
            next.b = phi.Lambda * prefix.b + phi.b;
            next.lip = prefix.lip * phi.lip;
            prefix = std::move(next);
        }
    }
    return region;
}

// Breadth-first enumeration of the nonempty depth-n cylinders with interior
// margin eta. Children extend a parent by one symbol and one constraint
// block; pruning is exact up to the margin, which errs toward dropping (and
// the collection is flagged lossy whenever that may have happened).
class CylinderEnumerator {
  public:
    explicit CylinderEnumerator(const PiecewiseContraction& f, std::size_t cap = 1000000)
        : f_(&f), cap_(cap) {}

    const CylinderCollection& extend_to(int depth) {
        if (depth < 1) throw InvalidParameter("enumerate: depth must be >= 1");
        if (coll_.depth == 0) seed();
        while (coll_.depth < depth) extend_one();
        return coll_;
    }

    const CylinderCollection& current() const { return coll_; }

  private:
    const PiecewiseContraction* f_;
    std::size_t cap_;
    CylinderCollection coll_;

    void classify_keep(Cylinder&& c, std::vector<Cylinder>& out, double inradius) {
        if (inradius > f_->eta) {
            c.inradius = inradius;
            out.push_back(std::move(c));
        } else if (inradius > sym_detail::kThinFloor) {
            coll_.lossy = true;
            ++coll_.dropped_thin;
        }
    }

    void seed() {
        std::vector<Cylinder> base;
        for (Label l = 0; l < f_->num_labels(); ++l) {
            Cylinder c;
            c.word = {l};
            c.map = f_->branches[static_cast<std::size_t>(l)];
            if (f_->is_interval()) {
                const Interval iv = sym_detail::cell_interval(*f_, l);
                c.region = iv;
                c.witness = point1(iv.mid());
                classify_keep(std::move(c), base, 0.5 * iv.length());
            } else {
                Polytope region = sym_detail::strict_copy(f_->space);
                sym_detail::append_hyperplane_block(region, *f_,
                                                    sym_detail::identity_map(f_->dim()), l);
                ChebyshevResult ch = chebyshev(region.A, region.b);
                c.region = std::move(region);
                if (ch.solved) c.witness = ch.center;
                classify_keep(std::move(c), base, ch.solved ? ch.inradius : -1.0);
            }
        }
        coll_.cylinders = std::move(base);
        coll_.depth = 1;
    }

    void extend_one() {
        std::vector<Cylinder> next;
        next.reserve(coll_.cylinders.size());
        for (const Cylinder& parent : coll_.cylinders) {
            for (Label l = 0; l < f_->num_labels(); ++l) {
                Cylinder c;
                c.word = parent.word;
                c.word.push_back(l);
                const auto& phi = f_->branches[static_cast<std::size_t>(l)];
                c.map.Lambda = phi.Lambda * parent.map.Lambda;
                c.map.b = phi.Lambda * parent.map.b + phi.b;
                c.map.lip = parent.map.lip * phi.lip;
                if (f_->is_interval()) {
                    const Interval cell = sym_detail::cell_interval(*f_, l);
                    const Interval child = sym_detail::intersect(
                        std::get<Interval>(parent.region),
                        sym_detail::pullback_1d(parent.map, cell.lo, cell.hi));
                    c.region = child;
                    c.witness = point1(child.mid());
                    classify_keep(std::move(c), next, 0.5 * child.length());
                } else {
                    Polytope region = std::get<Polytope>(parent.region);
                    sym_detail::append_hyperplane_block(region, *f_, parent.map, l);
                    ChebyshevResult ch = chebyshev(region.A, region.b);
                    c.region = std::move(region);
                    if (ch.solved) c.witness = ch.center;
                    classify_keep(std::move(c), next, ch.solved ? ch.inradius : -1.0);
                }
                if (next.size() > cap_)
                    throw ResourceExceeded("enumeration exceeded cylinder cap at depth " +
                                           std::to_string(coll_.depth + 1));
            }
        }
        coll_.cylinders = std::move(next);
        ++coll_.depth;
    }
};

inline CylinderCollection enumerate_itineraries(const PiecewiseContraction& f, int depth,
                                                std::size_t cap = 1000000) {
    CylinderEnumerator e(f, cap);
    return e.extend_to(depth);
}

struct GrowthRates {
    std::vector<double> rate;         // (1/n) log counts_n
    std::vector<double> limsup_proxy; // running max over the tail
};

inline GrowthRates growth_rate(const std::vector<std::size_t>& counts) {
    if (counts.empty()) throw InvalidParameter("growth_rate: empty counts");
    GrowthRates g;
    g.rate.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) throw InvalidParameter("growth_rate: zero count");
        g.rate[i] = std::log(static_cast<double>(counts[i])) / static_cast<double>(i + 1);
    }
    g.limsup_proxy = g.rate;
    for (std::size_t i = counts.size(); i-- > 1;)
        g.limsup_proxy[i - 1] = std::max(g.limsup_proxy[i - 1], g.limsup_proxy[i]);
    return g;
}

namespace sym_detail {

// Distinct boundary lines of a set of 2-D regions, canonicalized and deduped.
inline std::vector<Hyperplane> boundary_lines_2d(const CylinderCollection& coll) {
    std::vector<Hyperplane> lines;
    for (const auto& c : coll.cylinders) {
        const auto& P = std::get<Polytope>(c.region);
        for (int i = 0; i < P.rows(); ++i) {
            Eigen::VectorXd nrm = P.A.row(i).transpose();
            double off = P.b(i);
            int lead = 0;
            for (; lead < nrm.size(); ++lead)
                if (std::abs(nrm(lead)) > 1e-12) break;
            if (lead < nrm.size() && nrm(lead) < 0) {
                nrm = -nrm;
                off = -off;
            }
            lines.emplace_back(nrm, off);
        }
    }
    std::sort(lines.begin(), lines.end(), [](const Hyperplane& a, const Hyperplane& b) {
        for (int j = 0; j < a.normal.size(); ++j)
            if (a.normal(j) != b.normal(j)) return a.normal(j) < b.normal(j);
        return a.offset < b.offset;
    });
    std::vector<Hyperplane> out;
    for (const auto& h : lines) {
        if (!out.empty() && (out.back().normal - h.normal).cwiseAbs().maxCoeff() < 1e-10 &&
            std::abs(out.back().offset - h.offset) < 1e-10)
            continue;
        out.push_back(h);
    }
    return out;
}

inline std::vector<Eigen::VectorXd> candidate_points_2d(const CylinderCollection& coll) {
    std::vector<Eigen::VectorXd> pts;
    for (const auto& c : coll.cylinders) {
        const auto& P = std::get<Polytope>(c.region);
        for (const auto& v : vertices(P)) pts.push_back(v);
        pts.push_back(c.witness);
    }
    const auto lines = boundary_lines_2d(coll);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            Eigen::Matrix2d M;
            M << lines[i].normal(0), lines[i].normal(1), lines[j].normal(0), lines[j].normal(1);
            if (std::abs(M.determinant()) < 1e-12) continue;
            Eigen::Vector2d x = M.inverse() * Eigen::Vector2d(lines[i].offset, lines[j].offset);
            pts.push_back(Eigen::VectorXd(x));
        }
    }
    return pts;
}

} // namespace sym_detail

// mult(C) = max over x of the number of member closures containing x. Exact in
// one dimension and, through candidate-point enumeration, in dimension two.
inline int multiplicity(const CylinderCollection& coll, double tol = 1e-9) {
    if (coll.cylinders.empty()) return 0;
    if (std::holds_alternative<Interval>(coll.cylinders.front().region))
        return coll.cylinders.size() >= 2 ? 2 : 1;
    const int d = std::get<Polytope>(coll.cylinders.front().region).dim();
    if (d != 2)
        throw Unsupported("multiplicity: exact evaluation implemented for 1-D and d = 2; "
                          "use arrangement_bound beyond that");
    // vertex bounding boxes cut down the membership tests per candidate
    std::vector<Eigen::Vector4d> boxes; // (min_x, min_y, max_x, max_y)
    boxes.reserve(coll.cylinders.size());
    for (const auto& c : coll.cylinders) {
        Eigen::Vector4d bb(1e300, 1e300, -1e300, -1e300);
        for (const auto& v : vertices(std::get<Polytope>(c.region))) {
            bb(0) = std::min(bb(0), v(0));
            bb(1) = std::min(bb(1), v(1));
            bb(2) = std::max(bb(2), v(0));
            bb(3) = std::max(bb(3), v(1));
        }
        boxes.push_back(bb);
    }
    int best = 0;
    for (const auto& x : sym_detail::candidate_points_2d(coll)) {
        int count = 0;
        for (std::size_t i = 0; i < coll.cylinders.size(); ++i) {
            const auto& bb = boxes[i];
            if (x(0) < bb(0) - 10 * tol || x(0) > bb(2) + 10 * tol || x(1) < bb(1) - 10 * tol ||
                x(1) > bb(3) + 10 * tol)
                continue;
            if (std::get<Polytope>(coll.cylinders[i].region).contains(x, tol)) ++count;
        }
        best = std::max(best, count);
    }
    return best;
}

// Largest radius (candidate-based estimate; certified in 1-D) such that no
// ball of that radius meets more than m members.
inline double compatible_radius(const CylinderCollection& coll, int m) {
    const std::size_t n = coll.cylinders.size();
    if (m >= static_cast<int>(n)) return std::numeric_limits<double>::infinity();
    if (std::holds_alternative<Interval>(coll.cylinders.front().region)) {
        // A ball meeting m+1 intervals of a tiling contains the m-1 middle
        // ones entirely, so half the sum of the m-1 smallest lengths is safe.
        std::vector<double> lengths;
        lengths.reserve(n);
        for (const auto& c : coll.cylinders)
            lengths.push_back(std::get<Interval>(c.region).length());
        std::sort(lengths.begin(), lengths.end());
        double s = 0.0;
        for (int i = 0; i < m - 1 && i < static_cast<int>(lengths.size()); ++i) s += lengths[i];
        return 0.5 * s;
    }
    auto pts = sym_detail::candidate_points_2d(coll);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : pts) {
        std::vector<double> dist;
        dist.reserve(n);
        for (const auto& c : coll.cylinders)
            dist.push_back(geo_detail::l2_distance(x, std::get<Polytope>(c.region)));
        std::nth_element(dist.begin(), dist.begin() + m, dist.end());
        best = std::min(best, dist[static_cast<std::size_t>(m)]);
    }
    return best;
}

// --- pullback hyperplane arrangement ---

struct PullbackArrangement {
    int depth = 0;
    std::vector<Hyperplane> hyperplanes; // deduped family H_mu^(n)
    int coincidence = 0;                 // m: max hyperplanes through one point
};

struct ArrangementBound {
    PullbackArrangement arrangement;
    long long bound = 0; // 2 * sum_{k<d} C(m-1, k)
};

namespace sym_detail {

inline long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline std::vector<Hyperplane> dedupe_hyperplanes(std::vector<Hyperplane> hs, double tol) {
    for (auto& h : hs) {
        int lead = 0;
        for (; lead < h.normal.size(); ++lead)
            if (std::abs(h.normal(lead)) > 1e-12) break;
        if (lead < h.normal.size() && h.normal(lead) < 0) {
            h.normal = -h.normal;
            h.offset = -h.offset;
        }
    }
    std::sort(hs.begin(), hs.end(), [](const Hyperplane& a, const Hyperplane& b) {
        for (int j = 0; j < a.normal.size(); ++j)
            if (a.normal(j) != b.normal(j)) return a.normal(j) < b.normal(j);
        return a.offset < b.offset;
    });
    std::vector<Hyperplane> out;
    for (auto& h : hs) {
        if (!out.empty() && (out.back().normal - h.normal).cwiseAbs().maxCoeff() < tol &&
            std::abs(out.back().offset - h.offset) < tol)
            continue;
        out.push_back(std::move(h));
    }
    return out;
}

// Max number of lines through a common point. Lines are first grouped by
// direction (parallel lines never meet after dedupe); with exactly two
// direction groups the answer is 2, and the general case verifies candidate
// intersection points group by group over sorted offsets.
inline int coincidence_2d(const std::vector<Hyperplane>& hs) {
    if (hs.empty()) return 0;
    struct Group {
        Eigen::Vector2d dir;
        std::vector<double> offsets; // sorted
    };
    std::vector<Group> groups;
    for (const auto& h : hs) {
        bool placed = false;
        for (auto& g : groups) {
            if ((g.dir - Eigen::Vector2d(h.normal(0), h.normal(1))).cwiseAbs().maxCoeff() < 1e-10) {
                g.offsets.push_back(h.offset);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({Eigen::Vector2d(h.normal(0), h.normal(1)), {h.offset}});
    }
    for (auto& g : groups) std::sort(g.offsets.begin(), g.offsets.end());
    if (groups.size() == 1) return 1;
    if (groups.size() == 2) return 2;

    auto incidence = [&](const Eigen::Vector2d& x) {
        int count = 0;
        for (const auto& g : groups) {
            const double v = g.dir.dot(x);
            const double tol = 1e-9 * (1.0 + std::abs(v));
            auto lo = std::lower_bound(g.offsets.begin(), g.offsets.end(), v - tol);
            auto hi = std::upper_bound(g.offsets.begin(), g.offsets.end(), v + tol);
            count += static_cast<int>(hi - lo);
        }
        return count;
    };

    // candidate points: pairwise intersections across groups, budgeted
    double cross_pairs = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j)
            cross_pairs += static_cast<double>(groups[i].offsets.size()) *
                           static_cast<double>(groups[j].offsets.size());
    if (cross_pairs > 3e6)
        throw PreconditionFailed("arrangement coincidence: too many hyperplane pairs");
    int m = 2;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            Eigen::Matrix2d M;
            M.row(0) = groups[i].dir.transpose();
            M.row(1) = groups[j].dir.transpose();
            if (std::abs(M.determinant()) < 1e-12) continue;
            const Eigen::Matrix2d Minv = M.inverse();
            for (double ci : groups[i].offsets)
                for (double cj : groups[j].offsets)
                    m = std::max(m, incidence(Minv * Eigen::Vector2d(ci, cj)));
        }
    }
    return m;
}

inline int coincidence_3d(const std::vector<Hyperplane>& hs) {
    if (hs.size() > 300)
        throw PreconditionFailed("arrangement_bound: too many hyperplanes for d = 3");
    int m = hs.empty() ? 0 : 1;
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i + 1; j < hs.size(); ++j)
            for (std::size_t k = j + 1; k < hs.size(); ++k) {
                Eigen::Matrix3d M;
                M.row(0) = hs[i].normal.transpose();
                M.row(1) = hs[j].normal.transpose();
                M.row(2) = hs[k].normal.transpose();
                if (std::abs(M.determinant()) < 1e-12) continue;
                Eigen::Vector3d x =
                    M.inverse() * Eigen::Vector3d(hs[i].offset, hs[j].offset, hs[k].offset);
                int count = 0;
                for (const auto& h : hs)
                    if (std::abs(h.normal.dot(x) - h.offset) <= 1e-9 * (1.0 + std::abs(h.offset)))
                        ++count;
                m = std::max(m, count);
            }
    return m;
}

} // namespace sym_detail

// Region bound of a central arrangement: with at most m hyperplanes through
// any single point, no point of R^d meets more than 2 * sum_{k<=d-1} C(m-1,k)
// cells.
inline ArrangementBound arrangement_bound_of(std::vector<Hyperplane> hyperplanes, int d,
                                             int depth = 0) {
    ArrangementBound out;
    out.arrangement.depth = depth;
    out.arrangement.hyperplanes = sym_detail::dedupe_hyperplanes(std::move(hyperplanes), 1e-10);
    const auto& H = out.arrangement.hyperplanes;
    int m = 0;
    if (d == 1) m = H.empty() ? 0 : 1;
    else if (d == 2) m = sym_detail::coincidence_2d(H);
    else if (d == 3) m = sym_detail::coincidence_3d(H);
    else throw Unsupported("arrangement_bound: implemented for d <= 3");
    out.arrangement.coincidence = m;
    long long bound = 0;
    for (int k = 0; k <= d - 1; ++k) bound += sym_detail::binomial(m - 1, k);
    out.bound = 2 * bound;
    return out;
}

// H_mu^(n): pullbacks of every partition hyperplane under every composition of
// length < n, deduplicated, with the induced region bound.
inline ArrangementBound arrangement_bound(const PiecewiseContraction& f, int depth) {
    if (f.is_interval() ? false : f.dim() > 3)
        throw Unsupported("arrangement_bound: implemented for d <= 3");
    if (depth < 1) throw InvalidParameter("arrangement_bound: depth must be >= 1");
    const int d = f.dim();
    std::vector<Hyperplane> hs;
    const int n_labels = f.num_labels();
    std::size_t nodes = 0;

    std::function<void(const AffineContraction&, int)> walk = [&](const AffineContraction& pre,
                                                                  int level) {
        if (++nodes > 2000000)
            throw PreconditionFailed("arrangement_bound: word tree too large at this depth");
        if (f.is_interval()) {
            for (double m : f.breakpoints().mu) {
                // (phi^alpha)^{-1}({x = m}) in 1-D
                Eigen::VectorXd nv(1);
                nv << 1.0;
                hs.emplace_back(nv, (m - pre.b(0)) / pre.Lambda(0, 0));
            }
        } else {
            const auto& hp = f.hyperplanes();
            for (int j = 0; j < hp.V.rows(); ++j) {
                Eigen::VectorXd nv = pre.Lambda.transpose() * hp.V.row(j).transpose();
                const double off = hp.mu(j) - hp.V.row(j).dot(pre.b);
                hs.emplace_back(nv, off);
            }
        }
        if (level + 1 >= depth) return;
        for (Label l = 0; l < n_labels; ++l) {
            const auto& phi = f.branches[static_cast<std::size_t>(l)];
            AffineContraction next;
            next.Lambda = phi.Lambda * pre.Lambda;
            next.b = phi.Lambda * pre.b + phi.b;
            next.lip = pre.lip * phi.lip;
            walk(next, level + 1);
        }
    };
    walk(sym_detail::identity_map(d), 0);
    return arrangement_bound_of(std::move(hs), d, depth);
}

struct MultEntropyRow {
    int n = 0;
    double mult = 0.0; // exact multiplicity, or the arrangement bound beyond d = 2
    double rate = 0.0; // (1/n) log mult
    bool exact = true;
};

inline std::vector<MultEntropyRow> mult_entropy_estimate(const PiecewiseContraction& f,
                                                         int n_max,
                                                         std::size_t cap = 1000000) {
    std::vector<MultEntropyRow> rows;
    CylinderEnumerator e(f, cap);
    for (int n = 1; n <= n_max; ++n) {
        const auto& coll = e.extend_to(n);
        MultEntropyRow row;
        row.n = n;
        if (f.is_interval() || f.dim() == 2) {
            row.mult = static_cast<double>(multiplicity(coll));
            row.exact = true;
        } else {
            row.mult = static_cast<double>(arrangement_bound(f, n).bound);
            row.exact = false;
        }
        row.rate = row.mult > 0 ? std::log(row.mult) / static_cast<double>(n) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

// D_n: the breakpoints together with their backward orbits inside (0,1),
// computed by solving phi_i(x) = y over the open cells. Independent route to
// #I_n, used by the 1-D counting identity (#I_n = 1 + #D_n).
inline std::vector<double> singular_preimages_1d(const PiecewiseContraction& f, int depth) {
    if (!f.is_interval()) throw Unsupported("singular_preimages_1d: 1-D maps only");
    const auto& mu = f.breakpoints().mu;
    std::vector<double> current(mu.begin(), mu.end());
    std::vector<double> all(current);
    for (int k = 1; k < depth; ++k) {
        std::vector<double> next;
        for (double y : current) {
            for (Label l = 0; l < f.num_labels(); ++l) {
                const auto& phi = f.branches[static_cast<std::size_t>(l)];
                const double s = phi.Lambda(0, 0);
                const double x = (y - phi.b(0)) / s;
                const Interval cell = sym_detail::cell_interval(f, l);
                if (x > cell.lo && x < cell.hi) next.push_back(x);
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        current = std::move(next);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              all.end());
    return all;
}

} // namespace pclab
