#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/pwc.hpp"
#include "pclab/symbolic.hpp"

namespace pclab {

inline double pow_int(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

inline double default_x0_1d() { return 0.0; } // conventional interval base point

inline Eigen::VectorXd default_base_point(const PiecewiseContraction& f) {
    if (f.is_interval()) return point1(default_x0_1d());
    return chebyshev_center(f.space);
}

struct OmegaCover {
    int depth = 0;
    Eigen::VectorXd base_point;
    std::vector<Eigen::VectorXd> centers; // phi^alpha(x0), alpha in I_n(f)
    double radius = 0.0;                  // 2 diam(X) lambda^n
};

inline double cover_radius(const PiecewiseContraction& f, double diam, int depth) {
    return 2.0 * diam * pow_int(f.lambda, depth);
}

inline OmegaCover omega_cover_from(const PiecewiseContraction& f,
                                   const CylinderCollection& coll,
                                   const Eigen::VectorXd& x0, double diam) {
    OmegaCover cover;
    cover.depth = coll.depth;
    cover.base_point = x0;
    cover.radius = cover_radius(f, diam, coll.depth);
    cover.centers.reserve(coll.size());
    for (const auto& c : coll.cylinders) cover.centers.push_back(c.map(x0));
    return cover;
}

inline OmegaCover omega_cover(const PiecewiseContraction& f, const Eigen::VectorXd& x0,
                              int depth, std::size_t cap = 1000000) {
    const CylinderCollection coll = enumerate_itineraries(f, depth, cap);
    return omega_cover_from(f, coll, x0, diameter(f.space, f.norm));
}

// Functional graph alpha -> alpha' on the depth-n itineraries, built from
// witness images and validated on a second interior sample.
struct TransitionMap {
    std::vector<Word> words;
    std::vector<int> next; // index into words
};

namespace att_detail {

inline std::optional<int> find_word(const std::vector<Word>& words, const Word& w) {
    for (std::size_t i = 0; i < words.size(); ++i)
        if (words[i] == w) return static_cast<int>(i);
    return std::nullopt;
}

inline Word image_word(const PiecewiseContraction& f, const Eigen::VectorXd& x, int n) {
    const ItineraryResult it = itinerary(f, x, n + 1);
    if (!it.complete())
        throw SeparationViolated("transition: sample orbit hits the singular band at step " +
                                 std::to_string(*it.failed_at));
    return Word(it.word.begin() + 1, it.word.end());
}

// A second sample strictly inside the region, away from the witness.
inline Eigen::VectorXd second_sample(const Cylinder& c) {
    if (std::holds_alternative<Interval>(c.region)) {
        const auto& iv = std::get<Interval>(c.region);
        return point1(iv.lo + 0.25 * iv.length());
    }
    Eigen::VectorXd x = c.witness;
    x(0) += 0.5 * c.inradius;
    return x;
}

} // namespace att_detail

inline TransitionMap transition_map(const PiecewiseContraction& f,
                                    const CylinderCollection& coll) {
    TransitionMap tm;
    tm.words = coll.itineraries();
    tm.next.resize(tm.words.size(), -1);
    const int n = coll.depth;
    for (std::size_t i = 0; i < coll.cylinders.size(); ++i) {
        const Cylinder& c = coll.cylinders[i];
        const Word w1 = att_detail::image_word(f, c.witness, n);
        const Word w2 = att_detail::image_word(f, att_detail::second_sample(c), n);
        if (w1 != w2)
            throw SeparationViolated("transition: interior samples of " +
                                     word_to_string(c.word) + " disagree");
        if (!std::equal(c.word.begin() + 1, c.word.end(), w1.begin()))
            throw SeparationViolated("transition: image word is not the shift of " +
                                     word_to_string(c.word));
        const auto target = att_detail::find_word(tm.words, w1);
        if (!target)
            throw SeparationViolated("transition: image word " + word_to_string(w1) +
                                     " not among depth-" + std::to_string(n) + " itineraries");
        tm.next[i] = *target;
    }
    return tm;
}

struct PeriodicOrbit {
    std::vector<Eigen::VectorXd> points; // one period, starting at the fixed point
    int period = 0;                      // minimal period
    Word cycle_word;                     // branch symbols applied around the cycle
};

struct PeriodicityCertificate {
    int depth = 0;
    double epsilon = 0.0; // min over centers of dist_to_singular
    double radius = 0.0;  // 2 diam lambda^n
    double margin = 0.0;  // epsilon - radius
    double diam = 0.0;
    double lambda = 0.0;
    Eigen::VectorXd base_point;
    TransitionMap transition;
    std::vector<std::vector<int>> cycles; // index cycles in the functional graph
    std::vector<PeriodicOrbit> orbits;
};

inline std::vector<std::vector<int>> functional_graph_cycles(const std::vector<int>& next) {
    const int n = static_cast<int>(next.size());
    std::vector<int> state(static_cast<std::size_t>(n), 0); // 0 new, 1 on path, 2 done
    std::vector<std::vector<int>> cycles;
    for (int s = 0; s < n; ++s) {
        if (state[static_cast<std::size_t>(s)] != 0) continue;
        std::vector<int> path;
        int u = s;
        while (state[static_cast<std::size_t>(u)] == 0) {
            state[static_cast<std::size_t>(u)] = 1;
            path.push_back(u);
            u = next[static_cast<std::size_t>(u)];
        }
        if (state[static_cast<std::size_t>(u)] == 1) {
            auto it = std::find(path.begin(), path.end(), u);
            cycles.emplace_back(it, path.end());
        }
        for (int v : path) state[static_cast<std::size_t>(v)] = 2;
    }
    return cycles;
}

inline std::vector<PeriodicOrbit> extract_orbits(const PiecewiseContraction& f,
                                                 const TransitionMap& tm,
                                                 const CylinderCollection& coll,
                                                 double orbit_residual = 1e-10) {
    std::vector<PeriodicOrbit> orbits;
    for (const auto& cycle : functional_graph_cycles(tm.next)) {
        // One application of f advances a cylinder to its successor, applying
        // the first branch symbol of each word around the cycle.
        Word branch_word;
        branch_word.reserve(cycle.size());
        for (int idx : cycle)
            branch_word.push_back(coll.cylinders[static_cast<std::size_t>(idx)].word.front());
        const AffineContraction g = compose(f.branches, branch_word);
        const Eigen::VectorXd x_star = fixed_point(g);
        const Cylinder& home = coll.cylinders[static_cast<std::size_t>(cycle.front())];
        if (!region_contains(home.region, x_star, 0.0))
            throw CertificateInconsistent("periodic point escapes its cylinder " +
                                          word_to_string(home.word));
        PeriodicOrbit orbit;
        orbit.cycle_word = branch_word;
        Eigen::VectorXd x = x_star;
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            orbit.points.push_back(x);
            x = f.branches[static_cast<std::size_t>(branch_word[k])](x);
        }
        if ((x - x_star).norm() > orbit_residual)
            throw CertificateInconsistent("periodic orbit residual " +
                                          std::to_string((x - x_star).norm()));
        // minimal period: least q with f^q(x*) back at x*
        int period = static_cast<int>(cycle.size());
        for (int q = 1; q < static_cast<int>(cycle.size()); ++q) {
            if ((orbit.points[static_cast<std::size_t>(q)] - x_star).norm() <= orbit_residual) {
                period = q;
                break;
            }
        }
        orbit.period = period;
        orbit.points.resize(static_cast<std::size_t>(period));
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

struct Undecided {
    int max_depth = 0;
    double best_margin = -std::numeric_limits<double>::infinity();
    std::string reason; // "margin" | "lossy" | "resource" | "separation"
};

using CertifyOutcome = std::variant<PeriodicityCertificate, Undecided>;

inline bool certified(const CertifyOutcome& o) {
    return std::holds_alternative<PeriodicityCertificate>(o);
}

struct CertifySettings {
    std::vector<int> schedule;     // increasing depths
    double slack = 1e-12;          // safety slack on the separation inequality
    double orbit_residual = 1e-10;
    std::size_t cap = 1000000;     // enumeration cap
};

inline std::vector<int> default_schedule(int depth_max) {
    std::vector<int> s;
    for (int n = 4; n <= depth_max; n += (n < 8 ? 4 : 8)) s.push_back(n);
    if (s.empty() || s.back() != depth_max) s.push_back(depth_max);
    return s;
}

// The separation criterion: at the first scheduled depth with
//   eps_n = min_alpha dist(phi^alpha(x0), S) > 2 diam(X) lambda^n + slack
// the Omega-cover clears the singular set, every regular point of order n is
// regular, and the cylinders form a strongly invariant collection; the
// certificate then carries the transition cycles and their Banach fixed
// points. Anything else stays Undecided: the tool never claims aperiodicity.
inline CertifyOutcome certify(const PiecewiseContraction& f, const Eigen::VectorXd& x0,
                              const CertifySettings& settings) {
    if (settings.schedule.empty()) throw InvalidParameter("certify: empty depth schedule");
    const double diam = diameter(f.space, f.norm);
    Undecided und;
    CylinderEnumerator enumerator(f, settings.cap);
    for (int depth : settings.schedule) {
        und.max_depth = std::max(und.max_depth, depth);
        const CylinderCollection* coll = nullptr;
        try {
            coll = &enumerator.extend_to(depth);
        } catch (const ResourceExceeded&) {
            und.reason = "resource";
            return und;
        }
        double eps = std::numeric_limits<double>::infinity();
        for (const auto& c : coll->cylinders)
            eps = std::min(eps, dist_to_singular(f, c.map(x0)));
        const double radius = cover_radius(f, diam, depth);
        const double margin = eps - radius;
        und.best_margin = std::max(und.best_margin, margin);
        if (coll->lossy) {
            // Words may be missing; certifying here could be unsound.
            und.reason = "lossy";
            return und;
        }
        if (!(eps > radius + settings.slack)) {
            und.reason = "margin";
            continue;
        }
        TransitionMap tm;
        try {
            tm = transition_map(f, *coll);
        } catch (const SeparationViolated&) {
            und.reason = "separation";
            continue;
        }
        PeriodicityCertificate cert;
        cert.depth = depth;
        cert.epsilon = eps;
        cert.radius = radius;
        cert.margin = margin;
        cert.diam = diam;
        cert.lambda = f.lambda;
        cert.base_point = x0;
        cert.cycles = functional_graph_cycles(tm.next);
        cert.orbits = extract_orbits(f, tm, *coll, settings.orbit_residual);
        cert.transition = std::move(tm);
        for (const auto& orbit : cert.orbits)
            for (const auto& p : orbit.points)
                if (!(dist_to_singular(f, p) > 0.5 * cert.margin))
                    throw CertificateInconsistent("orbit point too close to the singular set");
        return cert;
    }
    if (und.reason.empty()) und.reason = "margin";
    return und;
}

inline CertifyOutcome certify(const PiecewiseContraction& f, const CertifySettings& settings) {
    return certify(f, default_base_point(f), settings);
}

} // namespace pclab
