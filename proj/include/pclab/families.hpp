#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pclab/attractor.hpp"
#include "pclab/errors.hpp"
#include "pclab/pwc.hpp"
#include "pclab/rng.hpp"
#include "pclab/symbolic.hpp"

namespace pclab {

enum class FamilyKind { Interval1D, HyperplaneMultiD, ContractedRotation };

// A parametrized family f_mu. Branch maps are fixed for the interval and
// hyperplane kinds (the partition carries the parameter); the contracted
// rotation moves both with its single parameter b.
struct FamilySpec {
    FamilyKind kind = FamilyKind::ContractedRotation;

    // Interval1D: fixed 1-D branches over cells (mu_{i-1}, mu_i)
    std::vector<AffineContraction> branches;

    // HyperplaneMultiD: fixed branches on X cut by <v_j,x> = mu_j
    Polytope X;
    Eigen::MatrixXd normals; // l x d

    // ContractedRotation
    double cr_lambda = 0.5;

    // parameter box; Interval1D parameters additionally obey 0 < mu_1 < ... < 1
    Eigen::VectorXd lo, hi;

    double eta = 1e-9;
    bool boundary_singular = true;
    Norm norm;

    int param_dim() const { return static_cast<int>(lo.size()); }
};

inline PiecewiseContraction contracted_rotation(double lambda, double b, double eta = 1e-9) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidParameter("contracted rotation: lambda must be in (0,1)");
    if (!(b > 1.0 - lambda && b < 1.0))
        throw InvalidParameter("contracted rotation: b must be in (1-lambda, 1)");
    const double breakpoint = (1.0 - b) / lambda;
    std::vector<AffineContraction> branches;
    branches.push_back(make_contraction_1d(lambda, b));
    branches.push_back(make_contraction_1d(lambda, b - 1.0));
    // A2 fails on the full interval (the first branch reaches 1 at the
    // breakpoint); per-cell images still land inside [0,1).
    PiecewiseContraction f =
        make_interval_pwc(std::move(branches), {breakpoint}, eta, /*require_a2=*/false);
    // mod-1 semantics: the breakpoint wraps to 0 through the second branch
    f.side.assign(1, SingularSide::Right);
    return f;
}

inline PiecewiseContraction instantiate(const FamilySpec& spec, const Eigen::VectorXd& mu) {
    switch (spec.kind) {
        case FamilyKind::ContractedRotation:
            if (mu.size() != 1) throw InvalidParameter("contracted rotation: one parameter");
            return contracted_rotation(spec.cr_lambda, mu(0), spec.eta);
        case FamilyKind::Interval1D: {
            std::vector<double> bp(mu.data(), mu.data() + mu.size());
            return make_interval_pwc(spec.branches, std::move(bp), spec.eta);
        }
        case FamilyKind::HyperplaneMultiD:
            return make_hyperplane_pwc(spec.X, spec.branches, spec.normals, mu, spec.eta,
                                       spec.boundary_singular, spec.norm);
    }
    throw ConfigError("instantiate: unknown family kind");
}

// Deterministic parameter draw for sample `index`.
inline Eigen::VectorXd sample_parameter(const FamilySpec& spec, std::uint64_t seed,
                                        std::uint64_t index) {
    SplitMix64 rng = keyed_rng(seed, index);
    const int M = spec.param_dim();
    Eigen::VectorXd mu(M);
    if (M == 0) return mu; // breakpoint-free family: nothing to draw
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (int i = 0; i < M; ++i) mu(i) = rng.uniform(spec.lo(i), spec.hi(i));
        if (spec.kind != FamilyKind::Interval1D) return mu;
        bool ordered = mu(0) > 1e-9 && mu(M - 1) < 1.0 - 1e-9;
        for (int i = 0; i + 1 < M && ordered; ++i)
            if (!(mu(i + 1) - mu(i) > 1e-9)) ordered = false;
        if (ordered) return mu;
    }
    throw InvalidParameter("sample_parameter: could not draw an ordered parameter");
}

// --- rotation number of the contracted rotation ---

struct RotationNumber {
    double value = 0.0;       // p/q when a cycle is found, lift average otherwise
    bool cycle_detected = false;
    long long p = 0, q = 0;   // reduced crossing count / period
};

namespace fam_detail {

// One lift step: returns the new point in [0,1) and increments the wrap count.
inline double cr_step(double lambda, double b, double x, long long& wraps) {
    double y = lambda * x + b;
    if (y >= 1.0) {
        y -= 1.0;
        ++wraps;
    }
    return y;
}

} // namespace fam_detail

// Birkhoff average of the lift displacement after `steps` iterations from 0.
// Each floating-point update is monotone in b, so this estimator inherits the
// exact monotonicity of the true rotation number.
inline double rotation_lift_average(double lambda, double b, long long steps) {
    double x = 0.0;
    long long wraps = 0;
    for (long long k = 0; k < steps; ++k) x = fam_detail::cr_step(lambda, b, x, wraps);
    return (static_cast<double>(wraps) + x) / static_cast<double>(steps);
}

inline RotationNumber rotation_number(double lambda, double b, long long horizon,
                                      double tol = 1e-12) {
    if (!(lambda > 0.0 && lambda < 1.0) || !(b > 1.0 - lambda && b < 1.0))
        throw InvalidParameter("rotation_number: invalid parameters");
    RotationNumber res;
    const long long transient = horizon / 2;
    double x = 0.0;
    long long wraps = 0;
    for (long long k = 0; k < transient; ++k) x = fam_detail::cr_step(lambda, b, x, wraps);
    const double anchor = x;
    long long wraps_period = 0;
    double y = x;
    long long q = 0;
    for (long long k = 1; k + transient <= horizon; ++k) {
        long long w = 0;
        y = fam_detail::cr_step(lambda, b, y, w);
        wraps_period += w;
        if (std::abs(y - anchor) <= tol) {
            q = k;
            break;
        }
    }
    if (q > 0) {
        long long p = wraps_period;
        const long long g = std::gcd(p, q);
        res.cycle_detected = true;
        res.p = p / g;
        res.q = q / g;
        res.value = static_cast<double>(res.p) / static_cast<double>(res.q);
        return res;
    }
    res.value = rotation_lift_average(lambda, b, horizon);
    return res;
}

// --- singular connections of interval families ---

struct SingularConnection {
    Word alpha;     // phi^alpha(mu_i) = mu_j within tol
    int i = 0;      // source breakpoint index (0-based)
    int j = 0;      // target breakpoint index (0-based)
    double gap = 0.0;
};

namespace fam_detail {

inline void record_hits(const std::vector<double>& mu, const Word& word, int i, double value,
                        double tol, std::vector<SingularConnection>& out) {
    for (std::size_t j = 0; j < mu.size(); ++j)
        if (std::abs(value - mu[j]) <= tol)
            out.push_back({word, i, static_cast<int>(j), std::abs(value - mu[j])});
}

} // namespace fam_detail

// Scan for phi^alpha(mu_i) = mu_j up to the given depth. By default the scan
// is pruned to words realizable as itineraries of the breakpoints' one-sided
// forward orbits (branching only inside the tol-band); full_scan walks all of
// A^n instead.
inline std::vector<SingularConnection> singular_connection_search(const PiecewiseContraction& f,
                                                                  int depth, double tol,
                                                                  bool full_scan = false,
                                                                  std::size_t cap = 2000000) {
    if (!f.is_interval())
        throw Unsupported("singular_connection_search: interval families only");
    const auto& mu = f.breakpoints().mu;
    const int N = f.num_labels();
    std::vector<SingularConnection> out;

    if (full_scan) {
        // walk the word tree carrying phi^alpha(mu_i) for every i at once
        std::size_t visited = 0;
        std::function<void(std::vector<double>&, Word&, int)> walk =
            [&](std::vector<double>& vals, Word& word, int level) {
                if (level >= depth) return;
                for (Label l = 0; l < N; ++l) {
                    if (++visited > cap)
                        throw ResourceExceeded("singular_connection_search: word cap exceeded");
                    const auto& phi = f.branches[static_cast<std::size_t>(l)];
                    std::vector<double> nv(vals.size());
                    for (std::size_t i = 0; i < vals.size(); ++i) nv[i] = phi.apply1(vals[i]);
                    word.push_back(l);
                    for (std::size_t i = 0; i < nv.size(); ++i)
                        fam_detail::record_hits(mu, word, static_cast<int>(i), nv[i], tol, out);
                    walk(nv, word, level + 1);
                    word.pop_back();
                }
            };
        std::vector<double> vals(mu.begin(), mu.end());
        Word word;
        walk(vals, word, 0);
    } else {
        std::function<void(double, Word&, int, int)> walk = [&](double y, Word& word, int i,
                                                                int level) {
            if (level >= depth) return;
            // admissible branches at y: its own cell, both cells inside the band
            std::vector<Label> allowed;
            for (Label l = 0; l < N; ++l) {
                const Interval cell = sym_detail::cell_interval(f, l);
                if (y > cell.lo - tol && y < cell.hi + tol) allowed.push_back(l);
            }
            for (Label l : allowed) {
                const double y2 = f.branches[static_cast<std::size_t>(l)].apply1(y);
                word.push_back(l);
                fam_detail::record_hits(mu, word, i, y2, tol, out);
                walk(y2, word, i, level + 1);
                word.pop_back();
            }
        };
        for (std::size_t i = 0; i < mu.size(); ++i) {
            Word word;
            walk(mu[i], word, static_cast<int>(i), 0);
        }
    }
    // dedupe (pruned seeds can rediscover the same connection)
    std::sort(out.begin(), out.end(), [](const SingularConnection& a, const SingularConnection& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const SingularConnection& a, const SingularConnection& b) {
                              return a.alpha == b.alpha && a.i == b.i && a.j == b.j;
                          }),
              out.end());
    return out;
}

// --- homothety exceptional offsets ---

struct ExceptionalHit {
    Word alpha;
    int j = 0;        // hyperplane index
    double value = 0.0; // <v_j, b_alpha> / (1 - lambda_alpha)
};

inline std::vector<ExceptionalHit> homothety_exceptional_check(const PiecewiseContraction& f,
                                                               int depth, double tol,
                                                               std::size_t cap = 2000000) {
    if (f.is_interval()) throw Unsupported("homothety_exceptional_check: hyperplane mode only");
    const int d = f.dim();
    std::vector<double> ratios;
    for (const auto& phi : f.branches) {
        const double lam = phi.Lambda(0, 0);
        if (!phi.Lambda.isApprox(lam * Eigen::MatrixXd::Identity(d, d), 1e-12))
            throw Unsupported("homothety_exceptional_check: branches must be homotheties");
        ratios.push_back(lam);
    }
    const auto& hp = f.hyperplanes();
    std::vector<ExceptionalHit> out;
    std::size_t visited = 0;
    std::function<void(double, const Eigen::VectorXd&, Word&, int)> walk =
        [&](double lam_alpha, const Eigen::VectorXd& b_alpha, Word& word, int level) {
            if (level >= depth) return;
            for (Label l = 0; l < f.num_labels(); ++l) {
                if (++visited > cap)
                    throw ResourceExceeded("homothety_exceptional_check: word cap exceeded");
                const auto& phi = f.branches[static_cast<std::size_t>(l)];
                const double lam2 = ratios[static_cast<std::size_t>(l)] * lam_alpha;
                const Eigen::VectorXd b2 = phi.Lambda * b_alpha + phi.b;
                word.push_back(l);
                for (int j = 0; j < hp.V.rows(); ++j) {
                    const double val = hp.V.row(j).dot(b2) / (1.0 - lam2);
                    if (std::abs(hp.mu(j) - val) <= tol) out.push_back({word, j, val});
                }
                walk(lam2, b2, word, level + 1);
                word.pop_back();
            }
        };
    Word word;
    walk(1.0, Eigen::VectorXd::Zero(d), word, 0);
    return out;
}

// --- Hypothesis (T) probe ---

struct HypTRow {
    double epsilon = 0.0;
    double estimate = 0.0; // worst Monte-Carlo measure estimate over probed words
    double bound = 0.0;    // c * epsilon^a with the family constants
    double ratio = 0.0;    // estimate / bound
    double sigma = 0.0;    // MC standard error of the worst estimate
};

struct HypTReport {
    double c = 0.0, a = 1.0;
    std::vector<HypTRow> rows;
    std::vector<Word> words;
};

namespace fam_detail {

// distance of the fixed composition image to S_mu as a function of mu only
inline double param_distance(const FamilySpec& spec, const Eigen::VectorXd& c_alpha,
                             const Eigen::VectorXd& mu) {
    if (spec.kind == FamilyKind::Interval1D) {
        const double c = c_alpha(0);
        double best = std::min(std::abs(c), std::abs(1.0 - c));
        for (int i = 0; i < mu.size(); ++i) best = std::min(best, std::abs(c - mu(i)));
        return best;
    }
    // hyperplane distance only: the boundary of X does not move with mu
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.normals.rows(); ++j)
        best = std::min(best, std::abs(spec.normals.row(j).dot(c_alpha) - mu(j)));
    return best;
}

struct BallSampler {
    const FamilySpec* spec;
    Eigen::VectorXd center;
    double delta;    // <= 0 means the whole parameter domain
    Eigen::VectorXd ref_lo, ref_hi;

    BallSampler(const FamilySpec& s, const Eigen::VectorXd& mu_star, double d)
        : spec(&s), center(mu_star), delta(d) {
        const int M = s.param_dim();
        ref_lo.resize(M);
        ref_hi.resize(M);
        for (int i = 0; i < M; ++i) {
            ref_lo(i) = delta > 0 ? std::max(s.lo(i), mu_star(i) - delta) : s.lo(i);
            ref_hi(i) = delta > 0 ? std::min(s.hi(i), mu_star(i) + delta) : s.hi(i);
        }
    }

    double ref_volume() const {
        double v = 1.0;
        for (int i = 0; i < ref_lo.size(); ++i) v *= std::max(0.0, ref_hi(i) - ref_lo(i));
        return v;
    }

    // draw from the reference box; report whether the draw lies in U_delta
    bool draw(SplitMix64& rng, Eigen::VectorXd& mu) const {
        const int M = spec->param_dim();
        mu.resize(M);
        for (int i = 0; i < M; ++i) mu(i) = rng.uniform(ref_lo(i), ref_hi(i));
        if (delta > 0 && (mu - center).norm() >= delta) return false;
        if (spec->kind == FamilyKind::Interval1D) {
            for (int i = 0; i + 1 < M; ++i)
                if (!(mu(i) < mu(i + 1))) return false;
        }
        return true;
    }
};

} // namespace fam_detail

inline HypTReport hypothesis_T_probe(const FamilySpec& spec, const Eigen::VectorXd& mu_star,
                                     double delta0, const std::vector<double>& epsilons,
                                     int samples, const std::vector<int>& depths,
                                     int words_per_depth = 8, std::uint64_t seed = 1) {
    if (spec.kind == FamilyKind::ContractedRotation)
        throw Unsupported("hypothesis_T_probe: interval or hyperplane families only");
    if (samples < 1000) throw InvalidParameter("hypothesis_T_probe: need >= 1000 samples");
    HypTReport report;
    report.a = 1.0;
    if (spec.kind == FamilyKind::Interval1D) {
        const int N = static_cast<int>(spec.branches.size());
        report.c = 2.0 * (N - 1);
    } else {
        report.c = std::pow(2.0, spec.X.dim()) * static_cast<double>(spec.normals.rows());
    }

    // words from the enumerated itineraries of f_{mu*} at the probe depths
    PiecewiseContraction f_star = instantiate(spec, mu_star);
    SplitMix64 word_rng = keyed_rng(seed, 0xa1fa);
    CylinderEnumerator en(f_star);
    for (int depth : depths) {
        const auto& coll = en.extend_to(depth);
        std::vector<std::size_t> idx(coll.size());
        std::iota(idx.begin(), idx.end(), 0);
        for (int k = 0; k < words_per_depth && !idx.empty(); ++k) {
            const std::size_t pick = word_rng.below(idx.size());
            report.words.push_back(coll.cylinders[idx[pick]].word);
            idx.erase(idx.begin() + static_cast<long>(pick));
        }
    }

    const Eigen::VectorXd x0 =
        Eigen::VectorXd::Zero(spec.kind == FamilyKind::Interval1D ? 1 : spec.X.dim());
    std::vector<Eigen::VectorXd> images;
    for (const auto& w : report.words) images.push_back(compose(spec.branches, w)(x0));

    fam_detail::BallSampler sampler(spec, mu_star, delta0);
    const double ref_vol = sampler.ref_volume();
    for (double eps : epsilons) {
        HypTRow row;
        row.epsilon = eps;
        row.bound = report.c * eps;
        for (std::size_t wi = 0; wi < images.size(); ++wi) {
            SplitMix64 rng = keyed_rng(seed, 0xbeef00 + wi);
            long long hit = 0;
            for (int s = 0; s < samples; ++s) {
                Eigen::VectorXd mu;
                if (!sampler.draw(rng, mu)) continue;
                if (fam_detail::param_distance(spec, images[wi], mu) <= eps) ++hit;
            }
            const double p_hat = static_cast<double>(hit) / static_cast<double>(samples);
            const double estimate = p_hat * ref_vol;
            const double sigma =
                ref_vol * std::sqrt(std::max(p_hat * (1.0 - p_hat), 1e-12) /
                                    static_cast<double>(samples));
            if (estimate > row.estimate) {
                row.estimate = estimate;
                row.sigma = sigma;
            }
        }
        row.ratio = row.bound > 0 ? row.estimate / row.bound : 0.0;
        report.rows.push_back(row);
    }
    return report;
}

// --- Hypothesis (E) probe ---

struct HypERow {
    double delta = 0.0;
    int n = 0;
    std::size_t count = 0; // #J_n^delta
    double rate = 0.0;     // (1/n) log count
};

struct HypEReport {
    std::vector<HypERow> rows;
    std::map<double, double> limsup_proxy; // per delta: max tail rate
};

inline HypEReport hypothesis_E_probe(const FamilySpec& spec, const Eigen::VectorXd& mu_star,
                                     double delta, int n_max, int samples,
                                     std::uint64_t seed = 1, std::size_t cap = 1000000) {
    if (samples < 10) throw InvalidParameter("hypothesis_E_probe: need >= 10 samples");
    const std::vector<double> deltas = {delta, delta / 2.0, delta / 4.0};
    // per delta and depth: union of itinerary sets
    std::vector<std::vector<std::set<Word>>> unions(
        deltas.size(), std::vector<std::set<Word>>(static_cast<std::size_t>(n_max)));

    fam_detail::BallSampler sampler(spec, mu_star, delta);
    SplitMix64 rng = keyed_rng(seed, 0xe0e0);
    std::vector<Eigen::VectorXd> mus = {mu_star};
    int guard = 0;
    while (static_cast<int>(mus.size()) < samples + 1 && guard++ < samples * 1000) {
        Eigen::VectorXd mu;
        if (sampler.draw(rng, mu)) mus.push_back(mu);
    }
    for (const auto& mu : mus) {
        PiecewiseContraction f = instantiate(spec, mu);
        CylinderEnumerator en(f, cap);
        const double dist = (mu - mu_star).norm();
        for (int n = 1; n <= n_max; ++n) {
            const auto& coll = en.extend_to(n);
            for (std::size_t di = 0; di < deltas.size(); ++di) {
                if (dist > deltas[di]) continue;
                for (const auto& c : coll.cylinders)
                    unions[di][static_cast<std::size_t>(n - 1)].insert(c.word);
            }
        }
    }
    HypEReport report;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        double tail = 0.0;
        std::vector<HypERow> rows;
        for (int n = 1; n <= n_max; ++n) {
            HypERow row;
            row.delta = deltas[di];
            row.n = n;
            row.count = unions[di][static_cast<std::size_t>(n - 1)].size();
            row.rate = std::log(static_cast<double>(std::max<std::size_t>(row.count, 1))) /
                       static_cast<double>(n);
            rows.push_back(row);
        }
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) tail = std::max(tail, it->rate);
        report.limsup_proxy[deltas[di]] = tail;
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    return report;
}

// --- stability probe (Definition of stable cylinder collections) ---

struct StabilityRow {
    double delta = 0.0;
    double identical_fraction = 0.0; // fraction of samples with I_n(f_mu) == I_n(f_mu*)
    double max_dh_ratio = 0.0;       // max d_H(A_mu^alpha, A_mu*^alpha) / |mu - mu*|
};

inline double region_hausdorff(const CylinderRegion& a, const CylinderRegion& b) {
    if (std::holds_alternative<Interval>(a)) {
        const auto& ia = std::get<Interval>(a);
        const auto& ib = std::get<Interval>(b);
        return std::max(std::abs(ia.lo - ib.lo), std::abs(ia.hi - ib.hi));
    }
    return hausdorff_distance(std::get<Polytope>(a), std::get<Polytope>(b)).value;
}

inline std::vector<StabilityRow> stability_probe(const FamilySpec& spec,
                                                 const Eigen::VectorXd& mu_star, int n,
                                                 const std::vector<double>& deltas, int samples,
                                                 std::uint64_t seed = 1) {
    PiecewiseContraction f_star = instantiate(spec, mu_star);
    const CylinderCollection base = enumerate_itineraries(f_star, n);
    std::vector<Word> base_words = base.itineraries();
    std::sort(base_words.begin(), base_words.end());
    std::vector<StabilityRow> out;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        fam_detail::BallSampler sampler(spec, mu_star, deltas[di]);
        SplitMix64 rng = keyed_rng(seed, 0x57ab + di);
        int same = 0, total = 0, guard = 0;
        double max_ratio = 0.0;
        while (total < samples && guard++ < samples * 1000) {
            Eigen::VectorXd mu;
            if (!sampler.draw(rng, mu)) continue;
            ++total;
            PiecewiseContraction f = instantiate(spec, mu);
            const CylinderCollection coll = enumerate_itineraries(f, n);
            std::vector<Word> words = coll.itineraries();
            std::sort(words.begin(), words.end());
            if (words == base_words) ++same;
            const double dist = (mu - mu_star).norm();
            if (dist < 1e-15) continue;
            for (const auto& c : coll.cylinders) {
                for (const auto& c0 : base.cylinders) {
                    if (c0.word != c.word) continue;
                    max_ratio = std::max(region_hausdorff(c.region, c0.region) / dist, max_ratio);
                    break;
                }
            }
        }
        StabilityRow row;
        row.delta = deltas[di];
        row.identical_fraction = total ? static_cast<double>(same) / total : 0.0;
        row.max_dh_ratio = max_ratio;
        out.push_back(row);
    }
    return out;
}

// --- parameter sweeps ---

enum class SamplerKind { Grid, Uniform };

struct SweepPlan {
    SamplerKind sampler = SamplerKind::Uniform;
    std::size_t count = 0;
    std::uint64_t seed = 1;
    std::vector<int> schedule;
    int workers = 1;
    std::size_t cap = 1000000;
    double slack = 1e-12;
    double orbit_residual = 1e-10;
};

struct SweepRecord {
    std::size_t index = 0;
    Eigen::VectorXd mu;
    bool certified = false;
    int depth = 0;          // certification depth, or deepest depth tried
    double margin = 0.0;    // certificate margin, or best margin seen
    int orbit_count = 0;
    std::vector<int> periods;
    std::string flag;       // undecided reason or error note; empty when certified
    double wall_time = 0.0; // seconds; excluded from canonical serialization
};

struct SweepSummary {
    std::size_t count = 0;
    std::size_t certified = 0;
    std::size_t undecided = 0;
    double fraction = 0.0;
    double wilson_lo = 0.0, wilson_hi = 0.0;
    std::map<int, std::size_t> period_histogram;
};

inline Eigen::VectorXd grid_parameter(const FamilySpec& spec, std::size_t count,
                                      std::size_t index) {
    const int M = spec.param_dim();
    if (M == 1) {
        Eigen::VectorXd mu(1);
        mu(0) = spec.lo(0) +
                (spec.hi(0) - spec.lo(0)) * (static_cast<double>(index) + 0.5) /
                    static_cast<double>(count);
        return mu;
    }
    // lattice with per-axis resolution ceil(count^(1/M)), row-major truncated
    const auto res = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(M))));
    Eigen::VectorXd mu(M);
    std::size_t rem = index;
    for (int i = 0; i < M; ++i) {
        const std::size_t cell = rem % res;
        rem /= res;
        mu(i) = spec.lo(i) +
                (spec.hi(i) - spec.lo(i)) * (static_cast<double>(cell) + 0.5) /
                    static_cast<double>(res);
    }
    return mu;
}

inline SweepRecord sweep_one(const FamilySpec& spec, const SweepPlan& plan, std::size_t index) {
    SweepRecord rec;
    rec.index = index;
    rec.mu = plan.sampler == SamplerKind::Grid ? grid_parameter(spec, plan.count, index)
                                               : sample_parameter(spec, plan.seed, index);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        PiecewiseContraction f = instantiate(spec, rec.mu);
        CertifySettings settings;
        settings.schedule = plan.schedule;
        settings.slack = plan.slack;
        settings.orbit_residual = plan.orbit_residual;
        settings.cap = plan.cap;
        const CertifyOutcome outcome = certify(f, settings);
        if (const auto* cert = std::get_if<PeriodicityCertificate>(&outcome)) {
            rec.certified = true;
            rec.depth = cert->depth;
            rec.margin = cert->margin;
            rec.orbit_count = static_cast<int>(cert->orbits.size());
            for (const auto& orbit : cert->orbits) rec.periods.push_back(orbit.period);
        } else {
            const auto& und = std::get<Undecided>(outcome);
            rec.depth = und.max_depth;
            rec.margin = und.best_margin;
            rec.flag = "undecided:" + und.reason;
        }
    } catch (const std::exception& e) {
        rec.flag = std::string("error:") + e.what();
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

// Deterministic sweep: records are keyed by sample index, so any number of
// workers yields the same record set.
inline std::vector<SweepRecord> sweep(const FamilySpec& spec, const SweepPlan& plan) {
    std::vector<SweepRecord> records(plan.count);
    if (plan.count == 0) return records;
    const int workers = std::max(1, plan.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < plan.count; ++i) records[i] = sweep_one(spec, plan, i);
        return records;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= plan.count) return;
            records[i] = sweep_one(spec, plan, i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

inline SweepSummary summarize(const std::vector<SweepRecord>& records, double z = 1.959963984540054) {
    SweepSummary s;
    s.count = records.size();
    for (const auto& r : records) {
        if (r.certified) {
            ++s.certified;
            for (int p : r.periods) ++s.period_histogram[p];
        } else {
            ++s.undecided;
        }
    }
    if (s.count == 0) return s;
    const double n = static_cast<double>(s.count);
    const double p = static_cast<double>(s.certified) / n;
    s.fraction = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    s.wilson_lo = std::max(0.0, center - half);
    s.wilson_hi = std::min(1.0, center + half);
    return s;
}

} // namespace pclab
