#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "pclab/attractor.hpp"
#include "pclab/families.hpp"

namespace pclab {

// 17 significant digits: doubles round-trip exactly through the text records.
inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt_vec(const Eigen::VectorXd& v, const char* sep = " ") {
    std::string s;
    for (int i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += fmt17(v(i));
    }
    return s;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

inline void write_certificate(std::ostream& os, const PeriodicityCertificate& cert,
                              const CylinderCollection* coll = nullptr) {
    os << "outcome certified\n";
    os << "depth " << cert.depth << '\n';
    os << "itineraries " << cert.transition.words.size() << '\n';
    os << "epsilon " << fmt17(cert.epsilon) << '\n';
    os << "radius " << fmt17(cert.radius) << '\n';
    os << "margin " << fmt17(cert.margin) << '\n';
    os << "diam " << fmt17(cert.diam) << '\n';
    os << "lambda " << fmt17(cert.lambda) << '\n';
    os << "base_point " << fmt_vec(cert.base_point) << '\n';
    os << "cycles " << cert.cycles.size() << '\n';
    for (std::size_t k = 0; k < cert.cycles.size(); ++k) {
        os << "cycle " << k << " length " << cert.cycles[k].size() << " words";
        for (int idx : cert.cycles[k])
            os << ' ' << word_to_string(cert.transition.words[static_cast<std::size_t>(idx)]);
        os << '\n';
    }
    for (std::size_t k = 0; k < cert.orbits.size(); ++k) {
        const auto& orbit = cert.orbits[k];
        os << "orbit " << k << " period " << orbit.period;
        for (const auto& p : orbit.points) os << " point " << fmt_vec(p, ",");
        os << '\n';
    }
    if (coll) os << "dropped_thin " << coll->dropped_thin << '\n';
}

inline void write_undecided(std::ostream& os, const Undecided& und) {
    os << "outcome undecided\n";
    os << "max_depth " << und.max_depth << '\n';
    os << "best_margin " << fmt17(und.best_margin) << '\n';
    os << "reason " << und.reason << '\n';
}

// One line per sweep sample. wall_time is only emitted on request so that
// reruns with the same seed and config stay byte-identical.
inline std::string sweep_record_line(const SweepRecord& rec, bool timings = false) {
    std::string s = "record " + std::to_string(rec.index);
    s += " mu " + fmt_vec(rec.mu, ",");
    s += rec.certified ? " outcome certified" : " outcome undecided";
    s += " depth " + std::to_string(rec.depth);
    s += " margin " + fmt17(rec.margin);
    s += " orbits " + std::to_string(rec.orbit_count);
    s += " periods ";
    for (std::size_t i = 0; i < rec.periods.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(rec.periods[i]);
    }
    if (rec.periods.empty()) s += '-';
    if (!rec.flag.empty()) s += " flag " + rec.flag;
    if (timings) s += " wall_time " + fmt17(rec.wall_time);
    return s;
}

// Line-oriented cylinder records: word, region data, witness.
inline void write_cylinders(std::ostream& os, const CylinderCollection& coll) {
    os << "depth " << coll.depth << " cylinders " << coll.size() << " dropped_thin "
       << coll.dropped_thin << '\n';
    for (const auto& c : coll.cylinders) {
        os << "cylinder " << word_to_string(c.word);
        if (std::holds_alternative<Interval>(c.region)) {
            const auto& iv = std::get<Interval>(c.region);
            os << " interval " << fmt17(iv.lo) << ' ' << fmt17(iv.hi);
        } else {
            const auto& P = std::get<Polytope>(c.region);
            os << " halfspaces " << P.rows();
            for (int i = 0; i < P.rows(); ++i)
                os << " | " << fmt_vec(P.A.row(i).transpose(), ",") << " <= " << fmt17(P.b(i));
        }
        os << " witness " << fmt_vec(c.witness, ",") << " inradius " << fmt17(c.inradius) << '\n';
    }
}

inline void write_sweep_summary(std::ostream& os, const SweepSummary& s) {
    os << "summary count " << s.count << " certified " << s.certified << " undecided "
       << s.undecided << '\n';
    os << "summary fraction " << fmt17(s.fraction) << " wilson95 " << fmt17(s.wilson_lo) << ' '
       << fmt17(s.wilson_hi) << '\n';
    os << "summary period_histogram";
    for (const auto& kv : s.period_histogram) os << ' ' << kv.first << ':' << kv.second;
    os << '\n';
}

} // namespace pclab
