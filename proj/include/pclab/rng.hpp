#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace pclab {

// splitmix64. Used everywhere a reproducible stream is needed.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s = 0) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

// Counter-based keying: the generator for sample `index` of a run depends only
// on (seed, index), so any parallel schedule produces the same draws.
inline SplitMix64 keyed_rng(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed);
    std::uint64_t a = mix.next();
    mix.state = index * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = mix.next();
    return SplitMix64(a ^ (b + 0x9e3779b97f4a7c15ULL));
}

// n sorted uniforms in (0,1), strictly increasing by construction retries.
inline std::vector<double> sorted_uniform(SplitMix64& rng, int n) {
    std::vector<double> v(n);
    for (;;) {
        for (int i = 0; i < n; ++i) v[i] = rng.uniform01();
        std::sort(v.begin(), v.end());
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i)
            if (v[i + 1] - v[i] < 1e-12) ok = false;
        if (n > 0 && (v.front() < 1e-12 || v.back() > 1.0 - 1e-12)) ok = false;
        if (ok) return v;
    }
}

} // namespace pclab
