#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banachlab/errors.hpp"

namespace banachlab {

// SplitMix64. Small, fast, and good enough for sampling estimators; the point
// is reproducibility: the same seed always yields the same stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Box-Muller, no spare caching so the stream position is predictable.
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index dim) {
        Eigen::VectorXd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

    // Uniform on the Euclidean unit sphere.
    Eigen::VectorXd sphere(Eigen::Index dim) {
        Eigen::VectorXd v = gaussian_vector(dim);
        double n = v.norm();
        if (n < 1e-300) { v.setZero(); v[0] = 1.0; return v; }
        return v / n;
    }

    int sign() { return (next() & 1u) ? 1 : -1; }

    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

private:
    std::uint64_t state_;
};

// Deterministic per-draw sub-seed: estimators running draws in parallel derive
// each draw's stream from (seed, draw index) so schedule and thread count
// cannot change results.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
    g.next();
    return g.next();
}

enum class SampleStrategy { SphereUniform, CoordinateExtreme, Grid };

inline std::string to_string(SampleStrategy s) {
    switch (s) {
        case SampleStrategy::SphereUniform: return "sphere-uniform";
        case SampleStrategy::CoordinateExtreme: return "coordinate-extreme";
        case SampleStrategy::Grid: return "grid";
    }
    return "?";
}

inline SampleStrategy strategy_from_string(const std::string& s) {
    if (s == "sphere-uniform") return SampleStrategy::SphereUniform;
    if (s == "coordinate-extreme") return SampleStrategy::CoordinateExtreme;
    if (s == "grid") return SampleStrategy::Grid;
    throw PreconditionError("unknown sampling strategy: " + s);
}

// Sampling contract shared by all estimators. Identical (seed, count,
// strategy) reproduces identical draws; there is no hidden global RNG.
struct Sampler {
    std::uint64_t seed = 0;
    std::int64_t count = 1024;
    SampleStrategy strategy = SampleStrategy::SphereUniform;
    int grid_resolution = 9;

    Sampler() = default;
    Sampler(std::uint64_t s, std::int64_t c,
            SampleStrategy st = SampleStrategy::SphereUniform, int res = 9)
        : seed(s), count(c), strategy(st), grid_resolution(res) {
        if (count < 0) throw PreconditionError("sampler count must be >= 0");
        if (res < 2) throw PreconditionError("grid resolution must be >= 2");
    }

    SplitMix64 stream(std::uint64_t draw_index) const {
        return SplitMix64(sub_seed(seed, draw_index));
    }
};

} // namespace banachlab
