#include "banditlab/rng.hpp"

#include <cmath>
#include <numbers>

#include "banditlab/errors.hpp"

namespace banditlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x243f6a8885a308d3ull;  // arbitrary non-zero start
    for (std::uint64_t w : words) {
        h = splitmix64(h ^ w);
    }
    return h;
}

Rng::Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
    // 53-bit mantissa; in [0, 1).
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // Box-Muller; u1 shifted into (0, 1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

double Rng::normal(double mean, double std) { return mean + std * normal(); }

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw NumericError("gamma: shape must be positive");
    }
    if (shape < 1.0) {
        // Boost to shape+1 and scale back (Marsaglia-Tsang appendix trick).
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform();
        while (u <= 0.0) u = uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::size_t Rng::uniform_int(std::size_t n) {
    if (n == 0) {
        throw NumericError("uniform_int: n must be >= 1");
    }
    std::size_t idx = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

}  // namespace banditlab
