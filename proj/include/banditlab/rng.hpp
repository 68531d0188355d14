#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace banditlab {

// splitmix64 finalizer; used to derive well-separated stream seeds from a
// single master seed plus a handful of integer tags.
std::uint64_t splitmix64(std::uint64_t x);

// Hash a list of words (master seed, stream tag, trial index, agent tag, ...)
// into one stream seed.  Order-sensitive by construction.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words);

// Stream tags for the independent RNG streams used by a trial.  The
// environment stream deliberately excludes the agent identity so that every
// agent replays the same context/reward sequence for a given master seed and
// trial index.
enum : std::uint64_t {
    kStreamEnv = 0x01,
    kStreamAgentInit = 0x02,
    kStreamAgentAct = 0x03,
    kStreamTrainBatch = 0x04,
};

// Deterministic RNG with the handful of draws the simulator needs.  All
// randomness in the project flows through this class; nothing reads
// wall-clock entropy.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Standard normal (Box-Muller, second value cached).
    double normal();

    double normal(double mean, double std);

    // Gamma(shape, scale 1) via Marsaglia-Tsang; shape > 0.
    double gamma(double shape);

    // Uniform integer in [0, n); n >= 1.
    std::size_t uniform_int(std::size_t n);

  private:
    std::mt19937_64 gen_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace banditlab
