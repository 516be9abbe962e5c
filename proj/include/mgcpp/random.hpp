#pragma once

#include <cstdint>
#include <random>

namespace mgcpp {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Streams are keyed by (seed, stream): the engine seed is
/// SplitMix64(seed ^ SplitMix64(stream + 1)), so independent replications,
/// assets or dimensions get decorrelated streams from one root seed.
/// Variates are produced by hand-written transforms (53-bit uniforms,
/// inversion for exponentials, Box-Muller for normals) rather than
/// <random> distributions, whose algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on (0, 1]; safe to take the log of.
    double uniform_positive();
    double exponential(double rate);
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace mgcpp
