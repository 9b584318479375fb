#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace yieldcast {

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64(std::uint64_t x);

// Per-work-unit seed: a pure function of its inputs, so scheduling order
// never changes what a work unit draws.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key,
                          std::initializer_list<std::uint64_t> indices = {});

// Engine plus distribution helpers built from raw 64-bit draws, so streams
// are identical across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::size_t below(std::size_t n);       // [0, n)
    double normal();                        // N(0, 1)

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace yieldcast
