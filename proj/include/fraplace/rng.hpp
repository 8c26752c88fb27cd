#pragma once

#include <cstdint>

namespace frap {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel consumers can reproduce any
// single draw without replaying the sequence.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t raw(std::uint64_t stream, std::uint64_t counter) const {
        std::uint64_t z = mix(counter + 0x9e3779b97f4a7c15ull);
        z = mix(z ^ mix(stream + 0xbf58476d1ce4e5b9ull));
        return mix(z ^ mix(seed_ + 0x94d049bb133111ebull));
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01(std::uint64_t stream, std::uint64_t counter) const {
        return static_cast<double>(raw(stream, counter) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t stream, std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform01(stream, counter);
    }

    std::uint64_t seed() const { return seed_; }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

} // namespace frap
