#pragma once

#include <cstdint>
#include <random>

namespace corradapt {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used to derive independent
// substream seeds from (seed, stream id) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

// Reproducible stream: std::mt19937_64 (bit-exact by the standard) with
// uniform and Gaussian draws defined here rather than by the library's
// distribution objects, whose algorithms are implementation-defined.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

    // Uniform in [0, 1) from the top 53 bits of one engine output.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller, consuming two engine outputs per pair.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace corradapt
