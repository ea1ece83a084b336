#pragma once

#include <cstdint>
#include <string_view>

namespace merw {

// Counter-based generator: every draw is a pure hash of
// (seed, stream, counter), so parallel consumers stay reproducible no matter
// how work is scheduled, and adding a consumer never perturbs other streams.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed) ^ mix(stream ^ 0x9e3779b97f4a7c15ull))) {}

    CounterRng(std::uint64_t seed, std::string_view stream_name)
        : CounterRng(seed, fnv1a(stream_name)) {}

    // Uniform double in [0,1) from the 53 high bits of the mixed counter.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    std::uint64_t bits(std::uint64_t counter) const { return mix(key_ ^ mix(counter)); }

    // SplitMix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    std::uint64_t key_;
};

}  // namespace merw
