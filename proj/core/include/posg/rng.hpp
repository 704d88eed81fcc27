#pragma once

#include <cstdint>

namespace posg {

/// Counter-based generator: draw i of stream (seed, stream) is the SplitMix64
/// finalizer applied to a key derived from (seed, stream) plus i times the
/// golden-ratio increment. Streams never share state, so per-trial streams
/// can run in parallel and reproduce exactly.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed) ^ (stream + 0x9E3779B97F4A7C15ULL))) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in {0, ..., n-1}.
    int next_int(int n) { return static_cast<int>(next_double() * n); }

    /// Index drawn from an unnormalized nonnegative weight row.
    template <typename Row>
    int sample(const Row& weights, int n) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += weights[i];
        double u = next_double() * total;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return n - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace posg
