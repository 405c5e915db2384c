#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pixgym {

// SplitMix64. The exact state transition is part of the task contract:
// layouts generated from a seed must be identical across implementations,
// so no std:: distribution (whose algorithms are library-defined) is used.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform integer in [0, n). Modulo bias is accepted (n is tiny).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    // Uniform integer in [lo, hi].
    int range(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform double in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Combines two 64-bit values into one well-mixed value.
inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return SplitMix64::mix(a ^ SplitMix64::mix(b + 0x9E3779B97F4A7C15ULL));
}

}  // namespace pixgym
