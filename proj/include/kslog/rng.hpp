#ifndef KSLOG_RNG_HPP
#define KSLOG_RNG_HPP

#include <cstdint>

namespace kslog {

/// Counter-based deterministic generator (SplitMix64). Any implementation
/// in any language reproduces the same stream from the same (seed, case)
/// pair, which keeps the randomized suites byte-reproducible:
///
///   state_0 = seed + (case_index + 1) * 0x9E3779B97F4A7C15
///   next(): state += 0x9E3779B97F4A7C15
///           z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///           return z ^ (z >> 31)
///   uniform(): next() * 2^-64  in [0, 1)
class CaseRng {
public:
    CaseRng(std::uint64_t seed, std::uint64_t case_index)
        : state_(seed + (case_index + 1) * kGamma) {}

    std::uint64_t next() {
        state_ += kGamma;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// uniform double in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// integer in [lo, hi] inclusive
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return lo + next() % (hi - lo + 1);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t state_;
};

}  // namespace kslog

#endif
