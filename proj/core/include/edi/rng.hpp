#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace edi {

/// SplitMix64 finalizer. Used both as a seed expander and as the mixing
/// function of the counter-based stream derivation below.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent 64-bit seed for sub-stream `counter` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

/// Derives a sub-stream seed from a textual tag ("I", "Q", "signs", ...).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept;

/// xoshiro256** generator with portable bounded-integer and Gaussian draws.
///
/// Everything here is specified bit-for-bit, so sequences are identical on
/// every platform (unlike the std:: distributions).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;
    Rng(std::uint64_t seed, std::uint64_t stream) noexcept : Rng(derive_seed(seed, stream)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }
    std::uint64_t next() noexcept;

    /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal draw (Box-Muller, pairs cached).
    double normal() noexcept;

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace edi
