#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

#include "edi/shaping.hpp"

namespace edi {

using BigInt = boost::multiprecision::cpp_int;

/// One CCDM output block: n amplitude levels (odd Δ-multipliers).
struct AmplitudeCodeword {
    std::vector<int> levels;

    std::size_t size() const noexcept { return levels.size(); }
    bool operator==(const AmplitudeCodeword&) const = default;
};

/// Exact constant-composition matcher built on enumerative (rank/unrank)
/// coding over the lexicographically ordered (smallest amplitude first)
/// permutations of the composition multiset.
///
/// The codebook used for bit mapping is the lexicographic prefix of length
/// 2^k, with k = floor(log2 N_C).
class CcdmCodec {
public:
    explicit CcdmCodec(Composition comp);

    const Composition& composition() const noexcept { return comp_; }
    /// N_C = n! / Π n_a!
    const BigInt& codebook_size() const noexcept { return codebook_size_; }
    /// k = floor(log2 N_C)
    std::size_t input_bits() const noexcept { return input_bits_; }
    std::size_t blocklength() const noexcept { return comp_.blocklength(); }

    /// Index-th codeword in lexicographic order. Throws RangeError if index >= N_C.
    AmplitudeCodeword rank_decode(const BigInt& index) const;

    /// Inverse of rank_decode. Throws InvalidInputError if the histogram differs from the composition.
    BigInt rank_encode(const AmplitudeCodeword& cw) const;

    /// Interprets `bits` (MSB first) as an integer in [0, 2^k) and unranks it.
    AmplitudeCodeword encode_bits(const std::vector<bool>& bits) const;

    /// Recovers the k input bits. Throws RangeError for valid CC sequences outside the 2^k prefix.
    std::vector<bool> decode_bits(const AmplitudeCodeword& cw) const;

private:
    Composition comp_;
    BigInt codebook_size_;
    std::size_t input_bits_ = 0;
};

/// Multinomial coefficient n! / Π counts_i!.
BigInt multinomial(const std::vector<std::size_t>& counts);

/// Parses a hexadecimal string into exactly k bits (MSB first). The value must
/// fit in k bits and use exactly ceil(k/4) digits.
std::vector<bool> bits_from_hex(std::string_view hex, std::size_t k);
std::string bits_to_hex(const std::vector<bool>& bits);

/// Emulated CCDM: each block is an independent uniform random permutation of
/// the composition multiset. Block b draws from the counter-based stream (seed, b).
std::vector<AmplitudeCodeword> sample_emulated(const Composition& comp, std::uint64_t seed,
                                               std::size_t blocks);

/// Same draws as sample_emulated, flattened into one level stream of length blocks·n.
std::vector<int> sample_emulated_levels(const Composition& comp, std::uint64_t seed, std::size_t blocks);

/// Exact CCDM: uniform k-bit inputs mapped through the codec.
std::vector<int> sample_exact_levels(const CcdmCodec& codec, std::uint64_t seed, std::size_t blocks);

// ---------------------------------------------------------------------------
// Shaping trellis

/// Node of the shaping trellis at one time index. Nodes are keyed by the
/// accumulated energy alone when it determines the remaining multiset;
/// otherwise several nodes share an energy and differ in `residual`.
struct TrellisState {
    std::int64_t energy = 0;               ///< accumulated Σ A_t² in units of Δ²
    std::vector<std::size_t> residual;     ///< amplitudes still to be drawn, per composition level
    double prob = 0.0;                     ///< P(node)
    std::vector<double> cond_prob;         ///< P(A_i = a | node), per composition level
    std::vector<double> joint_prob;        ///< P(A_i = a, node), per composition level
};

struct TrellisStage {
    std::size_t index = 0;
    std::vector<TrellisState> states;      ///< sorted by (energy, residual)
};

class ShapingTrellis {
public:
    ShapingTrellis(Composition comp, double delta, std::vector<TrellisStage> stages);

    const Composition& composition() const noexcept { return comp_; }
    double delta() const noexcept { return delta_; }
    /// Stages 0..n; stage n is terminal (no outgoing edges).
    const std::vector<TrellisStage>& stages() const noexcept { return stages_; }
    const TrellisStage& stage(std::size_t i) const { return stages_.at(i); }

    /// Distinct accumulated energies at time i (Δ² units).
    std::vector<std::int64_t> energy_levels(std::size_t i) const;
    /// The set ℰ over all time indices.
    std::vector<std::int64_t> all_energy_levels() const;

    /// P(ℰ_i = e)
    double state_prob(std::size_t i, std::int64_t energy) const;
    /// P(A_i = a, ℰ_i = e); `level` is an odd Δ-multiplier
    double joint_prob(std::size_t i, int level, std::int64_t energy) const;
    /// P(A_i = a | ℰ_i = e); 0 when the energy is unreachable
    double cond_prob(std::size_t i, int level, std::int64_t energy) const;
    /// P(A_i = a) = Σ_e P(A_i = a, ℰ_i = e)
    double marginal(std::size_t i, int level) const;
    std::size_t num_states() const noexcept;

private:
    std::size_t level_index(int level) const;

    Composition comp_;
    double delta_;
    std::vector<TrellisStage> stages_;
};

/// Exact trellis by dynamic programming over the drawing-without-replacement
/// process. Throws ResourceError when more than `max_states` nodes are needed.
ShapingTrellis build_trellis(const Composition& comp, const AmplitudeAlphabet& alphabet,
                             std::size_t max_states = 1'000'000);

nlohmann::json to_json(const ShapingTrellis& trellis);

}  // namespace edi
