#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edi/symbols.hpp"

namespace edi {

/// PAM amplitude grid {Δ, 3Δ, 5Δ, ...}. Levels are kept as exact odd
/// integer multiples of Δ; only `level()` goes through floating point.
class AmplitudeAlphabet {
public:
    /// Throws ConfigError unless `multipliers` is a strictly increasing list of
    /// positive odd integers and delta > 0.
    explicit AmplitudeAlphabet(std::vector<int> multipliers, double delta = 1.0);

    /// {1, 3, ..., 2m-1} · Δ
    static AmplitudeAlphabet pam(std::size_t m, double delta = 1.0);

    std::size_t size() const noexcept { return multipliers_.size(); }
    const std::vector<int>& multipliers() const noexcept { return multipliers_; }
    double delta() const noexcept { return delta_; }
    double level(std::size_t i) const { return multipliers_.at(i) * delta_; }
    std::vector<double> levels() const;
    std::optional<std::size_t> index_of(int multiplier) const noexcept;

    bool operator==(const AmplitudeAlphabet&) const = default;

private:
    std::vector<int> multipliers_;
    double delta_;
};

/// Fixed per-codeword count of each amplitude level.
class Composition {
public:
    /// `levels` are odd Δ-multipliers (strictly increasing), `counts` aligned with them.
    Composition(std::vector<int> levels, std::vector<std::size_t> counts);

    const std::vector<int>& levels() const noexcept { return levels_; }
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    std::size_t blocklength() const noexcept { return n_; }
    std::size_t num_levels() const noexcept { return levels_.size(); }
    std::vector<double> pmf() const;
    /// Number of levels with a non-zero count.
    std::size_t support_size() const noexcept;

    bool operator==(const Composition&) const = default;

private:
    std::vector<int> levels_;
    std::vector<std::size_t> counts_;
    std::size_t n_ = 0;
};

/// Largest-remainder quantization of a target PMF to integer counts summing to n.
/// Ties go to the lower level index.
std::vector<std::size_t> quantize_pmf(std::span<const double> pmf, std::size_t n);

/// Moments of the amplitude A and of the QAM symbol X = ±A_I ± jA_Q built from
/// two independent, identically shaped dimensions.
struct MomentSet {
    double e_a2 = 0.0;
    double e_a4 = 0.0;
    double e_x2 = 0.0;
    double e_x4 = 0.0;
    double var_x2 = 0.0;
    double kurtosis = 1.0;

    /// Moments of c·X.
    MomentSet scaled(double c) const noexcept;
    /// Moments after scaling to E[|X|^2] = 1.
    MomentSet normalized() const;
};

MomentSet moments_from_composition(const Composition& comp, const AmplitudeAlphabet& alphabet);

/// Peak-to-average power ratio of the QAM constellation induced by `comp`.
double papr_from_composition(const Composition& comp, const AmplitudeAlphabet& alphabet);

/// Scales every symbol by 1/sqrt(moments.e_x2). Sequences already at unit
/// power are returned unchanged.
SymbolSequence normalize_to_unit_power(const SymbolSequence& seq, const MomentSet& moments);

/// Alphabet + composition, i.e. everything the analytical moments depend on.
struct ShapingSpec {
    AmplitudeAlphabet alphabet;
    Composition composition;
};

/// Accepts {"levels":[1,3,5,7],"counts":[4,3,2,1]} or
/// {"levels":[...],"pmf":[...],"n":N}, optionally with "delta".
ShapingSpec parse_shaping_spec(const nlohmann::json& j);
ShapingSpec load_shaping_spec(const std::string& path);
nlohmann::json to_json(const ShapingSpec& spec);

/// Composition with the given PMF over `levels`, quantized to blocklength n.
Composition composition_from_pmf(std::vector<int> levels, std::span<const double> pmf, std::size_t n);

/// The probabilistically shaped 64QAM used throughout: P_A = [0.4, 0.3, 0.2, 0.1] over {1,3,5,7}.
Composition ps64_composition(std::size_t n);

}  // namespace edi
