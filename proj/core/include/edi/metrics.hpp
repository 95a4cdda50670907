#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edi/shaping.hpp"
#include "edi/symbols.hpp"

namespace edi {

/// Window parameter W: the window centred at i spans i-W/2 ... i+W/2 (W+1 symbols).
class WindowSpec {
public:
    /// Throws ConfigError for odd W.
    explicit WindowSpec(std::size_t w);

    std::size_t w() const noexcept { return w_; }
    std::size_t length() const noexcept { return w_ + 1; }
    std::size_t half() const noexcept { return w_ / 2; }

private:
    std::size_t w_;
};

/// R̄_E(τ) for τ = 0..tau_max (the profile is even in τ).
struct AutocorrProfile {
    enum class Source { analytical, empirical };

    std::vector<double> values;
    Source source = Source::analytical;

    std::size_t tau_max() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    double operator[](std::size_t tau) const { return values.at(tau); }
};

struct EdiResult {
    double psi = 0.0;               ///< linear units
    double psi_db = 0.0;            ///< 10 log10 psi, -inf for psi == 0
    std::optional<std::size_t> n;   ///< blocklength (empty for i.i.d. or estimated values)
    std::size_t w = 0;
};

/// 10 log10(x) with x == 0 mapped to -inf.
double to_db(double linear);

/// Average autocorrelation of CCDM QAM symbol energies (even in tau).
double analytical_autocorr(const MomentSet& moments, std::size_t n, std::int64_t tau);
AutocorrProfile analytical_autocorr_profile(const MomentSet& moments, std::size_t n, std::size_t tau_max);

/// Within-block energy correlation ρ = (n E[|X|²]² - E[|X|⁴]) / (n-1). Requires n >= 2.
double within_block_correlation(const MomentSet& moments, std::size_t n);

/// Sample autocorrelation: R̂(τ) = Σ_t E_t E_{t+τ} / (T - τ), no wraparound.
/// Requires T > tau_max.
AutocorrProfile empirical_autocorr(const EnergySequence& energies, std::size_t tau_max);

/// G^W_i for every fully contained window (i = W/2 ... T-1-W/2), by sliding sum.
EnergySequence windowed_energies(const EnergySequence& energies, const WindowSpec& spec);

/// EDI of CCDM QAM sequences from the average autocorrelation (valid for every n, W).
EdiResult edi_analytical_ccdm(const MomentSet& moments, std::size_t n, const WindowSpec& spec);

/// Closed form (n+1)/(3(W+1)) E[|X|²](Φ-1). Throws DomainError when n > W+2.
EdiResult edi_linear(const MomentSet& moments, std::size_t n, const WindowSpec& spec);

/// E[|X|²](Φ-1): independent of n and W.
EdiResult edi_iid(const MomentSet& moments);

/// Plug-in estimate Var(G)/mean(G) over all full windows (population variance).
EdiResult edi_empirical(const EnergySequence& energies, const WindowSpec& spec);

/// Estimate over the full windows of several independent sequences pooled together.
EdiResult edi_empirical_pooled(std::span<const EnergySequence> sequences, const WindowSpec& spec);

struct WindowedStats {
    double mean = 0.0;
    double variance = 0.0;
};

enum class SourceModel { constant_composition, iid };

/// Average windowed-energy mean and variance.
WindowedStats windowed_stats_analytical(const MomentSet& moments, std::size_t n, const WindowSpec& spec,
                                        SourceModel model = SourceModel::constant_composition);

/// E[|x|⁴] / E[|x|²]² over the sequence.
double kurtosis_estimate(std::span<const Complex> symbols);
/// max |x|² / mean |x|²
double papr_estimate(std::span<const Complex> symbols);
/// (1 + #{i : x_{i-1} != x_i}) / T with exact complex comparison.
double run_ratio(std::span<const Complex> symbols);

struct Histogram {
    std::vector<double> edges;  ///< bins + 1 edges
    std::vector<double> freq;   ///< normalized to sum to 1

    std::size_t bins() const noexcept { return freq.size(); }
};

/// Histogram of G^W over [min G, max G]. A constant G collapses to a single bin.
Histogram windowed_energy_histogram(const EnergySequence& energies, const WindowSpec& spec, std::size_t bins);

/// "bin_lo,bin_hi,freq"
void write_histogram_csv(std::ostream& out, const Histogram& hist);

}  // namespace edi
