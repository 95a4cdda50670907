#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edi/symbols.hpp"

namespace edi {

/// Fiber, WDM and DSP parameters. Units follow the field names: Hz, km, dB/km,
/// ps/nm/km, 1/W/km, dB, nm, m, dBm (launch power is per channel).
struct LinkConfig {
    double symbol_rate = 32e9;
    std::size_t wdm_channels = 5;
    double wdm_spacing = 50e9;
    double rolloff = 0.1;
    double span_length = 80.0;
    std::size_t num_spans = 1;
    double attenuation = 0.2;
    double dispersion_d = 17.0;
    double gamma = 1.37;
    double edfa_noise_figure = 6.0;
    double wavelength = 1550.0;
    double step_size = 50.0;
    std::size_t samples_per_symbol = 16;
    double launch_power_dbm = 0.0;
    bool ase_enabled = true;

    /// Throws ConfigError if the simulation bandwidth does not cover the WDM
    /// spectrum or any parameter is out of range.
    void validate() const;

    double sample_rate() const noexcept { return symbol_rate * static_cast<double>(samples_per_symbol); }
    /// β₂ in s²/m (negative for anomalous dispersion).
    double beta2() const noexcept;
    /// Field attenuation coefficient α in 1/m (power decays as e^{-αz}).
    double alpha() const noexcept;
    /// ASE power spectral density per amplifier, W/Hz: hν(F·G-1)/2.
    double ase_psd() const noexcept;
    double launch_power_w() const noexcept;
    double total_length_km() const noexcept { return span_length * static_cast<double>(num_spans); }
};

LinkConfig parse_link_config(const nlohmann::json& j);
LinkConfig load_link_config(const std::string& path);
nlohmann::json to_json(const LinkConfig& cfg);
/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

enum class FrequencyConvention { angular, ordinary };

/// One-sided memory M = ceil(L Δω² |β₂|) with Δω = 2π N_ch Δf (angular) or N_ch Δf.
std::int64_t estimate_channel_memory(const LinkConfig& cfg, double distance_km,
                                     FrequencyConvention convention = FrequencyConvention::angular);

struct PropagationResult {
    SymbolSequence tx_symbols;   ///< channel of interest
    SymbolSequence rx_symbols;   ///< after DSP, scaled to tx
    std::uint64_t per_run_seed = 0;
};

/// WDM split-step propagation. The channel of interest is tx_per_channel[N_ch/2],
/// placed at 0 Hz; channel k sits at (k - N_ch/2)·Δf.
PropagationResult propagate(std::span<const SymbolSequence> tx_per_channel, const LinkConfig& cfg,
                            std::uint64_t noise_seed);

/// 10 log10(Σ|x|² / Σ|y-x|²); +inf when y == x.
double effective_snr(const PropagationResult& result);
/// Mean of the per-run dB values.
double effective_snr(std::span<const PropagationResult> results);
double effective_snr(std::span<const Complex> tx, std::span<const Complex> rx);

/// Nonlinear phase rotation a_i <- a_i exp(j γ |a_i|² h_eff), γ in 1/W/m, h_eff in m.
void apply_nonlinear_step(std::span<Complex> field, double gamma_per_m, double h_eff_m);
/// Frequency-domain step exp((-α/2 + j β₂ ω²/2) h) on a field sampled at cfg.sample_rate().
void apply_linear_step(std::span<Complex> field, const LinkConfig& cfg, double h_m);

/// SNR (dB) after the amplifier chain with γ = 0: P / (N_spans · N_ASE · R_s).
double analytic_ase_snr_db(const LinkConfig& cfg);

}  // namespace edi
