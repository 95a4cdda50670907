#include "edi/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edi/error.hpp"
#include "edi/rng.hpp"
#include "fft.hpp"

namespace edi {

namespace {

constexpr double kLightSpeed = 299792458.0;     // m/s
constexpr double kPlanck = 6.62607015e-34;      // J s
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Raised-cosine spectrum (peak 1) at frequency f for symbol rate rs.
double raised_cosine(double f, double rs, double beta) {
    const double af = std::abs(f);
    const double f1 = (1.0 - beta) * rs / 2.0;
    const double f2 = (1.0 + beta) * rs / 2.0;
    if (af <= f1) return 1.0;
    if (af > f2) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi / (beta * rs) * (af - f1)));
}

/// Frequency of FFT bin k for an N-point grid with sample rate fs.
double bin_frequency(std::size_t k, std::size_t n, double fs) {
    const auto sk = static_cast<double>(k);
    const auto sn = static_cast<double>(n);
    return (k < (n + 1) / 2 ? sk : sk - sn) * fs / sn;
}

void check_finite(const Complex* a, std::size_t n, std::size_t span) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag()))
            throw NumericalDivergenceError("non-finite field after span " + std::to_string(span) + " at sample " +
                                           std::to_string(i));
    }
}

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("link config field '") + key + "': " + e.what());
    }
}

}  // namespace

void LinkConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("link config: " + msg);
    };
    require(symbol_rate > 0, "symbol_rate must be > 0");
    require(wdm_channels >= 1, "wdm_channels must be >= 1");
    require(wdm_spacing > 0, "wdm_spacing must be > 0");
    require(rolloff > 0 && rolloff <= 1, "rolloff must be in (0, 1]");
    require(span_length > 0, "span_length must be > 0");
    require(num_spans >= 1, "num_spans must be >= 1");
    require(attenuation >= 0, "attenuation must be >= 0");
    require(wavelength > 0, "wavelength must be > 0");
    require(step_size > 0, "step_size must be > 0");
    require(samples_per_symbol >= 2, "samples_per_symbol must be >= 2");
    require(edfa_noise_figure >= 0, "edfa_noise_figure must be >= 0 dB");
    require(std::isfinite(launch_power_dbm), "launch_power_dbm must be finite");
    const double occupied = static_cast<double>(wdm_channels) * wdm_spacing + (1.0 + rolloff) * symbol_rate;
    if (!(sample_rate() > occupied)) {
        std::ostringstream os;
        os << "simulation bandwidth " << sample_rate() << " Hz does not cover the WDM spectrum " << occupied
           << " Hz; raise samples_per_symbol";
        throw ConfigError("link config: " + os.str());
    }
}

double LinkConfig::beta2() const noexcept {
    const double d = dispersion_d * 1e-6;  // ps/(nm km) -> s/m^2
    const double lambda = wavelength * 1e-9;
    return -d * lambda * lambda / (kTwoPi * kLightSpeed);
}

double LinkConfig::alpha() const noexcept { return attenuation / (10.0 * std::log10(std::exp(1.0))) * 1e-3; }

double LinkConfig::ase_psd() const noexcept {
    const double nu = kLightSpeed / (wavelength * 1e-9);
    const double gain = std::exp(alpha() * span_length * 1e3);
    const double f = db_to_linear(edfa_noise_figure);
    return kPlanck * nu * (f * gain - 1.0) / 2.0;
}

double LinkConfig::launch_power_w() const noexcept { return 1e-3 * db_to_linear(launch_power_dbm); }

LinkConfig parse_link_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("link config must be a JSON object");
    static const char* known[] = {"symbol_rate",       "wdm_channels", "wdm_spacing",        "rolloff",
                                  "span_length",       "num_spans",    "attenuation",        "dispersion_d",
                                  "gamma",             "edfa_noise_figure", "wavelength",    "step_size",
                                  "samples_per_symbol", "launch_power_dbm", "ase_enabled"};
    for (const auto& item : j.items()) {
        if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
            throw ConfigError("link config: unknown field '" + item.key() + "'");
    }
    LinkConfig c;
    read_field(j, "symbol_rate", c.symbol_rate);
    read_field(j, "wdm_channels", c.wdm_channels);
    read_field(j, "wdm_spacing", c.wdm_spacing);
    read_field(j, "rolloff", c.rolloff);
    read_field(j, "span_length", c.span_length);
    read_field(j, "num_spans", c.num_spans);
    read_field(j, "attenuation", c.attenuation);
    read_field(j, "dispersion_d", c.dispersion_d);
    read_field(j, "gamma", c.gamma);
    read_field(j, "edfa_noise_figure", c.edfa_noise_figure);
    read_field(j, "wavelength", c.wavelength);
    read_field(j, "step_size", c.step_size);
    read_field(j, "samples_per_symbol", c.samples_per_symbol);
    read_field(j, "launch_power_dbm", c.launch_power_dbm);
    read_field(j, "ase_enabled", c.ase_enabled);
    c.validate();
    return c;
}

LinkConfig load_link_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open link config");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_link_config(j);
}

nlohmann::json to_json(const LinkConfig& c) {
    return nlohmann::json{{"symbol_rate", c.symbol_rate},
                          {"wdm_channels", c.wdm_channels},
                          {"wdm_spacing", c.wdm_spacing},
                          {"rolloff", c.rolloff},
                          {"span_length", c.span_length},
                          {"num_spans", c.num_spans},
                          {"attenuation", c.attenuation},
                          {"dispersion_d", c.dispersion_d},
                          {"gamma", c.gamma},
                          {"edfa_noise_figure", c.edfa_noise_figure},
                          {"wavelength", c.wavelength},
                          {"step_size", c.step_size},
                          {"samples_per_symbol", c.samples_per_symbol},
                          {"launch_power_dbm", c.launch_power_dbm},
                          {"ase_enabled", c.ase_enabled}};
}

std::string config_hash(const nlohmann::json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::int64_t estimate_channel_memory(const LinkConfig& cfg, double distance_km, FrequencyConvention convention) {
    if (!(distance_km > 0)) throw InvalidInputError("channel memory: distance must be > 0");
    double dw = static_cast<double>(cfg.wdm_channels) * cfg.wdm_spacing;
    if (convention == FrequencyConvention::angular) dw *= kTwoPi;
    const double m = distance_km * 1e3 * dw * dw * std::abs(cfg.beta2());
    return static_cast<std::int64_t>(std::ceil(m));
}

PropagationResult propagate(std::span<const SymbolSequence> tx_per_channel, const LinkConfig& cfg,
                            std::uint64_t noise_seed) {
    cfg.validate();
    if (tx_per_channel.size() != cfg.wdm_channels)
        throw InvalidInputError("propagate: expected " + std::to_string(cfg.wdm_channels) + " channels, got " +
                                std::to_string(tx_per_channel.size()));
    const std::size_t T = tx_per_channel.front().size();
    if (T == 0) throw InvalidInputError("propagate: empty symbol sequence");
    for (const auto& ch : tx_per_channel)
        if (ch.size() != T) throw InvalidInputError("propagate: all channels must have the same length");

    const std::size_t sps = cfg.samples_per_symbol;
    const std::size_t N = T * sps;
    const double fs = cfg.sample_rate();
    const double rs = cfg.symbol_rate;
    const std::size_t center = cfg.wdm_channels / 2;

    std::vector<double> omega(N);
    std::vector<double> rrc(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double f = bin_frequency(k, N, fs);
        omega[k] = kTwoPi * f;
        rrc[k] = std::sqrt(static_cast<double>(sps) * raised_cosine(f, rs, cfg.rolloff));
    }

    detail::Fft fft(N);
    Complex* a = fft.data();
    std::vector<Complex> spectrum(N, Complex{});
    const double bin_hz = fs / static_cast<double>(N);
    const double amp = std::sqrt(cfg.launch_power_w() * static_cast<double>(sps));

    for (std::size_t ch = 0; ch < cfg.wdm_channels; ++ch) {
        for (std::size_t i = 0; i < N; ++i) a[i] = 0.0;
        const auto& sym = tx_per_channel[ch].symbols;
        for (std::size_t i = 0; i < T; ++i) a[i * sps] = sym[i];
        fft.forward();
        const double offset_hz = (static_cast<double>(ch) - static_cast<double>(center)) * cfg.wdm_spacing;
        const auto shift = static_cast<std::int64_t>(std::llround(offset_hz / bin_hz));
        const auto sn = static_cast<std::int64_t>(N);
        for (std::size_t k = 0; k < N; ++k) {
            if (rrc[k] == 0.0) continue;
            const auto dst = static_cast<std::size_t>(((static_cast<std::int64_t>(k) + shift) % sn + sn) % sn);
            spectrum[dst] += a[k] * (amp * rrc[k]);
        }
    }

    // Per-span step grid: steps of length h with h <= step_size.
    const double span_m = cfg.span_length * 1e3;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span_m / cfg.step_size - 1e-9)));
    const double h = span_m / static_cast<double>(steps);
    const double alpha = cfg.alpha();
    const double beta2 = cfg.beta2();
    const double gamma = cfg.gamma * 1e-3;
    const double h_eff = alpha > 0 ? -std::expm1(-alpha * h) / alpha : h;
    const double inv_n = 1.0 / static_cast<double>(N);

    std::vector<Complex> half(N);
    std::vector<Complex> full(N);
    for (std::size_t k = 0; k < N; ++k) {
        const Complex g(-alpha / 2.0, beta2 * omega[k] * omega[k] / 2.0);
        half[k] = std::exp(g * (h / 2.0));
        full[k] = std::exp(g * h);
    }

    const double span_gain = std::exp(alpha * span_m / 2.0);  // field gain
    const double ase_sigma = std::sqrt(cfg.ase_psd() * fs / 2.0);  // per quadrature
    Rng noise(noise_seed);

    for (std::size_t k = 0; k < N; ++k) a[k] = spectrum[k] * inv_n;
    fft.inverse();

    for (std::size_t span = 0; span < cfg.num_spans; ++span) {
        fft.forward();
        for (std::size_t k = 0; k < N; ++k) a[k] *= half[k] * inv_n;
        fft.inverse();
        for (std::size_t s = 0; s < steps; ++s) {
            if (gamma != 0.0) apply_nonlinear_step(std::span<Complex>(a, N), gamma, h_eff);
            fft.forward();
            const auto& lin = (s + 1 == steps) ? half : full;
            for (std::size_t k = 0; k < N; ++k) a[k] *= lin[k] * inv_n;
            fft.inverse();
        }
        for (std::size_t i = 0; i < N; ++i) a[i] *= span_gain;
        if (cfg.ase_enabled) {
            for (std::size_t i = 0; i < N; ++i) {
                const double re = noise.normal();
                const double im = noise.normal();
                a[i] += Complex(re, im) * ase_sigma;
            }
        }
        check_finite(a, N, span);
    }

    // Receiver: CD compensation and matched filter in one pass, then sampling.
    const double total_m = span_m * static_cast<double>(cfg.num_spans);
    fft.forward();
    for (std::size_t k = 0; k < N; ++k) {
        const Complex cd = std::exp(Complex(0.0, -beta2 * omega[k] * omega[k] * total_m / 2.0));
        a[k] *= cd * (rrc[k] * inv_n);
    }
    fft.inverse();

    PropagationResult res;
    res.per_run_seed = noise_seed;
    res.tx_symbols = tx_per_channel[center];
    res.rx_symbols.meta = res.tx_symbols.meta;
    res.rx_symbols.symbols.resize(T);
    const auto& x = res.tx_symbols.symbols;
    auto& y = res.rx_symbols.symbols;
    for (std::size_t i = 0; i < T; ++i) y[i] = a[i * sps];

    // Global complex least-squares fit y ≈ c·x removes the mean nonlinear rotation and the launch scaling.
    Complex num{};
    double den = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
        num += y[i] * std::conj(x[i]);
        den += std::norm(x[i]);
    }
    if (den == 0.0 || num == Complex{}) throw NumericalDivergenceError("propagate: received signal has no overlap with tx");
    const Complex c = num / den;
    for (auto& v : y) v /= c;
    return res;
}

void apply_nonlinear_step(std::span<Complex> field, double gamma_per_m, double h_eff_m) {
    for (auto& v : field) {
        const double phi = gamma_per_m * std::norm(v) * h_eff_m;
        v *= Complex(std::cos(phi), std::sin(phi));
    }
}

void apply_linear_step(std::span<Complex> field, const LinkConfig& cfg, double h_m) {
    const std::size_t N = field.size();
    if (N == 0) return;
    detail::Fft fft(N);
    std::copy(field.begin(), field.end(), fft.data());
    fft.forward();
    const double fs = cfg.sample_rate();
    const double alpha = cfg.alpha();
    const double beta2 = cfg.beta2();
    const double inv_n = 1.0 / static_cast<double>(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double w = kTwoPi * bin_frequency(k, N, fs);
        fft[k] *= std::exp(Complex(-alpha / 2.0, beta2 * w * w / 2.0) * h_m) * inv_n;
    }
    fft.inverse();
    std::copy(fft.data(), fft.data() + N, field.begin());
}

double effective_snr(std::span<const Complex> tx, std::span<const Complex> rx) {
    if (tx.size() != rx.size()) throw InvalidInputError("effective_snr: length mismatch");
    if (tx.empty()) throw InvalidInputError("effective_snr: empty sequences");
    long double sig = 0;
    long double err = 0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        sig += std::norm(tx[i]);
        err += std::norm(rx[i] - tx[i]);
    }
    if (err == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(10.0L * std::log10(sig / err));
}

double effective_snr(const PropagationResult& result) {
    return effective_snr(result.tx_symbols.symbols, result.rx_symbols.symbols);
}

double effective_snr(std::span<const PropagationResult> results) {
    if (results.empty()) throw InvalidInputError("effective_snr: no runs");
    double sum = 0.0;
    for (const auto& r : results) sum += effective_snr(r);
    return sum / static_cast<double>(results.size());
}

double analytic_ase_snr_db(const LinkConfig& cfg) {
    const double noise = static_cast<double>(cfg.num_spans) * cfg.ase_psd() * cfg.symbol_rate;
    return 10.0 * std::log10(cfg.launch_power_w() / noise);
}

}  // namespace edi
