#include "edi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "edi/error.hpp"

namespace edi {

namespace {

using ld = long double;

ld autocorr_ld(const MomentSet& m, std::size_t n, std::int64_t tau) {
    const auto t = static_cast<std::size_t>(tau < 0 ? -tau : tau);
    const ld mu2 = static_cast<ld>(m.e_x2) * m.e_x2;
    if (t == 0) return m.e_x4;
    if (t >= n) return mu2;
    const ld nn = static_cast<ld>(n);
    const ld rho = (nn * mu2 - m.e_x4) / (nn - 1);
    return (static_cast<ld>(t) * mu2 + (nn - static_cast<ld>(t)) * rho) / nn;
}

/// Σ_{τ=1}^{W} (W-τ+1) R̄(τ)
ld weighted_autocorr_sum(const MomentSet& m, std::size_t n, std::size_t w) {
    ld sum = 0;
    for (std::size_t tau = 1; tau <= w; ++tau)
        sum += static_cast<ld>(w - tau + 1) * autocorr_ld(m, n, static_cast<std::int64_t>(tau));
    return sum;
}

EdiResult make_edi(double psi, std::optional<std::size_t> n, std::size_t w) {
    return EdiResult{psi, to_db(psi), n, w};
}

void require_nonempty(std::span<const Complex> symbols, const char* what) {
    if (symbols.empty()) throw InvalidInputError(std::string(what) + ": empty sequence");
}

}  // namespace

WindowSpec::WindowSpec(std::size_t w) : w_(w) {
    if (w % 2 != 0) throw ConfigError("window parameter W must be even, got " + std::to_string(w));
}

double to_db(double linear) {
    if (linear == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

double analytical_autocorr(const MomentSet& moments, std::size_t n, std::int64_t tau) {
    if (n == 0) throw InvalidInputError("analytical_autocorr: n must be >= 1");
    return static_cast<double>(autocorr_ld(moments, n, tau));
}

AutocorrProfile analytical_autocorr_profile(const MomentSet& moments, std::size_t n, std::size_t tau_max) {
    AutocorrProfile p;
    p.source = AutocorrProfile::Source::analytical;
    p.values.resize(tau_max + 1);
    for (std::size_t t = 0; t <= tau_max; ++t) p.values[t] = analytical_autocorr(moments, n, static_cast<std::int64_t>(t));
    return p;
}

double within_block_correlation(const MomentSet& moments, std::size_t n) {
    if (n < 2) throw DomainError("within-block correlation needs n >= 2");
    const ld nn = static_cast<ld>(n);
    return static_cast<double>((nn * moments.e_x2 * moments.e_x2 - moments.e_x4) / (nn - 1));
}

AutocorrProfile empirical_autocorr(const EnergySequence& energies, std::size_t tau_max) {
    const auto& e = energies.values;
    if (e.empty()) throw InvalidInputError("empirical_autocorr: empty sequence");
    if (e.size() <= tau_max)
        throw InvalidInputError("empirical_autocorr: sequence length " + std::to_string(e.size()) +
                                " must exceed tau_max " + std::to_string(tau_max));
    const std::size_t T = e.size();
    std::vector<double> acc(tau_max + 1, 0.0);
    // Outer loop over t keeps the inner lag loop free of a loop-carried
    // dependency, so it vectorizes without reassociation.
    for (std::size_t t = 0; t < T; ++t) {
        const double et = e[t];
        const std::size_t lags = std::min(tau_max, T - 1 - t);
        const double* tail = e.data() + t;
        double* a = acc.data();
        for (std::size_t tau = 0; tau <= lags; ++tau) a[tau] += et * tail[tau];
    }
    AutocorrProfile p;
    p.source = AutocorrProfile::Source::empirical;
    p.values.resize(tau_max + 1);
    for (std::size_t tau = 0; tau <= tau_max; ++tau) p.values[tau] = acc[tau] / static_cast<double>(T - tau);
    return p;
}

EnergySequence windowed_energies(const EnergySequence& energies, const WindowSpec& spec) {
    const auto& e = energies.values;
    const std::size_t len = spec.length();
    if (e.size() < len)
        throw InvalidInputError("windowed_energies: need at least W+1 = " + std::to_string(len) + " energies, got " +
                                std::to_string(e.size()));
    const std::size_t count = e.size() - len + 1;
    EnergySequence g;
    g.values.resize(count);
    constexpr std::size_t kResync = 4096;  // bound rounding drift of the running sum
    ld running = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % kResync == 0) {
            running = 0;
            for (std::size_t j = i; j < i + len; ++j) running += e[j];
        } else {
            running += static_cast<ld>(e[i + len - 1]) - static_cast<ld>(e[i - 1]);
        }
        g.values[i] = static_cast<double>(running);
    }
    return g;
}

EdiResult edi_analytical_ccdm(const MomentSet& moments, std::size_t n, const WindowSpec& spec) {
    if (n == 0) throw InvalidInputError("edi_analytical_ccdm: n must be >= 1");
    const std::size_t w = spec.w();
    const ld mu = moments.e_x2;
    const ld phi = moments.kurtosis;
    const ld s = weighted_autocorr_sum(moments, n, w);
    const ld wp1 = static_cast<ld>(w + 1);
    const ld psi = mu * (phi - wp1) + 2 * s / (wp1 * mu);
    return make_edi(static_cast<double>(psi), n, w);
}

EdiResult edi_linear(const MomentSet& moments, std::size_t n, const WindowSpec& spec) {
    if (n == 0) throw InvalidInputError("edi_linear: n must be >= 1");
    if (n > spec.w() + 2)
        throw DomainError("linear EDI is only valid for n <= W+2 (n=" + std::to_string(n) +
                          ", W=" + std::to_string(spec.w()) + ")");
    const ld mu = moments.e_x2;
    const ld phi = moments.kurtosis;
    const ld psi = static_cast<ld>(n + 1) / (3 * static_cast<ld>(spec.w() + 1)) * mu * (phi - 1);
    return make_edi(static_cast<double>(psi), n, spec.w());
}

EdiResult edi_iid(const MomentSet& moments) {
    const ld mu = moments.e_x2;
    const ld phi = moments.kurtosis;
    // Same expression as edi_analytical_ccdm at W = 0, so the two agree bit for bit.
    const ld psi = mu * (phi - 1) + 2 * ld{0} / mu;
    return make_edi(static_cast<double>(psi), std::nullopt, 0);
}

EdiResult edi_empirical(const EnergySequence& energies, const WindowSpec& spec) {
    return edi_empirical_pooled(std::span<const EnergySequence>(&energies, 1), spec);
}

EdiResult edi_empirical_pooled(std::span<const EnergySequence> sequences, const WindowSpec& spec) {
    if (sequences.empty()) throw InvalidInputError("edi_empirical: no sequences");
    std::vector<EnergySequence> windows;
    windows.reserve(sequences.size());
    bool constant = true;
    double first = 0.0;
    bool have_first = false;
    for (const auto& e : sequences) {
        windows.push_back(windowed_energies(e, spec));  // validates each length
        const auto [lo, hi] = std::minmax_element(e.values.begin(), e.values.end());
        if (!have_first) {
            first = *lo;
            have_first = true;
        }
        if (*lo != first || *hi != first) constant = false;
    }
    if (constant) return make_edi(0.0, std::nullopt, spec.w());  // every window is identical

    ld sum = 0;
    std::size_t count = 0;
    for (const auto& g : windows) {
        for (double v : g.values) sum += v;
        count += g.size();
    }
    const ld mean = sum / static_cast<ld>(count);
    ld sq = 0;
    for (const auto& g : windows) {
        for (double v : g.values) {
            const ld d = v - mean;
            sq += d * d;
        }
    }
    const ld var = sq / static_cast<ld>(count);
    return make_edi(static_cast<double>(var / mean), std::nullopt, spec.w());
}

WindowedStats windowed_stats_analytical(const MomentSet& moments, std::size_t n, const WindowSpec& spec,
                                        SourceModel model) {
    if (n == 0) throw InvalidInputError("windowed_stats_analytical: n must be >= 1");
    const std::size_t w = spec.w();
    const ld wp1 = static_cast<ld>(w + 1);
    WindowedStats st;
    st.mean = static_cast<double>(wp1 * moments.e_x2);
    if (model == SourceModel::iid) {
        st.variance = static_cast<double>(wp1 * moments.var_x2);
    } else {
        const ld mu = moments.e_x2;
        const ld var = wp1 * moments.var_x2 - static_cast<ld>(w) * wp1 * mu * mu +
                       2 * weighted_autocorr_sum(moments, n, w);
        st.variance = static_cast<double>(var);
    }
    return st;
}

double kurtosis_estimate(std::span<const Complex> symbols) {
    require_nonempty(symbols, "kurtosis_estimate");
    ld m2 = 0;
    ld m4 = 0;
    for (const auto& x : symbols) {
        const ld e = std::norm(x);
        m2 += e;
        m4 += e * e;
    }
    const ld T = static_cast<ld>(symbols.size());
    m2 /= T;
    m4 /= T;
    if (m2 == 0) throw InvalidInputError("kurtosis_estimate: zero-power sequence");
    return static_cast<double>(m4 / (m2 * m2));
}

double papr_estimate(std::span<const Complex> symbols) {
    require_nonempty(symbols, "papr_estimate");
    ld sum = 0;
    double peak = 0.0;
    for (const auto& x : symbols) {
        const double e = std::norm(x);
        sum += e;
        peak = std::max(peak, e);
    }
    const ld mean = sum / static_cast<ld>(symbols.size());
    if (mean == 0) throw InvalidInputError("papr_estimate: zero-power sequence");
    return static_cast<double>(peak / mean);
}

double run_ratio(std::span<const Complex> symbols) {
    require_nonempty(symbols, "run_ratio");
    std::size_t changes = 0;
    for (std::size_t i = 1; i < symbols.size(); ++i)
        if (symbols[i - 1] != symbols[i]) ++changes;
    return static_cast<double>(1 + changes) / static_cast<double>(symbols.size());
}

Histogram windowed_energy_histogram(const EnergySequence& energies, const WindowSpec& spec, std::size_t bins) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    const EnergySequence g = windowed_energies(energies, spec);
    const auto [lo_it, hi_it] = std::minmax_element(g.values.begin(), g.values.end());
    const auto [e_lo, e_hi] = std::minmax_element(energies.values.begin(), energies.values.end());
    Histogram h;
    if (*e_lo == *e_hi || *lo_it == *hi_it) {
        const double g0 = static_cast<double>(spec.length()) * *e_lo;
        h.edges = {g0, g0};
        h.freq = {1.0};
        return h;
    }
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi - lo) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
    h.edges[bins] = hi;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : g.values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, bins - 1)] += 1;
    }
    h.freq.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) h.freq[b] = static_cast<double>(counts[b]) / static_cast<double>(g.size());
    return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
    const auto old = out.precision(17);
    out << "bin_lo,bin_hi,freq\n";
    for (std::size_t b = 0; b < hist.bins(); ++b)
        out << hist.edges[b] << ',' << hist.edges[b + 1] << ',' << hist.freq[b] << '\n';
    out.precision(old);
}

}  // namespace edi
