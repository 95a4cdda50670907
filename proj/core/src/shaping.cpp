#include "edi/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "edi/error.hpp"

namespace edi {

using json = nlohmann::json;

EnergySequence energies(std::span<const Complex> symbols) {
    EnergySequence out;
    out.values.resize(symbols.size());
    std::transform(symbols.begin(), symbols.end(), out.values.begin(),
                   [](const Complex& x) { return std::norm(x); });
    return out;
}

// ---------------------------------------------------------------------------
// AmplitudeAlphabet

AmplitudeAlphabet::AmplitudeAlphabet(std::vector<int> multipliers, double delta)
    : multipliers_(std::move(multipliers)), delta_(delta) {
    if (multipliers_.empty()) throw ConfigError("amplitude alphabet is empty");
    if (!(delta_ > 0.0) || !std::isfinite(delta_))
        throw ConfigError("amplitude alphabet: delta must be positive and finite");
    for (std::size_t i = 0; i < multipliers_.size(); ++i) {
        const int m = multipliers_[i];
        if (m <= 0 || m % 2 == 0)
            throw ConfigError("amplitude alphabet: level " + std::to_string(m) +
                              " is not a positive odd multiple of delta");
        if (i > 0 && m <= multipliers_[i - 1])
            throw ConfigError("amplitude alphabet: levels must be strictly increasing");
    }
}

AmplitudeAlphabet AmplitudeAlphabet::pam(std::size_t m, double delta) {
    if (m == 0) throw ConfigError("PAM alphabet needs at least one level");
    std::vector<int> mult(m);
    for (std::size_t i = 0; i < m; ++i) mult[i] = static_cast<int>(2 * i + 1);
    return AmplitudeAlphabet(std::move(mult), delta);
}

std::vector<double> AmplitudeAlphabet::levels() const {
    std::vector<double> out(multipliers_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = multipliers_[i] * delta_;
    return out;
}

std::optional<std::size_t> AmplitudeAlphabet::index_of(int multiplier) const noexcept {
    auto it = std::lower_bound(multipliers_.begin(), multipliers_.end(), multiplier);
    if (it == multipliers_.end() || *it != multiplier) return std::nullopt;
    return static_cast<std::size_t>(it - multipliers_.begin());
}

// ---------------------------------------------------------------------------
// Composition

Composition::Composition(std::vector<int> levels, std::vector<std::size_t> counts)
    : levels_(std::move(levels)), counts_(std::move(counts)) {
    if (levels_.size() != counts_.size())
        throw ConfigError("composition: " + std::to_string(levels_.size()) + " levels but " +
                          std::to_string(counts_.size()) + " counts");
    if (levels_.empty()) throw ConfigError("composition is empty");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (levels_[i] <= 0 || levels_[i] % 2 == 0)
            throw ConfigError("composition: level " + std::to_string(levels_[i]) +
                              " is not a positive odd multiple of delta");
        if (i > 0 && levels_[i] <= levels_[i - 1])
            throw ConfigError("composition: levels must be strictly increasing");
    }
    n_ = std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
    if (n_ == 0) throw ConfigError("composition: blocklength must be positive");
}

std::vector<double> Composition::pmf() const {
    std::vector<double> p(counts_.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = static_cast<double>(counts_[i]) / static_cast<double>(n_);
    return p;
}

std::size_t Composition::support_size() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(counts_.begin(), counts_.end(), [](std::size_t c) { return c > 0; }));
}

std::vector<std::size_t> quantize_pmf(std::span<const double> pmf, std::size_t n) {
    if (pmf.empty()) throw ConfigError("quantize_pmf: empty PMF");
    if (n == 0) throw ConfigError("quantize_pmf: n must be positive");
    double total = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("quantize_pmf: negative or non-finite probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("quantize_pmf: probabilities do not sum to 1");

    std::vector<std::size_t> counts(pmf.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        const double exact = pmf[i] / total * static_cast<double>(n);
        // Snap values within rounding noise of an integer (0.3 * 10 = 2.9999999999999996).
        double whole = std::floor(exact + 1e-9);
        counts[i] = static_cast<std::size_t>(whole);
        assigned += counts[i];
        remainders.emplace_back(std::max(0.0, exact - whole), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) counts[remainders[k % remainders.size()].second] += 1;
    return counts;
}

Composition composition_from_pmf(std::vector<int> levels, std::span<const double> pmf, std::size_t n) {
    if (levels.size() != pmf.size()) throw ConfigError("composition_from_pmf: levels/pmf size mismatch");
    return Composition(std::move(levels), quantize_pmf(pmf, n));
}

Composition ps64_composition(std::size_t n) {
    const double pmf[] = {0.4, 0.3, 0.2, 0.1};
    return composition_from_pmf({1, 3, 5, 7}, pmf, n);
}

// ---------------------------------------------------------------------------
// Moments

MomentSet MomentSet::scaled(double c) const noexcept {
    const double c2 = c * c;
    const double c4 = c2 * c2;
    MomentSet m = *this;
    m.e_a2 *= c2;
    m.e_a4 *= c4;
    m.e_x2 *= c2;
    m.e_x4 *= c4;
    m.var_x2 *= c4;
    return m;
}

MomentSet MomentSet::normalized() const {
    if (!(e_x2 > 0.0)) throw InvalidInputError("cannot normalize a zero-power moment set");
    MomentSet m = scaled(1.0 / std::sqrt(e_x2));
    m.e_x2 = 1.0;  // exact by construction
    return m;
}

MomentSet moments_from_composition(const Composition& comp, const AmplitudeAlphabet& alphabet) {
    __extension__ using i128 = __int128;
    i128 s2 = 0;  // Σ m² n_a
    i128 s4 = 0;  // Σ m⁴ n_a
    for (std::size_t i = 0; i < comp.num_levels(); ++i) {
        const std::size_t count = comp.counts()[i];
        if (count == 0) continue;
        const int m = comp.levels()[i];
        if (!alphabet.index_of(m))
            throw ConfigError("composition level " + std::to_string(m) + " is not in the amplitude alphabet");
        const i128 m2 = static_cast<i128>(m) * m;
        s2 += m2 * static_cast<i128>(count);
        s4 += m2 * m2 * static_cast<i128>(count);
    }
    const auto n = static_cast<long double>(comp.blocklength());
    const auto d2 = static_cast<long double>(alphabet.delta()) * alphabet.delta();
    const auto S2 = static_cast<long double>(s2);
    const auto S4 = static_cast<long double>(s4);

    MomentSet m;
    m.e_a2 = static_cast<double>(d2 * S2 / n);
    m.e_a4 = static_cast<double>(d2 * d2 * S4 / n);
    m.e_x2 = static_cast<double>(2.0L * d2 * S2 / n);
    m.e_x4 = static_cast<double>(2.0L * d2 * d2 * (S4 * n + S2 * S2) / (n * n));
    // Var[|X|^2] = 2(E[A^4] - E[A^2]^2) = 2Δ⁴(n·s4 - s2²)/n², which is zero iff a single level is used.
    const i128 spread = s4 * static_cast<i128>(comp.blocklength()) - s2 * s2;
    m.var_x2 = static_cast<double>(2.0L * d2 * d2 * static_cast<long double>(spread) / (n * n));
    // Φ = (n·s4 + s2²) / (2 s2²): independent of Δ.
    m.kurtosis = static_cast<double>((S4 * n + S2 * S2) / (2.0L * S2 * S2));
    return m;
}

double papr_from_composition(const Composition& comp, const AmplitudeAlphabet& alphabet) {
    const MomentSet m = moments_from_composition(comp, alphabet);
    int peak = 0;
    for (std::size_t i = 0; i < comp.num_levels(); ++i)
        if (comp.counts()[i] > 0) peak = std::max(peak, comp.levels()[i]);
    const double a = peak * alphabet.delta();
    return 2.0 * a * a / m.e_x2;
}

SymbolSequence normalize_to_unit_power(const SymbolSequence& seq, const MomentSet& moments) {
    if (!(moments.e_x2 > 0.0) || !std::isfinite(moments.e_x2))
        throw InvalidInputError("normalize_to_unit_power: analytical power must be positive");
    SymbolSequence out = seq;
    out.meta.normalized = true;
    if (moments.e_x2 == 1.0) return out;
    const double scale = 1.0 / std::sqrt(moments.e_x2);
    for (auto& x : out.symbols) x *= scale;
    return out;
}

// ---------------------------------------------------------------------------
// Config I/O

ShapingSpec parse_shaping_spec(const json& j) {
    try {
        auto levels = j.at("levels").get<std::vector<int>>();
        const double delta = j.value("delta", 1.0);
        std::vector<int> alphabet_levels = levels;
        if (j.contains("alphabet")) alphabet_levels = j.at("alphabet").get<std::vector<int>>();
        AmplitudeAlphabet alphabet(alphabet_levels, delta);

        if (j.contains("counts")) {
            auto counts = j.at("counts").get<std::vector<std::size_t>>();
            if (j.contains("n") && j.at("n").get<std::size_t>() !=
                                       std::accumulate(counts.begin(), counts.end(), std::size_t{0}))
                throw ConfigError("shaping spec: \"n\" disagrees with the sum of \"counts\"");
            return {std::move(alphabet), Composition(std::move(levels), std::move(counts))};
        }
        if (j.contains("pmf")) {
            const auto pmf = j.at("pmf").get<std::vector<double>>();
            const auto n = j.at("n").get<std::size_t>();
            return {std::move(alphabet), composition_from_pmf(std::move(levels), pmf, n)};
        }
        throw ConfigError("shaping spec needs \"counts\" or \"pmf\" + \"n\"");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("shaping spec: ") + e.what());
    }
}

ShapingSpec load_shaping_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open shaping config");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path, e.what());
    }
    return parse_shaping_spec(j);
}

json to_json(const ShapingSpec& spec) {
    json j;
    j["levels"] = spec.composition.levels();
    j["counts"] = spec.composition.counts();
    j["delta"] = spec.alphabet.delta();
    if (spec.alphabet.multipliers() != spec.composition.levels()) j["alphabet"] = spec.alphabet.multipliers();
    return j;
}

}  // namespace edi
