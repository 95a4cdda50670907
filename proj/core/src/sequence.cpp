#include "edi/sequence.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "edi/error.hpp"
#include "edi/rng.hpp"

namespace edi {

SymbolSequence assemble_pas(std::span<const double> i_amps, std::span<const double> q_amps,
                            std::uint64_t sign_seed) {
    if (i_amps.size() != q_amps.size())
        throw InvalidInputError("assemble_pas: I stream has " + std::to_string(i_amps.size()) +
                                " amplitudes, Q stream has " + std::to_string(q_amps.size()));
    SymbolSequence seq;
    seq.meta.seed = sign_seed;
    seq.symbols.resize(i_amps.size());
    Rng rng(sign_seed);
    std::uint64_t word = 0;
    for (std::size_t t = 0; t < i_amps.size(); ++t) {
        if (t % 32 == 0) word = rng.next();
        const double si = (word & 1) ? -1.0 : 1.0;
        const double sq = (word & 2) ? -1.0 : 1.0;
        word >>= 2;
        seq.symbols[t] = Complex(si * i_amps[t], sq * q_amps[t]);
    }
    return seq;
}

SymbolSequence generate_ccdm_qam(const ShapingSpec& spec, std::size_t blocks, std::uint64_t seed, ShaperKind kind,
                                 bool normalize) {
    const Composition& comp = spec.composition;
    const MomentSet moments = moments_from_composition(comp, spec.alphabet);

    std::vector<int> i_levels;
    std::vector<int> q_levels;
    if (kind == ShaperKind::ccdm_emulated) {
        i_levels = sample_emulated_levels(comp, derive_seed(seed, "I"), blocks);
        q_levels = sample_emulated_levels(comp, derive_seed(seed, "Q"), blocks);
    } else {
        const CcdmCodec codec(comp);
        i_levels = sample_exact_levels(codec, derive_seed(seed, "I"), blocks);
        q_levels = sample_exact_levels(codec, derive_seed(seed, "Q"), blocks);
    }

    const double delta = spec.alphabet.delta();
    std::vector<double> i_amps(i_levels.size());
    std::vector<double> q_amps(q_levels.size());
    for (std::size_t t = 0; t < i_levels.size(); ++t) {
        i_amps[t] = i_levels[t] * delta;
        q_amps[t] = q_levels[t] * delta;
    }

    SymbolSequence seq = assemble_pas(i_amps, q_amps, derive_seed(seed, "signs"));
    seq.meta.shaper = kind == ShaperKind::ccdm_emulated ? "ccdm-emulated" : "ccdm-exact";
    seq.meta.blocklength = comp.blocklength();
    seq.meta.seed = seed;
    if (normalize) seq = normalize_to_unit_power(seq, moments);
    return seq;
}

std::vector<std::size_t> random_permutation(std::size_t size, std::uint64_t seed) {
    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = size; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

SymbolSequence apply_permutation(const SymbolSequence& seq, std::span<const std::size_t> perm) {
    if (perm.size() != seq.size()) throw InvalidInputError("permutation length differs from sequence length");
    SymbolSequence out;
    out.meta = seq.meta;
    out.symbols.resize(seq.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] >= seq.size()) throw InvalidInputError("permutation index out of range");
        out.symbols[i] = seq.symbols[perm[i]];
    }
    return out;
}

SymbolSequence interleave(const SymbolSequence& seq, std::uint64_t seed) {
    const auto perm = random_permutation(seq.size(), seed);
    SymbolSequence out = apply_permutation(seq, perm);
    out.meta.interleaved = true;
    return out;
}

Baseline Baseline::parse(const std::string& name) {
    if (name == "qpsk" || name == "QPSK") return qpsk();
    std::string digits;
    if (name.starts_with("uniform-qam-")) digits = name.substr(12);
    else if (name.ends_with("qam") || name.ends_with("QAM")) digits = name.substr(0, name.size() - 3);
    else throw ConfigError("unknown baseline constellation '" + name + "'");
    try {
        std::size_t used = 0;
        const auto m = std::stoul(digits, &used);
        if (used != digits.size()) throw ConfigError("");
        return uniform_qam(m);
    } catch (const std::exception&) {
        throw ConfigError("unknown baseline constellation '" + name + "'");
    }
}

std::string Baseline::name() const {
    return kind == Kind::qpsk ? std::string("qpsk") : "uniform-qam-" + std::to_string(order);
}

SymbolSequence generate_baseline(const Baseline& kind, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw InvalidInputError("generate_baseline: count must be >= 1");
    const std::size_t m = kind.kind == Baseline::Kind::qpsk ? 4 : kind.order;
    if (m != 4 && m != 16 && m != 64 && m != 256 && m != 1024)
        throw ConfigError("unsupported QAM order " + std::to_string(m));
    const auto side = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)) + 0.5);  // PAM levels per dimension
    const double power = 2.0 * static_cast<double>(side * side - 1) / 3.0;
    const double scale = 1.0 / std::sqrt(power);

    SymbolSequence seq;
    seq.meta.shaper = kind.name();
    seq.meta.seed = seed;
    seq.meta.normalized = true;
    seq.symbols.resize(count);
    Rng rng(seed);
    for (auto& x : seq.symbols) {
        const auto re = static_cast<double>(2 * rng.below(side)) - static_cast<double>(side - 1);
        const auto im = static_cast<double>(2 * rng.below(side)) - static_cast<double>(side - 1);
        x = Complex(re * scale, im * scale);
    }
    return seq;
}

}  // namespace edi
