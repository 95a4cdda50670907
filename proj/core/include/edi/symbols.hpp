#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace edi {

using Complex = std::complex<double>;

/// Provenance of a generated symbol sequence.
struct SequenceMeta {
    std::string shaper = "unknown";  ///< "ccdm-emulated", "ccdm-exact", "uniform-qam-64", "qpsk", ...
    std::size_t blocklength = 1;     ///< n for block-shaped sources, 1 otherwise
    std::uint64_t seed = 0;
    bool normalized = false;         ///< analytical E[|X|^2] == 1
    bool interleaved = false;

    bool operator==(const SequenceMeta&) const = default;
};

struct SymbolSequence {
    std::vector<Complex> symbols;
    SequenceMeta meta;

    std::size_t size() const noexcept { return symbols.size(); }
    bool empty() const noexcept { return symbols.empty(); }
};

/// Per-symbol energies |x_i|^2.
struct EnergySequence {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
};

EnergySequence energies(std::span<const Complex> symbols);
inline EnergySequence energies(const SymbolSequence& seq) { return energies(seq.symbols); }

}  // namespace edi
