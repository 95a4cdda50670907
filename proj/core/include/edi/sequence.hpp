#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edi/ccdm.hpp"
#include "edi/shaping.hpp"
#include "edi/symbols.hpp"

namespace edi {

/// PAS with 1D mapping: X_i = (-1)^{S_I,i} A_I,i + j (-1)^{S_Q,i} A_Q,i with
/// i.i.d. uniform sign bits drawn from `sign_seed`.
SymbolSequence assemble_pas(std::span<const double> i_amps, std::span<const double> q_amps,
                            std::uint64_t sign_seed);

enum class ShaperKind { ccdm_emulated, ccdm_exact };

/// `blocks` CCDM blocks per dimension. I, Q and signs come from independent
/// sub-streams of `seed`; the I and Q block grids are aligned.
SymbolSequence generate_ccdm_qam(const ShapingSpec& spec, std::size_t blocks, std::uint64_t seed,
                                 ShaperKind kind = ShaperKind::ccdm_emulated, bool normalize = true);

/// Uniform random permutation of the symbol order.
SymbolSequence interleave(const SymbolSequence& seq, std::uint64_t seed);

std::vector<std::size_t> random_permutation(std::size_t size, std::uint64_t seed);
/// out[i] = seq[perm[i]]
SymbolSequence apply_permutation(const SymbolSequence& seq, std::span<const std::size_t> perm);

struct Baseline {
    enum class Kind { uniform_qam, qpsk };
    Kind kind = Kind::qpsk;
    std::size_t order = 4;  ///< constellation size M (4 for QPSK)

    static Baseline qpsk() { return {Kind::qpsk, 4}; }
    static Baseline uniform_qam(std::size_t m) { return {Kind::uniform_qam, m}; }
    /// "qpsk", "uniform-qam-64", "64qam"
    static Baseline parse(const std::string& name);
    std::string name() const;
};

/// i.i.d. uniform draws from a square QAM constellation, normalized to unit power.
/// Throws ConfigError unless M is 4, 16, 64, 256 or 1024.
SymbolSequence generate_baseline(const Baseline& kind, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Files

/// Raw little-endian (re, im) double pairs at `path` plus a JSON sidecar at `path + ".json"`.
void write_sequence(const std::string& path, const SymbolSequence& seq);
SymbolSequence read_sequence(const std::string& path);

/// "re,im" per line with a header row.
void write_sequence_csv(const std::string& path, const SymbolSequence& seq);

nlohmann::json to_json(const SequenceMeta& meta);
SequenceMeta sequence_meta_from_json(const nlohmann::json& j);

/// One codeword per line, levels comma separated.
void write_codewords_csv(const std::string& path, std::span<const AmplitudeCodeword> codewords);
std::vector<AmplitudeCodeword> read_codewords_csv(const std::string& path);
std::string codeword_to_csv(const AmplitudeCodeword& cw);
AmplitudeCodeword codeword_from_csv(const std::string& line);

}  // namespace edi
