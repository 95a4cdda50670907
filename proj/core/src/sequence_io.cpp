#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edi/error.hpp"
#include "edi/sequence.hpp"

namespace edi {

using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little, "sequence files are written in host order");

json to_json(const SequenceMeta& meta) {
    return json{{"shaper", meta.shaper},
                {"blocklength", meta.blocklength},
                {"seed", meta.seed},
                {"normalized", meta.normalized},
                {"interleaved", meta.interleaved}};
}

SequenceMeta sequence_meta_from_json(const json& j) {
    SequenceMeta m;
    m.shaper = j.value("shaper", m.shaper);
    m.blocklength = j.value("blocklength", m.blocklength);
    m.seed = j.value("seed", m.seed);
    m.normalized = j.value("normalized", m.normalized);
    m.interleaved = j.value("interleaved", m.interleaved);
    return m;
}

void write_sequence(const std::string& path, const SymbolSequence& seq) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError(path, "cannot open for writing");
        out.write(reinterpret_cast<const char*>(seq.symbols.data()),
                  static_cast<std::streamsize>(seq.symbols.size() * sizeof(Complex)));
        if (!out) throw IoError(path, "write failed");
    }
    const std::string sidecar = path + ".json";
    std::ofstream meta(sidecar);
    if (!meta) throw IoError(sidecar, "cannot open for writing");
    json j = to_json(seq.meta);
    j["count"] = seq.size();
    j["format"] = "complex128-le-interleaved";
    meta << j.dump(2) << '\n';
    if (!meta) throw IoError(sidecar, "write failed");
}

SymbolSequence read_sequence(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError(path, "cannot open sequence file");
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(Complex) != 0) throw IoError(path, "size is not a multiple of 16 bytes");
    SymbolSequence seq;
    seq.symbols.resize(bytes / sizeof(Complex));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(seq.symbols.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError(path, "read failed");

    const std::string sidecar = path + ".json";
    std::ifstream meta(sidecar);
    if (meta) {
        try {
            json j;
            meta >> j;
            seq.meta = sequence_meta_from_json(j);
            if (j.contains("count") && j["count"].get<std::size_t>() != seq.size())
                throw IoError(sidecar, "symbol count disagrees with " + path);
        } catch (const json::exception& e) {
            throw IoError(sidecar, e.what());
        }
    }
    return seq;
}

void write_sequence_csv(const std::string& path, const SymbolSequence& seq) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    out.precision(17);
    out << "re,im\n";
    for (const auto& x : seq.symbols) out << x.real() << ',' << x.imag() << '\n';
    if (!out) throw IoError(path, "write failed");
}

std::string codeword_to_csv(const AmplitudeCodeword& cw) {
    std::string line;
    for (std::size_t t = 0; t < cw.size(); ++t) {
        if (t) line += ',';
        line += std::to_string(cw.levels[t]);
    }
    return line;
}

AmplitudeCodeword codeword_from_csv(const std::string& line) {
    AmplitudeCodeword cw;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            cw.levels.push_back(std::stoi(cell, &used));
            if (used != cell.size() && cell.find_first_not_of(" \r", used) != std::string::npos)
                throw InvalidInputError("");
        } catch (const std::exception&) {
            throw InvalidInputError("bad amplitude level '" + cell + "'");
        }
    }
    return cw;
}

void write_codewords_csv(const std::string& path, std::span<const AmplitudeCodeword> codewords) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    for (const auto& cw : codewords) out << codeword_to_csv(cw) << '\n';
    if (!out) throw IoError(path, "write failed");
}

std::vector<AmplitudeCodeword> read_codewords_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open codeword file");
    std::vector<AmplitudeCodeword> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        out.push_back(codeword_from_csv(line));
    }
    return out;
}

}  // namespace edi
