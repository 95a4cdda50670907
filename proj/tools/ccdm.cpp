// ccdm: exact constant-composition encode/decode, emulated/exact block
// sampling and shaping-trellis dumps.

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "cli_common.hpp"
#include "edi/ccdm.hpp"
#include "edi/sequence.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Constant-composition distribution matcher"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::size_t> n;
    auto add_shaping = [&](CLI::App* sub) {
        sub->add_option("--config", config, "shaping JSON ({\"levels\":[...],\"counts\":[...]}); default PS-64QAM")
            ->check(CLI::ExistingFile);
        sub->add_option("--n", n, "blocklength (re-quantizes the PMF)")->check(CLI::PositiveNumber);
    };

    auto* info = app.add_subcommand("info", "codebook size and input bits");
    add_shaping(info);

    std::string hex;
    auto* encode = app.add_subcommand("encode", "map k input bits (hex, MSB first) to a codeword");
    add_shaping(encode);
    encode->add_option("--bits", hex, "exactly ceil(k/4) hex digits")->required();

    std::string line;
    auto* decode = app.add_subcommand("decode", "recover the input bits of a codeword");
    add_shaping(decode);
    decode->add_option("--codeword", line, "comma separated amplitude levels")->required();

    std::size_t blocks = 1;
    std::uint64_t seed = 0;
    std::string out;
    bool exact = false;
    auto* sample = app.add_subcommand("sample", "draw CCDM blocks into a codeword CSV");
    add_shaping(sample);
    sample->add_option("--blocks", blocks, "number of blocks")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "RNG seed")->required();
    sample->add_option("--out", out, "output CSV (one codeword per line)")->required();
    sample->add_flag("--exact", exact, "use the 2^k codebook instead of all permutations");

    std::size_t max_states = 1'000'000;
    auto* trellis = app.add_subcommand("trellis", "dump the shaping trellis as JSON");
    add_shaping(trellis);
    trellis->add_option("--out", out, "output file (stdout if omitted)");
    trellis->add_option("--max-states", max_states, "state-count guard");

    CLI11_PARSE(app, argc, argv);

    return edi::cli::guarded([&] {
        const edi::ShapingSpec spec = edi::cli::shaping_from(config, n);
        if (*info || *encode || *decode) {
            const edi::CcdmCodec codec(spec.composition);
            if (*info) {
                const nlohmann::json j{{"n", spec.composition.blocklength()},
                                       {"levels", spec.composition.levels()},
                                       {"counts", spec.composition.counts()},
                                       {"codebook_size", codec.codebook_size().str()},
                                       {"input_bits", codec.input_bits()}};
                std::cout << j.dump(2) << '\n';
            } else if (*encode) {
                const auto cw = codec.encode_bits(edi::bits_from_hex(hex, codec.input_bits()));
                std::cout << edi::codeword_to_csv(cw) << '\n';
            } else {
                std::cout << edi::bits_to_hex(codec.decode_bits(edi::codeword_from_csv(line))) << '\n';
            }
        } else if (*sample) {
            std::vector<edi::AmplitudeCodeword> cws;
            if (exact) {
                const edi::CcdmCodec codec(spec.composition);
                const auto levels = edi::sample_exact_levels(codec, seed, blocks);
                const std::size_t len = spec.composition.blocklength();
                for (std::size_t b = 0; b < blocks; ++b)
                    cws.push_back({std::vector<int>(levels.begin() + static_cast<std::ptrdiff_t>(b * len),
                                                    levels.begin() + static_cast<std::ptrdiff_t>((b + 1) * len))});
            } else {
                cws = edi::sample_emulated(spec.composition, seed, blocks);
            }
            edi::write_codewords_csv(out, cws);
        } else if (*trellis) {
            const auto t = edi::build_trellis(spec.composition, spec.alphabet, max_states);
            const std::string dump = edi::to_json(t).dump(2);
            if (out.empty()) {
                std::cout << dump << '\n';
            } else {
                std::ofstream f(out);
                if (!(f << dump << '\n')) throw edi::IoError(out, "write failed");
            }
        }
    });
}
