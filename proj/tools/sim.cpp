// sim: split-step WDM propagation of one symbol sequence (channel of
// interest) next to generated neighbor channels.

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "cli_common.hpp"
#include "edi/fiber.hpp"
#include "edi/rng.hpp"
#include "edi/sequence.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Scaled split-step fiber simulation"};
    app.require_subcommand(1);

    std::string config, seq_path, out, rx_out;
    std::uint64_t seed = 0;
    std::vector<std::string> neighbor_paths;
    auto* run = app.add_subcommand("run", "propagate and report the effective SNR as JSON");
    run->add_option("--config", config, "LinkConfig JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--seq", seq_path, "sequence file of the channel of interest")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "noise and neighbor seed")->required();
    run->add_option("--out", out, "result JSON (stdout if omitted)");
    run->add_option("--rx-out", rx_out, "also write the received symbols");
    run->add_option("--neighbor-seq", neighbor_paths,
                    "neighbor sequence files in channel order (default: uniform 64QAM from --seed)")
        ->check(CLI::ExistingFile);

    double distance = 0.0;
    std::string convention = "angular";
    auto* mem = app.add_subcommand("memory", "one-sided channel memory estimate M");
    mem->add_option("--config", config, "LinkConfig JSON")->required()->check(CLI::ExistingFile);
    mem->add_option("--distance-km", distance, "link length (default: span_length * num_spans)");
    mem->add_option("--convention", convention, "angular or ordinary")
        ->check(CLI::IsMember({"angular", "ordinary"}));

    CLI11_PARSE(app, argc, argv);

    return edi::cli::guarded([&] {
        const edi::LinkConfig cfg = edi::load_link_config(config);
        if (*mem) {
            const double km = distance > 0 ? distance : cfg.total_length_km();
            const auto conv = convention == "ordinary" ? edi::FrequencyConvention::ordinary
                                                       : edi::FrequencyConvention::angular;
            const auto m = edi::estimate_channel_memory(cfg, km, conv);
            std::cout << nlohmann::json{{"distance_km", km}, {"convention", convention}, {"M", m}, {"two_sided", 2 * m}}
                             .dump(2)
                      << '\n';
            return;
        }
        const auto coi = edi::read_sequence(seq_path);
        const std::size_t center = cfg.wdm_channels / 2;
        const std::size_t neighbors = cfg.wdm_channels - 1;
        if (!neighbor_paths.empty() && neighbor_paths.size() != neighbors)
            throw edi::ConfigError("expected " + std::to_string(neighbors) + " --neighbor-seq files");
        std::vector<edi::SymbolSequence> chans;
        std::vector<std::uint64_t> neighbor_seeds;
        for (std::size_t ch = 0, k = 0; ch < cfg.wdm_channels; ++ch) {
            if (ch == center) {
                chans.push_back(coi);
            } else if (!neighbor_paths.empty()) {
                chans.push_back(edi::read_sequence(neighbor_paths[k++]));
            } else {
                const auto s = edi::derive_seed(edi::derive_seed(seed, "neighbor"), ch);
                neighbor_seeds.push_back(s);
                chans.push_back(edi::generate_baseline(edi::Baseline::uniform_qam(64), coi.size(), s));
            }
        }
        const auto noise = edi::derive_seed(seed, "noise");
        const auto res = edi::propagate(chans, cfg, noise);
        const double snr = edi::effective_snr(res);
        const nlohmann::json cfg_json = edi::to_json(cfg);
        nlohmann::json j{{"snr_db", std::isfinite(snr) ? nlohmann::json(snr) : nlohmann::json("inf")},
                         {"analytic_ase_snr_db", edi::analytic_ase_snr_db(cfg)},
                         {"symbols", coi.size()},
                         {"config_hash", edi::config_hash(cfg_json)},
                         {"config", cfg_json},
                         {"seed", seed},
                         {"noise_seed", noise},
                         {"neighbor_seeds", neighbor_seeds},
                         {"neighbor_loading", neighbor_paths.empty() ? "uniform-qam-64" : "files"},
                         {"sequence", edi::to_json(coi.meta)}};
        if (!rx_out.empty()) edi::write_sequence(rx_out, res.rx_symbols);
        if (out.empty()) {
            std::cout << j.dump(2) << '\n';
        } else {
            std::ofstream f(out);
            if (!(f << j.dump(2) << '\n')) throw edi::IoError(out, "write failed");
        }
    });
}
