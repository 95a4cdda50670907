// edi-lab: blocklength sweeps with window optimization, sequence generation
// and the i.i.d. EDI table.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_common.hpp"
#include "edi/harness.hpp"

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!(f << text)) throw edi::IoError(p.string(), "write failed");
}

void sweep(const std::string& config_path, const std::string& out_override, bool quiet) {
    auto cfg = edi::load_experiment_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (!quiet) cfg.options.progress = [](const std::string& s) { std::cerr << "  " << s << '\n'; };

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_text(dir / "config.json", cfg.snapshot().dump(2) + "\n");

    edi::LinkConfig link = cfg.link;
    nlohmann::json summary;
    if (!cfg.power_grid_dbm.empty()) {
        const std::size_t n0 = *std::min_element(cfg.n_list.begin(), cfg.n_list.end());
        if (!quiet) std::cerr << "launch power scan at n=" << n0 << '\n';
        const auto scan = edi::optimize_launch_power(cfg.shaping, n0, cfg.power_grid_dbm, link, cfg.options);
        std::string csv = "power_dbm,snr_db\n";
        for (std::size_t i = 0; i < scan.power_dbm.size(); ++i)
            csv += g17(scan.power_dbm[i]) + "," + g17(scan.snr_db[i]) + "\n";
        write_text(dir / "power_scan.csv", csv);
        link.launch_power_dbm = scan.best_power_dbm;
        summary["power_scan_n"] = n0;
    }
    summary["launch_power_dbm"] = link.launch_power_dbm;

    if (!quiet) std::cerr << "blocklength sweep at " << link.launch_power_dbm << " dBm\n";
    const auto by_w = edi::sweep_blocklength_grid(cfg.shaping, cfg.n_list, cfg.w_grid, link, cfg.options);

    // All windows in one table.
    {
        std::ofstream f(dir / "sweep.csv");
        bool header = true;
        for (const auto& [w, rep] : by_w) {
            std::ostringstream os;
            edi::write_report_csv(os, rep);
            std::string text = os.str();
            if (!header) text.erase(0, text.find('\n') + 1);
            header = false;
            f << text;
        }
        if (!f) throw edi::IoError((dir / "sweep.csv").string(), "write failed");
    }

    nlohmann::json profile = nlohmann::json::object();
    try {
        const auto ws = edi::find_w_star(by_w, cfg.w_grid);
        for (const auto& [w, a] : ws.abs_rp) profile[std::to_string(w)] = a;
        auto best = by_w.at(ws.w_star);
        best.w_star = ws.w_star;
        edi::emit_report(best, edi::ReportFormat::csv, (dir / "report.csv").string());
        edi::emit_report(best, edi::ReportFormat::json, (dir / "report.json").string());
        summary["w_star"] = ws.w_star;
        summary["r_p"] = best.r_p;
        summary["config_hash"] = best.config_hash;
        std::cout << "w_star=" << ws.w_star << " r_p=" << g17(best.r_p) << '\n';
        for (const auto& row : best.rows)
            std::cout << "n=" << row.n << " psi_db=" << g17(row.psi_db_empirical) << " snr_db=" << g17(row.snr_db)
                      << " +/- " << g17(row.snr_ci95_db) << '\n';
    } catch (const edi::UndefinedCorrelationError& e) {
        summary["w_star"] = nullptr;
        std::cerr << "warning: " << e.what() << '\n';
    }
    summary["abs_rp_by_w"] = profile;
    write_text(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EDI experiment harness"};
    app.require_subcommand(1);

    std::string config, out;
    bool quiet = false;
    auto* sw = app.add_subcommand("sweep", "blocklength sweep, window search and reports");
    sw->add_option("--config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
    sw->add_option("--out", out, "run directory (overrides output_dir)");
    sw->add_flag("-q,--quiet", quiet, "no progress output");

    std::string kind = "ccdm";
    std::optional<std::size_t> n;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> interleave_seed;
    bool exact = false;
    bool csv = false;
    auto* gen = app.add_subcommand("generate", "write a normalized symbol sequence");
    gen->add_option("--kind", kind, "ccdm, qpsk or uniform-qam-<M>");
    gen->add_option("--config", config, "shaping JSON for ccdm; default PS-64QAM")->check(CLI::ExistingFile);
    gen->add_option("--n", n, "blocklength")->check(CLI::PositiveNumber);
    gen->add_option("--count", count, "number of symbols (ccdm: rounded up to whole blocks)")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_flag("--exact", exact, "exact 2^k codebook instead of emulated CCDM");
    gen->add_option("--interleave", interleave_seed, "apply a random symbol interleaver with this seed");
    gen->add_option("--out", out, "output file")->required();
    gen->add_flag("--csv", csv, "write re,im CSV instead of the binary format");

    auto* table = app.add_subcommand("table", "i.i.d. EDI of the reference constellations");

    CLI11_PARSE(app, argc, argv);

    return edi::cli::guarded([&] {
        if (*sw) {
            sweep(config, out, quiet);
        } else if (*gen) {
            edi::SymbolSequence seq;
            if (kind == "ccdm") {
                const auto spec = edi::cli::shaping_from(config, n);
                const std::size_t bl = spec.composition.blocklength();
                seq = edi::generate_ccdm_qam(spec, (count + bl - 1) / bl, seed,
                                             exact ? edi::ShaperKind::ccdm_exact : edi::ShaperKind::ccdm_emulated);
            } else {
                seq = edi::generate_baseline(edi::Baseline::parse(kind), count, seed);
            }
            if (interleave_seed) seq = edi::interleave(seq, *interleave_seed);
            if (csv)
                edi::write_sequence_csv(out, seq);
            else
                edi::write_sequence(out, seq);
        } else if (*table) {
            std::cout << "constellation,psi,psi_db\n";
            for (const auto& e : edi::iid_edi_table()) {
                char db[32];
                std::snprintf(db, sizeof db, "%.2f", e.psi_db);
                std::cout << e.name << ',' << g17(e.psi) << ',' << db << '\n';
            }
        }
    });
}
