// metrics: EDI, windowed-energy histograms, autocorrelation profiles and
// constellation statistics, analytically or from a sequence file.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "cli_common.hpp"
#include "edi/metrics.hpp"
#include "edi/sequence.hpp"

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy statistics of shaped symbol sequences"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::size_t> n;
    std::size_t w = 0;
    std::string from;
    bool analytical = false;
    bool linear = false;

    auto* edi_cmd = app.add_subcommand("edi", "energy dispersion index, CSV n,w,psi,psi_db,source");
    edi_cmd->add_option("--config", config, "shaping JSON; default PS-64QAM")->check(CLI::ExistingFile);
    edi_cmd->add_option("--n", n, "blocklength")->check(CLI::PositiveNumber);
    edi_cmd->add_option("--w", w, "window parameter W (even)")->required();
    auto* a_flag = edi_cmd->add_flag("--analytical", analytical, "closed form for CCDM sequences");
    auto* f_opt = edi_cmd->add_option("--from", from, "estimate from a sequence file")->check(CLI::ExistingFile);
    edi_cmd->add_flag("--linear", linear, "also print the linear-regime form (needs n <= W+2)");
    a_flag->excludes(f_opt);

    std::size_t bins = 50;
    std::string out;
    auto* hist = app.add_subcommand("hist", "histogram of windowed energies, CSV bin_lo,bin_hi,freq");
    hist->add_option("--from", from, "sequence file")->required()->check(CLI::ExistingFile);
    hist->add_option("--w", w, "window parameter W (even)")->required();
    hist->add_option("--bins", bins, "number of bins");
    hist->add_option("--out", out, "output CSV (stdout if omitted)");

    auto* stats = app.add_subcommand("stats", "kurtosis, PAPR and run ratio of a sequence");
    stats->add_option("--from", from, "sequence file")->required()->check(CLI::ExistingFile);

    std::optional<std::size_t> tau_max;
    auto* ac = app.add_subcommand("autocorr", "average energy autocorrelation, CSV tau,r,source");
    ac->add_option("--config", config, "shaping JSON; default PS-64QAM")->check(CLI::ExistingFile);
    ac->add_option("--n", n, "blocklength")->check(CLI::PositiveNumber);
    ac->add_option("--tau-max", tau_max, "largest delay (default 2n)");
    auto* ac_a = ac->add_flag("--analytical", analytical, "closed form");
    auto* ac_f = ac->add_option("--from", from, "estimate from a sequence file")->check(CLI::ExistingFile);
    ac_a->excludes(ac_f);

    CLI11_PARSE(app, argc, argv);

    return edi::cli::guarded([&] {
        if (*edi_cmd) {
            const edi::WindowSpec spec(w);
            std::cout << "n,w,psi,psi_db,source\n";
            auto row = [&](const std::string& nn, const edi::EdiResult& r, const char* src) {
                std::cout << nn << ',' << w << ',' << g17(r.psi) << ',' << g17(r.psi_db) << ',' << src << '\n';
            };
            if (!from.empty()) {
                const auto seq = edi::read_sequence(from);
                const auto r = edi::edi_empirical(edi::energies(seq), spec);
                row(std::to_string(seq.meta.blocklength), r, "empirical");
                return;
            }
            if (!analytical) throw edi::ConfigError("metrics edi: pass --analytical or --from <file>");
            const auto shaping = edi::cli::shaping_from(config, n);
            const std::size_t bl = shaping.composition.blocklength();
            const auto m = edi::moments_from_composition(shaping.composition, shaping.alphabet).normalized();
            row(std::to_string(bl), edi::edi_analytical_ccdm(m, bl, spec), "analytical");
            if (linear) row(std::to_string(bl), edi::edi_linear(m, bl, spec), "linear");
            row("iid", edi::edi_iid(m), "iid");
        } else if (*hist) {
            const auto seq = edi::read_sequence(from);
            const auto h = edi::windowed_energy_histogram(edi::energies(seq), edi::WindowSpec(w), bins);
            if (out.empty()) {
                edi::write_histogram_csv(std::cout, h);
            } else {
                std::ofstream f(out);
                if (!f) throw edi::IoError(out, "cannot open for writing");
                edi::write_histogram_csv(f, h);
                if (!f) throw edi::IoError(out, "write failed");
            }
        } else if (*stats) {
            const auto seq = edi::read_sequence(from);
            std::cout << "symbols," << seq.size() << '\n'
                      << "kurtosis," << g17(edi::kurtosis_estimate(seq.symbols)) << '\n'
                      << "papr," << g17(edi::papr_estimate(seq.symbols)) << '\n'
                      << "run_ratio," << g17(edi::run_ratio(seq.symbols)) << '\n';
        } else if (*ac) {
            edi::AutocorrProfile p;
            const char* src = "empirical";
            if (!from.empty()) {
                const auto seq = edi::read_sequence(from);
                p = edi::empirical_autocorr(edi::energies(seq), tau_max.value_or(2 * seq.meta.blocklength));
            } else {
                if (!analytical) throw edi::ConfigError("metrics autocorr: pass --analytical or --from <file>");
                const auto shaping = edi::cli::shaping_from(config, n);
                const std::size_t bl = shaping.composition.blocklength();
                const auto m = edi::moments_from_composition(shaping.composition, shaping.alphabet).normalized();
                p = edi::analytical_autocorr_profile(m, bl, tau_max.value_or(2 * bl));
                src = "analytical";
            }
            std::cout << "tau,r,source\n";
            for (std::size_t t = 0; t <= p.tau_max(); ++t) std::cout << t << ',' << g17(p[t]) << ',' << src << '\n';
        }
    });
}
