#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edi/fiber.hpp"
#include "edi/metrics.hpp"
#include "edi/sequence.hpp"
#include "edi/shaping.hpp"

namespace edi {

/// Product-moment correlation. Throws InvalidInputError for mismatched or
/// too-short inputs and UndefinedCorrelationError if either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided 95% Student-t half-width of the mean; NaN for fewer than two samples.
double ci95_half_width(std::span<const double> samples);

struct SweepRow {
    std::size_t n = 0;
    std::size_t w = 0;
    double psi_db_analytical = 0.0;
    double psi_db_empirical = 0.0;
    double snr_db = 0.0;
    double snr_ci95_db = 0.0;

    bool operator==(const SweepRow&) const = default;
};

struct SweepReport {
    std::vector<SweepRow> rows;       ///< sorted by n
    double r_p = 0.0;                 ///< Pearson(psi_db_empirical, snr_db)
    std::size_t w_star = 0;
    std::string config_hash;
    std::vector<std::uint64_t> seeds; ///< per-run noise seeds
    double launch_power_dbm = 0.0;
    std::string neighbor_loading;
};

enum class NeighborLoading { uniform_qam64, same };

NeighborLoading parse_neighbor_loading(const std::string& s);
std::string to_string(NeighborLoading loading);

struct SweepOptions {
    std::size_t symbols = 1u << 15;   ///< per run and channel
    std::size_t runs = 3;
    std::uint64_t seed = 1;
    ShaperKind shaper = ShaperKind::ccdm_emulated;
    NeighborLoading neighbors = NeighborLoading::uniform_qam64;
    std::size_t threads = 1;          ///< concurrent propagation jobs
    /// Called after every simulated (n, run) with a short description.
    std::function<void(const std::string&)> progress;
};

/// Transmit sequence of the channel of interest for (n, run).
SymbolSequence sweep_sequence(const ShapingSpec& shaping, std::size_t n, std::size_t run, const SweepOptions& opt);

/// Simulates every n once per run and derives one report per window in w_grid
/// (the simulations do not depend on W).
std::map<std::size_t, SweepReport> sweep_blocklength_grid(const ShapingSpec& shaping,
                                                          std::span<const std::size_t> n_list,
                                                          std::span<const std::size_t> w_grid,
                                                          const LinkConfig& cfg, const SweepOptions& opt);

SweepReport sweep_blocklength(const ShapingSpec& shaping, std::span<const std::size_t> n_list,
                              const WindowSpec& spec, const LinkConfig& cfg, const SweepOptions& opt);

/// Mean effective SNR at each launch power for blocklength n; returns the best
/// power (first maximum in grid order).
struct PowerScan {
    std::vector<double> power_dbm;
    std::vector<double> snr_db;
    double best_power_dbm = 0.0;
};
PowerScan optimize_launch_power(const ShapingSpec& shaping, std::size_t n, std::span<const double> power_grid_dbm,
                                const LinkConfig& cfg, const SweepOptions& opt);

struct WStarResult {
    std::size_t w_star = 0;
    std::map<std::size_t, double> abs_rp;   ///< |r_p| per W; degenerate W are absent
};

/// Maximizes |r_p| over w_grid, ties toward the smaller W.
WStarResult find_w_star(const std::map<std::size_t, SweepReport>& by_w, std::span<const std::size_t> w_grid);

/// Recomputes r_p from the rows (throws UndefinedCorrelationError if degenerate).
double report_correlation(const SweepReport& report);

enum class ReportFormat { csv, json };

/// CSV columns: n,w,psi_db_analytical,psi_db_empirical,snr_db,snr_ci95_db.
void write_report_csv(std::ostream& out, const SweepReport& report);
nlohmann::json report_to_json(const SweepReport& report);
/// Rows only; the scalar fields of the returned report are default.
SweepReport parse_report_csv(std::istream& in);
SweepReport report_from_json(const nlohmann::json& j);
/// Throws InvalidInputError for an empty report and IoError on write failures.
void emit_report(const SweepReport& report, ReportFormat format, const std::string& path);

/// Rows of the i.i.d. EDI table (normalized constellations).
struct IidEdiEntry {
    std::string name;
    double psi = 0.0;
    double psi_db = 0.0;
};
std::vector<IidEdiEntry> iid_edi_table();

/// Everything `edi-lab sweep` needs. Paths inside are resolved relative to the
/// experiment file.
struct ExperimentConfig {
    LinkConfig link;
    ShapingSpec shaping{AmplitudeAlphabet::pam(4), ps64_composition(10)};
    std::vector<std::size_t> n_list;
    std::vector<std::size_t> w_grid;
    SweepOptions options;
    std::vector<double> power_grid_dbm;  ///< empty: use link.launch_power_dbm
    std::string output_dir = "edi-run";
    nlohmann::json snapshot() const;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace edi
