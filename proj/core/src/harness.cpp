#include "edi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "edi/error.hpp"
#include "edi/rng.hpp"

namespace edi {

namespace {

using ld = long double;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

std::uint64_t noise_seed(const SweepOptions& opt, std::size_t run) {
    return derive_seed(derive_seed(opt.seed, "noise"), run);
}

Composition composition_for(const ShapingSpec& shaping, std::size_t n) {
    if (shaping.composition.blocklength() == n) return shaping.composition;
    const auto pmf = shaping.composition.pmf();
    return composition_from_pmf(shaping.composition.levels(), pmf, n);
}

SymbolSequence shaped_sequence(const ShapingSpec& shaping, std::size_t n, std::uint64_t seed, std::size_t symbols,
                               ShaperKind kind) {
    const ShapingSpec spec{shaping.alphabet, composition_for(shaping, n)};
    const std::size_t blocks = (symbols + n - 1) / n;
    SymbolSequence seq = generate_ccdm_qam(spec, blocks, seed, kind, true);
    seq.symbols.resize(symbols);
    return seq;
}

SymbolSequence neighbor_sequence(const ShapingSpec& shaping, std::size_t n, std::size_t channel, std::size_t run,
                                 const SweepOptions& opt) {
    const std::uint64_t s = derive_seed(derive_seed(derive_seed(opt.seed, "neighbor"), channel), run);
    if (opt.neighbors == NeighborLoading::uniform_qam64)
        return generate_baseline(Baseline::uniform_qam(64), opt.symbols, s);
    return shaped_sequence(shaping, n, derive_seed(s, n), opt.symbols, opt.shaper);
}

std::vector<SymbolSequence> channels_for(const ShapingSpec& shaping, std::size_t n, std::size_t run,
                                         const LinkConfig& cfg, const SweepOptions& opt) {
    std::vector<SymbolSequence> chans;
    chans.reserve(cfg.wdm_channels);
    const std::size_t center = cfg.wdm_channels / 2;
    for (std::size_t ch = 0; ch < cfg.wdm_channels; ++ch) {
        if (ch == center)
            chans.push_back(sweep_sequence(shaping, n, run, opt));
        else
            chans.push_back(neighbor_sequence(shaping, n, ch, run, opt));
    }
    return chans;
}

/// Runs fn(job) for job in [0, jobs) on up to `threads` workers.
void run_jobs(std::size_t jobs, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, jobs));
    if (threads == 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t j = next++; j < jobs; j = next++) {
                try {
                    fn(j);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::string to_string(ShaperKind k) { return k == ShaperKind::ccdm_exact ? "ccdm-exact" : "ccdm-emulated"; }

ShaperKind parse_shaper(const std::string& s) {
    if (s == "ccdm-emulated" || s == "emulated") return ShaperKind::ccdm_emulated;
    if (s == "ccdm-exact" || s == "exact") return ShaperKind::ccdm_exact;
    throw ConfigError("unknown shaper '" + s + "'");
}

nlohmann::json sweep_identity(const ShapingSpec& shaping, std::span<const std::size_t> n_list, const LinkConfig& cfg,
                              const SweepOptions& opt) {
    return nlohmann::json{{"link", to_json(cfg)},
                          {"shaping", to_json(shaping)},
                          {"n_list", std::vector<std::size_t>(n_list.begin(), n_list.end())},
                          {"symbols", opt.symbols},
                          {"runs", opt.runs},
                          {"seed", opt.seed},
                          {"shaper", to_string(opt.shaper)},
                          {"neighbor_loading", to_string(opt.neighbors)}};
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidInputError("pearson: length mismatch");
    if (x.size() < 2) throw InvalidInputError("pearson: need at least two points");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw UndefinedCorrelationError("pearson: non-finite input");
    const auto n = static_cast<ld>(x.size());
    ld mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    ld sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const ld dx = x[i] - mx;
        const ld dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw UndefinedCorrelationError("pearson: zero variance input");
    const ld r = sxy / std::sqrt(sxx * syy);
    return static_cast<double>(std::clamp<ld>(r, -1, 1));
}

double ci95_half_width(std::span<const double> samples) {
    if (samples.size() < 2) return nan();
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const boost::math::students_t dist(n - 1.0);
    return boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n);
}

NeighborLoading parse_neighbor_loading(const std::string& s) {
    if (s == "uniform-qam-64" || s == "uniform") return NeighborLoading::uniform_qam64;
    if (s == "same") return NeighborLoading::same;
    throw ConfigError("unknown neighbor loading '" + s + "' (expected uniform-qam-64 or same)");
}

std::string to_string(NeighborLoading loading) {
    return loading == NeighborLoading::same ? "same" : "uniform-qam-64";
}

SymbolSequence sweep_sequence(const ShapingSpec& shaping, std::size_t n, std::size_t run, const SweepOptions& opt) {
    if (n == 0) throw ConfigError("blocklength must be >= 1");
    const std::uint64_t s = derive_seed(derive_seed(derive_seed(opt.seed, "center"), n), run);
    return shaped_sequence(shaping, n, s, opt.symbols, opt.shaper);
}

std::map<std::size_t, SweepReport> sweep_blocklength_grid(const ShapingSpec& shaping,
                                                          std::span<const std::size_t> n_list,
                                                          std::span<const std::size_t> w_grid,
                                                          const LinkConfig& cfg, const SweepOptions& opt) {
    if (n_list.empty()) throw ConfigError("sweep: n_list is empty");
    if (w_grid.empty()) throw ConfigError("sweep: w_grid is empty");
    if (opt.runs < 1) throw ConfigError("sweep: runs must be >= 1");
    cfg.validate();
    std::vector<WindowSpec> windows;
    for (auto w : w_grid) windows.emplace_back(w);

    std::vector<std::size_t> ns(n_list.begin(), n_list.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    const std::size_t jobs = ns.size() * opt.runs;
    std::vector<double> snr(jobs, nan());
    std::mutex progress_mutex;
    run_jobs(jobs, opt.threads, [&](std::size_t j) {
        const std::size_t n = ns[j / opt.runs];
        const std::size_t run = j % opt.runs;
        const auto chans = channels_for(shaping, n, run, cfg, opt);
        const auto res = propagate(chans, cfg, noise_seed(opt, run));
        snr[j] = effective_snr(res);
        if (opt.progress) {
            std::lock_guard lock(progress_mutex);
            std::ostringstream os;
            os << "n=" << n << " run=" << run << " snr_db=" << snr[j];
            opt.progress(os.str());
        }
    });

    SweepReport base;
    base.config_hash = config_hash(sweep_identity(shaping, ns, cfg, opt));
    for (std::size_t r = 0; r < opt.runs; ++r) base.seeds.push_back(noise_seed(opt, r));
    base.launch_power_dbm = cfg.launch_power_dbm;
    base.neighbor_loading = to_string(opt.neighbors);

    std::map<std::size_t, SweepReport> out;
    for (const auto& spec : windows) out.emplace(spec.w(), base);

    for (std::size_t i = 0; i < ns.size(); ++i) {
        const std::size_t n = ns[i];
        std::vector<double> run_snr(snr.begin() + static_cast<std::ptrdiff_t>(i * opt.runs),
                                    snr.begin() + static_cast<std::ptrdiff_t>((i + 1) * opt.runs));
        double mean = 0.0;
        for (double v : run_snr) mean += v;
        mean /= static_cast<double>(run_snr.size());
        const double ci = ci95_half_width(run_snr);

        std::vector<EnergySequence> tx_energy;
        for (std::size_t r = 0; r < opt.runs; ++r) tx_energy.push_back(energies(sweep_sequence(shaping, n, r, opt)));
        const MomentSet m =
            moments_from_composition(composition_for(shaping, n), shaping.alphabet).normalized();

        for (const auto& spec : windows) {
            SweepRow row;
            row.n = n;
            row.w = spec.w();
            row.psi_db_analytical = edi_analytical_ccdm(m, n, spec).psi_db;
            row.psi_db_empirical = edi_empirical_pooled(tx_energy, spec).psi_db;
            row.snr_db = mean;
            row.snr_ci95_db = ci;
            out.at(spec.w()).rows.push_back(row);
        }
    }

    for (auto& [w, rep] : out) {
        rep.w_star = w;
        try {
            rep.r_p = report_correlation(rep);
        } catch (const UndefinedCorrelationError&) {
            rep.r_p = nan();
        } catch (const InvalidInputError&) {
            rep.r_p = nan();  // a single blocklength has no correlation
        }
    }
    return out;
}

SweepReport sweep_blocklength(const ShapingSpec& shaping, std::span<const std::size_t> n_list,
                              const WindowSpec& spec, const LinkConfig& cfg, const SweepOptions& opt) {
    const std::size_t w = spec.w();
    auto all = sweep_blocklength_grid(shaping, n_list, std::span<const std::size_t>(&w, 1), cfg, opt);
    return all.at(w);
}

PowerScan optimize_launch_power(const ShapingSpec& shaping, std::size_t n, std::span<const double> power_grid_dbm,
                                const LinkConfig& cfg, const SweepOptions& opt) {
    if (power_grid_dbm.empty()) throw ConfigError("launch power grid is empty");
    PowerScan scan;
    const std::size_t jobs = power_grid_dbm.size() * opt.runs;
    std::vector<double> snr(jobs, nan());
    run_jobs(jobs, opt.threads, [&](std::size_t j) {
        LinkConfig c = cfg;
        c.launch_power_dbm = power_grid_dbm[j / opt.runs];
        const std::size_t run = j % opt.runs;
        snr[j] = effective_snr(propagate(channels_for(shaping, n, run, c, opt), c, noise_seed(opt, run)));
    });
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < power_grid_dbm.size(); ++p) {
        double mean = 0.0;
        for (std::size_t r = 0; r < opt.runs; ++r) mean += snr[p * opt.runs + r];
        mean /= static_cast<double>(opt.runs);
        scan.power_dbm.push_back(power_grid_dbm[p]);
        scan.snr_db.push_back(mean);
        if (mean > best) {
            best = mean;
            scan.best_power_dbm = power_grid_dbm[p];
        }
        if (opt.progress) {
            std::ostringstream os;
            os << "power=" << power_grid_dbm[p] << " dBm snr_db=" << mean;
            opt.progress(os.str());
        }
    }
    return scan;
}

double report_correlation(const SweepReport& report) {
    std::vector<double> psi, snr;
    for (const auto& r : report.rows) {
        psi.push_back(r.psi_db_empirical);
        snr.push_back(r.snr_db);
    }
    return pearson(psi, snr);
}

WStarResult find_w_star(const std::map<std::size_t, SweepReport>& by_w, std::span<const std::size_t> w_grid) {
    if (w_grid.empty()) throw ConfigError("find_w_star: w_grid is empty");
    WStarResult res;
    bool found = false;
    double best = -1.0;
    for (auto w : w_grid) {
        (void)WindowSpec{w};  // rejects odd W
        const auto it = by_w.find(w);
        if (it == by_w.end()) throw ConfigError("find_w_star: no sweep for W=" + std::to_string(w));
        double r;
        try {
            r = report_correlation(it->second);
        } catch (const UndefinedCorrelationError&) {
            continue;
        }
        const double a = std::abs(r);
        res.abs_rp[w] = a;
        if (!found || a > best || (a == best && w < res.w_star)) {
            best = a;
            res.w_star = w;
            found = true;
        }
    }
    if (!found) throw UndefinedCorrelationError("find_w_star: correlation is undefined for every W in the grid");
    return res;
}

// ---------------------------------------------------------------------------

std::vector<IidEdiEntry> iid_edi_table() {
    struct Src {
        const char* name;
        Composition comp;
    };
    const std::vector<Src> srcs = {
        {"ps-64qam", ps64_composition(10)},
        {"uniform-64qam", Composition({1, 3, 5, 7}, {1, 1, 1, 1})},
        {"qpsk", Composition({1}, {1})},
    };
    std::vector<IidEdiEntry> out;
    for (const auto& s : srcs) {
        const AmplitudeAlphabet alpha(s.comp.levels());
        const auto r = edi_iid(moments_from_composition(s.comp, alpha).normalized());
        out.push_back({s.name, r.psi, r.psi_db});
    }
    return out;
}

nlohmann::json ExperimentConfig::snapshot() const {
    nlohmann::json j{{"link", to_json(link)},
                     {"shaping", to_json(shaping)},
                     {"n_list", n_list},
                     {"w_grid", w_grid},
                     {"runs", options.runs},
                     {"symbols", options.symbols},
                     {"seed", options.seed},
                     {"shaper", to_string(options.shaper)},
                     {"neighbor_loading", to_string(options.neighbors)},
                     {"threads", options.threads},
                     {"output_dir", output_dir}};
    j["power_grid_dbm"] = power_grid_dbm;
    return j;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    static const char* known[] = {"link",  "shaping", "n_list",  "w_grid", "runs",           "symbols",
                                  "seed",  "shaper",  "threads", "power_grid_dbm", "neighbor_loading",
                                  "output_dir"};
    for (const auto& item : j.items())
        if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
            throw ConfigError("experiment config: unknown field '" + item.key() + "'");

    const std::filesystem::path base(base_dir);
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return (path.is_absolute() ? path : base / path).string();
    };

    try {
        ExperimentConfig c;
        if (!j.contains("link") || !j.contains("shaping") || !j.contains("n_list") || !j.contains("w_grid"))
            throw ConfigError("experiment config needs link, shaping, n_list and w_grid");
        const auto& link = j.at("link");
        c.link = link.is_string() ? load_link_config(resolve(link.get<std::string>())) : parse_link_config(link);
        const auto& shaping = j.at("shaping");
        c.shaping = shaping.is_string() ? load_shaping_spec(resolve(shaping.get<std::string>()))
                                        : parse_shaping_spec(shaping);
        c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
        c.w_grid = j.at("w_grid").get<std::vector<std::size_t>>();
        if (c.n_list.empty()) throw ConfigError("experiment config: n_list is empty");
        if (c.w_grid.empty()) throw ConfigError("experiment config: w_grid is empty");
        for (auto n : c.n_list)
            if (n == 0) throw ConfigError("experiment config: blocklengths must be >= 1");
        for (auto w : c.w_grid) (void)WindowSpec{w};
        c.options.runs = j.value("runs", c.options.runs);
        c.options.symbols = j.value("symbols", c.options.symbols);
        c.options.seed = j.value("seed", c.options.seed);
        c.options.threads = j.value("threads", c.options.threads);
        if (c.options.runs < 1) throw ConfigError("experiment config: runs must be >= 1");
        if (c.options.symbols < 1) throw ConfigError("experiment config: symbols must be >= 1");
        if (j.contains("shaper")) c.options.shaper = parse_shaper(j.at("shaper").get<std::string>());
        if (j.contains("neighbor_loading"))
            c.options.neighbors = parse_neighbor_loading(j.at("neighbor_loading").get<std::string>());
        if (j.contains("power_grid_dbm")) {
            const auto& g = j.at("power_grid_dbm");
            if (g.is_array()) {
                c.power_grid_dbm = g.get<std::vector<double>>();
            } else {
                const double start = g.at("start").get<double>();
                const double stop = g.at("stop").get<double>();
                const double step = g.value("step", 0.5);
                if (!(step > 0) || stop < start) throw ConfigError("experiment config: bad power grid");
                for (int k = 0; start + k * step <= stop + 1e-9; ++k) c.power_grid_dbm.push_back(start + k * step);
            }
        }
        c.output_dir = j.value("output_dir", c.output_dir);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open experiment config");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_experiment_config(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace edi
