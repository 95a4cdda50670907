#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edi/error.hpp"
#include "edi/harness.hpp"

using namespace edi;

namespace {

const ShapingSpec kPs64{AmplitudeAlphabet::pam(4), ps64_composition(10)};

LinkConfig tiny_link() {
    LinkConfig c;
    c.wdm_channels = 1;
    c.samples_per_symbol = 4;
    c.span_length = 40;
    c.num_spans = 1;
    c.step_size = 4000;
    c.launch_power_dbm = 3;
    return c;
}

SweepReport synthetic(std::vector<double> psi, std::vector<double> snr, std::size_t w = 10) {
    SweepReport r;
    for (std::size_t i = 0; i < psi.size(); ++i)
        r.rows.push_back({std::size_t(10) << i, w, psi[i] - 0.1, psi[i], snr[i], 0.05});
    r.config_hash = "0123456789abcdef";
    r.seeds = {1, 2, 3};
    r.w_star = w;
    r.neighbor_loading = "uniform-qam-64";
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("edi_harness_" + name)).string();
}

}  // namespace

TEST(Pearson, PerfectAndDegenerate) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y, z;
    for (double v : x) {
        y.push_back(2 * v + 1);
        z.push_back(-v);
    }
    EXPECT_NEAR(pearson(x, y), 1.0, 1e-15);
    EXPECT_NEAR(pearson(x, z), -1.0, 1e-15);
    EXPECT_THROW(pearson(x, std::vector<double>(5, 3.0)), UndefinedCorrelationError);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{2}), InvalidInputError);
    EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), InvalidInputError);
    const std::vector<double> inf{1, 2, -std::numeric_limits<double>::infinity(), 4, 5};
    EXPECT_THROW(pearson(inf, y), UndefinedCorrelationError);
}

TEST(Pearson, AffineInvariance) {
    const std::vector<double> x{-16.2, -6.6, -2.3, -1.9};
    const std::vector<double> y{25.07, 24.55, 24.39, 24.43};
    const double r = pearson(x, y);
    std::vector<double> xa, ya;
    for (double v : x) xa.push_back(3.5 * v - 7);
    for (double v : y) ya.push_back(0.2 * v + 100);
    EXPECT_NEAR(pearson(xa, ya), r, 1e-12);
    for (auto& v : xa) v = -v;
    EXPECT_NEAR(pearson(xa, ya), -r, 1e-12);
}

TEST(Ci95, StudentT) {
    const std::vector<double> s{1.0, 2.0, 3.0};
    // t_{0.975, 2} = 4.302653; sd = 1
    EXPECT_NEAR(ci95_half_width(s), 4.302653 / std::sqrt(3.0), 1e-5);
    EXPECT_TRUE(std::isnan(ci95_half_width(std::vector<double>{1.0})));
}

TEST(WStar, MaximizesAbsoluteCorrelationWithTies) {
    std::map<std::size_t, SweepReport> by_w;
    by_w[10] = synthetic({-10, -5, -2}, {25, 24.5, 24.4}, 10);
    by_w[20] = synthetic({-12, -6, -3}, {25, 24.5, 24.0}, 20);
    by_w[40] = synthetic({-12, -6, -3}, {25, 24.5, 24.0}, 40);  // same |r_p| as W=20
    by_w[80] = synthetic({-2, -2, -2}, {25, 24.5, 24.0}, 80);   // degenerate
    const std::vector<std::size_t> grid{80, 40, 10, 20};
    const auto res = find_w_star(by_w, grid);
    EXPECT_EQ(res.w_star, 20u);
    EXPECT_EQ(res.abs_rp.count(80), 0u);
    EXPECT_EQ(res.abs_rp.size(), 3u);
    EXPECT_NEAR(res.abs_rp.at(20), res.abs_rp.at(40), 1e-15);

    std::map<std::size_t, SweepReport> dead{{10, synthetic({1, 1}, {2, 3})}};
    EXPECT_THROW(find_w_star(dead, std::vector<std::size_t>{10}), UndefinedCorrelationError);
    EXPECT_THROW(find_w_star(by_w, std::vector<std::size_t>{}), ConfigError);
    EXPECT_THROW(find_w_star(by_w, std::vector<std::size_t>{12}), ConfigError);
}

TEST(Report, CsvRoundTrip) {
    auto rep = synthetic({-16.25, -6.6, -2.29, -1.9}, {25.07, 24.546, 24.38, 24.43});
    rep.rows[3].snr_ci95_db = std::numeric_limits<double>::quiet_NaN();
    rep.rows[0].psi_db_empirical = -std::numeric_limits<double>::infinity();
    std::stringstream ss;
    write_report_csv(ss, rep);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "n,w,psi_db_analytical,psi_db_empirical,snr_db,snr_ci95_db");
    const auto back = parse_report_csv(ss);
    ASSERT_EQ(back.rows.size(), rep.rows.size());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.rows[i], rep.rows[i]);
    EXPECT_TRUE(std::isnan(back.rows[3].snr_ci95_db));
    EXPECT_EQ(back.rows[0].psi_db_empirical, -std::numeric_limits<double>::infinity());
    std::stringstream bad("n,w\n1,2\n");
    EXPECT_THROW(parse_report_csv(bad), InvalidInputError);
}

TEST(Report, JsonRoundTripAndEmit) {
    auto rep = synthetic({-16.25, -6.6, -2.29}, {25.07, 24.546, 24.38});
    rep.r_p = report_correlation(rep);
    const auto back = report_from_json(nlohmann::json::parse(report_to_json(rep).dump()));
    EXPECT_EQ(back.rows, rep.rows);
    EXPECT_EQ(back.r_p, rep.r_p);
    EXPECT_EQ(back.config_hash, rep.config_hash);
    EXPECT_EQ(back.seeds, rep.seeds);

    const auto csv = temp_path("r.csv");
    emit_report(rep, ReportFormat::csv, csv);
    std::ifstream in(csv);
    EXPECT_EQ(parse_report_csv(in).rows, rep.rows);
    std::filesystem::remove(csv);

    EXPECT_THROW(emit_report(SweepReport{}, ReportFormat::csv, csv), InvalidInputError);
    try {
        emit_report(rep, ReportFormat::json, "/nonexistent/dir/r.json");
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.path(), "/nonexistent/dir/r.json");
    }
}

TEST(Report, IidTable) {
    const auto t = iid_edi_table();
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(std::round(t[0].psi_db * 100) / 100, -1.85);
    EXPECT_EQ(std::round(t[1].psi_db * 100) / 100, -4.19);
    EXPECT_EQ(t[2].psi_db, -std::numeric_limits<double>::infinity());
}

TEST(Sweep, SequencesAreTruncatedBlocks) {
    SweepOptions opt;
    opt.symbols = 1000;
    const auto s = sweep_sequence(kPs64, 300, 0, opt);
    EXPECT_EQ(s.size(), 1000u);
    EXPECT_EQ(s.meta.blocklength, 300u);
    EXPECT_NE(sweep_sequence(kPs64, 300, 1, opt).symbols, s.symbols);
    EXPECT_EQ(sweep_sequence(kPs64, 300, 0, opt).symbols, s.symbols);
}

TEST(Sweep, ReproducibleAndSorted) {
    SweepOptions opt;
    opt.symbols = 2048;
    opt.runs = 2;
    const std::vector<std::size_t> ns{100, 10, 1000};
    const std::vector<std::size_t> ws{20, 100};
    const auto a = sweep_blocklength_grid(kPs64, ns, ws, tiny_link(), opt);
    opt.threads = 2;
    const auto b = sweep_blocklength_grid(kPs64, ns, ws, tiny_link(), opt);
    ASSERT_EQ(a.size(), 2u);
    for (auto w : ws) {
        std::ostringstream sa, sb;
        write_report_csv(sa, a.at(w));
        write_report_csv(sb, b.at(w));
        EXPECT_EQ(sa.str(), sb.str());
        EXPECT_EQ(a.at(w).config_hash, b.at(w).config_hash);
        const auto& rows = a.at(w).rows;
        ASSERT_EQ(rows.size(), 3u);
        EXPECT_TRUE(rows[0].n < rows[1].n && rows[1].n < rows[2].n);
        EXPECT_LE(std::abs(a.at(w).r_p), 1.0);
        EXPECT_EQ(a.at(w).seeds.size(), 2u);
    }
    const auto single = sweep_blocklength(kPs64, ns, WindowSpec(20), tiny_link(), opt);
    EXPECT_EQ(single.rows, a.at(20).rows);
}

TEST(Sweep, LaunchPowerScanPicksMaximum) {
    SweepOptions opt;
    opt.symbols = 1024;
    opt.runs = 1;
    const std::vector<double> grid{-10, 0, 6, 14};
    const auto scan = optimize_launch_power(kPs64, 10, grid, tiny_link(), opt);
    ASSERT_EQ(scan.snr_db.size(), 4u);
    const auto best = std::max_element(scan.snr_db.begin(), scan.snr_db.end()) - scan.snr_db.begin();
    EXPECT_EQ(scan.best_power_dbm, grid[best]);
    EXPECT_THROW(optimize_launch_power(kPs64, 10, std::vector<double>{}, tiny_link(), opt), ConfigError);
}

TEST(Experiment, ParsesAndResolvesPaths) {
    const auto dir = std::filesystem::temp_directory_path() / "edi_exp_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "link.json") << to_json(tiny_link()).dump();
        std::ofstream(dir / "shaping.json") << R"({"levels":[1,3,5,7],"counts":[4,3,2,1]})";
    }
    const auto j = nlohmann::json::parse(R"({
        "link": "link.json", "shaping": "shaping.json",
        "n_list": [10, 100], "w_grid": [20, 50], "runs": 2, "seed": 9,
        "neighbor_loading": "same", "power_grid_dbm": {"start": -1, "stop": 1}
    })");
    const auto c = parse_experiment_config(j, dir.string());
    EXPECT_EQ(c.link.span_length, 40.0);
    EXPECT_EQ(c.shaping.composition, ps64_composition(10));
    EXPECT_EQ(c.options.runs, 2u);
    EXPECT_EQ(c.options.neighbors, NeighborLoading::same);
    EXPECT_EQ(c.power_grid_dbm, (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
    EXPECT_EQ(c.snapshot().at("seed"), 9);

    auto bad = j;
    bad["w_grid"] = {21};
    EXPECT_THROW(parse_experiment_config(bad, dir.string()), ConfigError);
    bad = j;
    bad["typo"] = 1;
    EXPECT_THROW(parse_experiment_config(bad, dir.string()), ConfigError);
    bad = j;
    bad.erase("n_list");
    EXPECT_THROW(parse_experiment_config(bad, dir.string()), ConfigError);
    std::filesystem::remove_all(dir);
}
