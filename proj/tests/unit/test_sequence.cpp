#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <filesystem>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "edi/error.hpp"
#include "edi/metrics.hpp"
#include "edi/sequence.hpp"

using namespace edi;

namespace {

const ShapingSpec kPs64{AmplitudeAlphabet::pam(4), ps64_composition(10)};

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("edi_test_" + name)).string();
}

}  // namespace

TEST(Pas, EnergiesAreSignInvariant) {
    const std::vector<double> i{1, 3, 5, 7, 1, 1};
    const std::vector<double> q{7, 5, 3, 1, 3, 1};
    const auto a = assemble_pas(i, q, 1);
    const auto b = assemble_pas(i, q, 2);
    ASSERT_NE(a.symbols, b.symbols);
    for (std::size_t k = 0; k < i.size(); ++k) {
        EXPECT_EQ(std::norm(a.symbols[k]), i[k] * i[k] + q[k] * q[k]);
        EXPECT_EQ(std::norm(a.symbols[k]), std::norm(b.symbols[k]));
        EXPECT_EQ(std::abs(a.symbols[k].real()), i[k]);
    }
    EXPECT_THROW(assemble_pas(i, std::vector<double>{1.0}, 1), InvalidInputError);
}

TEST(Pas, BlockEnergyIsConstant) {
    const ShapingSpec spec{AmplitudeAlphabet::pam(2), Composition({1, 3}, {3, 1})};
    const auto seq = generate_ccdm_qam(spec, 1000, 4, ShaperKind::ccdm_emulated, false);
    ASSERT_EQ(seq.size(), 4000u);
    for (std::size_t b = 0; b < 1000; ++b) {
        double e = 0;
        for (std::size_t k = 0; k < 4; ++k) e += std::norm(seq.symbols[b * 4 + k]);
        ASSERT_EQ(e, 24.0);
    }
}

TEST(Pas, InphaseAndQuadratureAreIndependent) {
    const auto seq = generate_ccdm_qam(kPs64, 100000, 17, ShaperKind::ccdm_emulated, false);
    const double n = double(seq.size());
    double si = 0, sq = 0, siq = 0, si2 = 0, sq2 = 0;
    for (auto x : seq.symbols) {
        const double a = x.real() * x.real(), b = x.imag() * x.imag();
        si += a;
        sq += b;
        siq += a * b;
        si2 += a * a;
        sq2 += b * b;
    }
    const double cov = siq / n - (si / n) * (sq / n);
    const double sd = std::sqrt((si2 / n - si * si / n / n) * (sq2 / n - sq * sq / n / n) / n);
    EXPECT_LT(std::abs(cov), 3 * sd);
}

TEST(Generate, MetadataAndDeterminism) {
    const auto a = generate_ccdm_qam(kPs64, 20, 5);
    const auto b = generate_ccdm_qam(kPs64, 20, 5);
    EXPECT_EQ(a.symbols, b.symbols);
    EXPECT_EQ(a.meta.shaper, "ccdm-emulated");
    EXPECT_EQ(a.meta.blocklength, 10u);
    EXPECT_TRUE(a.meta.normalized);
    EXPECT_EQ(a.size() % 10, 0u);
    const auto c = generate_ccdm_qam(kPs64, 20, 5, ShaperKind::ccdm_exact);
    EXPECT_EQ(c.meta.shaper, "ccdm-exact");
}

TEST(Generate, FirstOrderStationarityChiSquare) {
    // Position-wise energy histograms of emulated CCDM blocks are homogeneous.
    const auto seq = generate_ccdm_qam(kPs64, 100000, 31, ShaperKind::ccdm_emulated, false);
    std::map<int, std::size_t> index;
    for (int a : {1, 3, 5, 7})
        for (int b : {1, 3, 5, 7}) index.emplace(a * a + b * b, 0);
    std::size_t k = 0;
    for (auto& [e, i] : index) i = k++;
    const std::size_t cats = index.size();
    std::vector<std::vector<double>> obs(10, std::vector<double>(cats, 0.0));
    for (std::size_t t = 0; t < seq.size(); ++t) obs[t % 10][index.at(int(std::lround(std::norm(seq.symbols[t]))))] += 1;
    std::vector<double> col(cats, 0.0);
    for (const auto& row : obs)
        for (std::size_t c = 0; c < cats; ++c) col[c] += row[c];
    const double total = double(seq.size());
    double stat = 0;
    std::size_t used = 0;
    for (std::size_t c = 0; c < cats; ++c) {
        if (col[c] == 0) continue;
        ++used;
        for (const auto& row : obs) {
            const double rowsum = total / 10;
            const double expect = rowsum * col[c] / total;
            stat += (row[c] - expect) * (row[c] - expect) / expect;
        }
    }
    const boost::math::chi_squared dist(double((10 - 1) * (used - 1)));
    EXPECT_LT(stat, boost::math::quantile(dist, 0.999));
}

TEST(Interleave, PreservesMultisetAndEnergyHistogram) {
    const auto seq = generate_ccdm_qam(kPs64, 1000, 2);
    const auto il = interleave(seq, 99);
    EXPECT_TRUE(il.meta.interleaved);
    EXPECT_NE(il.symbols, seq.symbols);
    auto key = [](Complex a, Complex b) { return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag()); };
    auto x = seq.symbols, y = il.symbols;
    std::sort(x.begin(), x.end(), key);
    std::sort(y.begin(), y.end(), key);
    EXPECT_EQ(x, y);
    std::vector<std::size_t> id(seq.size());
    std::iota(id.begin(), id.end(), 0);
    EXPECT_EQ(apply_permutation(seq, id).symbols, seq.symbols);
}

TEST(Interleave, RemovesEnergyCorrelation) {
    const auto seq = interleave(generate_ccdm_qam(kPs64, 100000, 3), 4);
    const auto p = empirical_autocorr(energies(seq), 20);
    for (std::size_t t = 1; t <= 20; ++t) EXPECT_NEAR(p[t], 1.0, 0.01);
}

TEST(Baseline, QpskAndUniform64) {
    const auto q = generate_baseline(Baseline::qpsk(), 100000, 1);
    EXPECT_EQ(q.meta.shaper, "qpsk");
    EXPECT_NEAR(kurtosis_estimate(q.symbols), 1.0, 1e-12);
    EXPECT_NEAR(run_ratio(q.symbols), 0.75, 0.01);
    const auto u = generate_baseline(Baseline::uniform_qam(64), 400000, 2);
    EXPECT_NEAR(kurtosis_estimate(u.symbols), 2436.0 / 1764.0, 0.005);
    EXPECT_NEAR(run_ratio(u.symbols), 63.0 / 64.0, 0.002);
    EXPECT_NEAR(papr_estimate(u.symbols), 98.0 / 42.0, 0.01);
    EXPECT_THROW(generate_baseline(Baseline::uniform_qam(32), 10, 1), ConfigError);
    EXPECT_EQ(Baseline::parse("uniform-qam-64").order, 64u);
    EXPECT_EQ(Baseline::parse("qpsk").kind, Baseline::Kind::qpsk);
    EXPECT_THROW(Baseline::parse("8psk"), ConfigError);
}

TEST(Files, BinaryRoundTripWithSidecar) {
    auto seq = generate_ccdm_qam(kPs64, 50, 8);
    seq = interleave(seq, 1);
    const auto path = temp_path("seq.bin");
    write_sequence(path, seq);
    EXPECT_TRUE(std::filesystem::exists(path + ".json"));
    EXPECT_EQ(std::filesystem::file_size(path), seq.size() * 16);
    const auto back = read_sequence(path);
    EXPECT_EQ(back.symbols, seq.symbols);
    EXPECT_EQ(back.meta, seq.meta);
    EXPECT_THROW(read_sequence(temp_path("missing.bin")), IoError);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".json");
}

TEST(Files, CodewordCsv) {
    const auto cws = sample_emulated(ps64_composition(10), 3, 20);
    const auto path = temp_path("cw.csv");
    write_codewords_csv(path, cws);
    EXPECT_EQ(read_codewords_csv(path), cws);
    EXPECT_EQ(codeword_from_csv("1,3,5").levels, (std::vector<int>{1, 3, 5}));
    EXPECT_THROW(codeword_from_csv("1,x"), InvalidInputError);
    std::filesystem::remove(path);
}
