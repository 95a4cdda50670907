#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "edi/error.hpp"
#include "edi/fiber.hpp"
#include "edi/rng.hpp"
#include "edi/sequence.hpp"

using namespace edi;

namespace {

/// Small, fast link: one channel, 20 km, coarse steps.
LinkConfig small_link() {
    LinkConfig c;
    c.wdm_channels = 1;
    c.samples_per_symbol = 4;
    c.span_length = 20;
    c.num_spans = 2;
    c.step_size = 2000;
    return c;
}

std::vector<SymbolSequence> one_channel(std::size_t count, std::uint64_t seed) {
    return {generate_baseline(Baseline::uniform_qam(64), count, seed)};
}

double evm_db(const PropagationResult& r) { return -effective_snr(r); }

}  // namespace

TEST(LinkConfig, DerivedQuantities) {
    LinkConfig c;
    EXPECT_NEAR(c.beta2() * 1e27, -21.68, 0.01);  // ps²/km
    EXPECT_NEAR(c.alpha() * 1e3, 0.2 * std::log(10.0) / 10.0, 1e-12);
    EXPECT_NEAR(c.launch_power_w(), 1e-3, 1e-15);
    EXPECT_NO_THROW(c.validate());
    c.samples_per_symbol = 2;  // 64 GHz cannot hold 5 x 50 GHz
    EXPECT_THROW(c.validate(), ConfigError);
    c = LinkConfig{};
    c.step_size = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = LinkConfig{};
    c.num_spans = 0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(LinkConfig, JsonRoundTripAndHash) {
    LinkConfig c = small_link();
    c.launch_power_dbm = 1.5;
    const auto j = to_json(c);
    const auto back = parse_link_config(j);
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(config_hash(j), config_hash(to_json(back)));
    auto j2 = j;
    j2["gamma"] = 1.3;
    EXPECT_NE(config_hash(j), config_hash(j2));
    EXPECT_EQ(config_hash(j).size(), 16u);
    EXPECT_THROW(parse_link_config(nlohmann::json{{"gama", 1.0}}), ConfigError);
    EXPECT_THROW(parse_link_config(nlohmann::json{{"gamma", "x"}}), ConfigError);
    EXPECT_THROW(load_link_config("/nonexistent/link.json"), IoError);
}

TEST(ChannelMemory, ConventionsAndScaling) {
    LinkConfig c;
    const auto m80 = estimate_channel_memory(c, 80);
    const auto m160 = estimate_channel_memory(c, 160);
    EXPECT_NEAR(double(m160) / double(m80), 2.0, 2.0 / m80);
    const double raw = 80e3 * std::pow(2 * M_PI * 5 * 50e9, 2) * std::abs(c.beta2());
    EXPECT_EQ(m80, std::int64_t(std::ceil(raw)));
    const auto ord = estimate_channel_memory(c, 80, FrequencyConvention::ordinary);
    EXPECT_NEAR(double(m80) / double(ord), 4 * M_PI * M_PI, 4 * M_PI * M_PI / ord + 1e-9);
    LinkConfig wide = c;
    wide.wdm_spacing *= 2;
    EXPECT_NEAR(double(estimate_channel_memory(wide, 800)) / double(estimate_channel_memory(c, 800)), 4.0, 1e-3);
    EXPECT_THROW(estimate_channel_memory(c, 0), InvalidInputError);
}

TEST(Steps, NonlinearRotationPreservesPower) {
    std::vector<Complex> a(256);
    Rng r(1);
    for (auto& v : a) v = Complex(r.normal(), r.normal()) * 0.03;
    auto b = a;
    apply_nonlinear_step(b, 1.37e-3, 1000.0);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::norm(b[i]), std::norm(a[i]), 1e-15 * std::norm(a[i]) + 1e-300);
}

TEST(Steps, LosslessDispersionIsUnitary) {
    LinkConfig c = small_link();
    c.attenuation = 0;
    std::vector<Complex> a(4096);
    Rng r(2);
    for (auto& v : a) v = Complex(r.normal(), r.normal());
    double before = 0;
    for (auto v : a) before += std::norm(v);
    auto b = a;
    apply_linear_step(b, c, 5000.0);
    double after = 0;
    for (auto v : b) after += std::norm(v);
    EXPECT_NEAR(after / before, 1.0, 1e-10);
    apply_linear_step(b, c, -5000.0);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(b[i] - a[i]), 0.0, 1e-10);
}

TEST(Propagate, LinearBackToBackIdentity) {
    LinkConfig c = small_link();
    c.wdm_channels = 3;
    c.samples_per_symbol = 8;
    c.gamma = 0;
    c.ase_enabled = false;
    std::vector<SymbolSequence> ch{generate_baseline(Baseline::qpsk(), 2048, 1),
                                   generate_baseline(Baseline::uniform_qam(64), 2048, 2),
                                   generate_baseline(Baseline::uniform_qam(16), 2048, 3)};
    const auto r = propagate(ch, c, 7);
    EXPECT_EQ(r.tx_symbols.symbols, ch[1].symbols);
    EXPECT_LT(evm_db(r), -60.0);
}

TEST(Propagate, AseOnlyMatchesAnalyticSnr) {
    LinkConfig c = small_link();
    c.gamma = 0;
    c.launch_power_dbm = -10;
    const auto r = propagate(one_channel(1 << 14, 4), c, 11);
    EXPECT_NEAR(effective_snr(r), analytic_ase_snr_db(c), 0.2);
}

TEST(Propagate, DeterministicForFixedSeeds) {
    LinkConfig c = small_link();
    const auto tx = one_channel(1024, 5);
    const auto a = propagate(tx, c, 3);
    const auto b = propagate(tx, c, 3);
    EXPECT_EQ(a.rx_symbols.symbols, b.rx_symbols.symbols);
    const auto d = propagate(tx, c, 4);
    EXPECT_NE(a.rx_symbols.symbols, d.rx_symbols.symbols);
    EXPECT_EQ(a.per_run_seed, 3u);
}

TEST(Propagate, SnrFallsBeyondOptimalPower) {
    LinkConfig c = small_link();
    c.num_spans = 3;
    c.span_length = 60;
    const auto tx = one_channel(4096, 6);
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {8.0, 11.0, 14.0}) {
        c.launch_power_dbm = p;
        const double snr = effective_snr(propagate(tx, c, 1));
        EXPECT_LT(snr, prev) << p << " dBm";
        prev = snr;
    }
}

TEST(Propagate, Errors) {
    LinkConfig c = small_link();
    auto tx = one_channel(256, 1);
    LinkConfig bad = c;
    bad.wdm_channels = 5;
    bad.samples_per_symbol = 2;
    EXPECT_THROW(propagate(tx, bad, 1), ConfigError);
    std::vector<SymbolSequence> two{tx[0], generate_baseline(Baseline::qpsk(), 100, 1)};
    c.wdm_channels = 2;
    c.samples_per_symbol = 8;
    EXPECT_THROW(propagate(two, c, 1), InvalidInputError);
    c.wdm_channels = 1;
    tx[0].symbols[17] = Complex(std::numeric_limits<double>::quiet_NaN(), 0);
    EXPECT_THROW(propagate(tx, c, 1), NumericalDivergenceError);
}

TEST(EffectiveSnr, Oracles) {
    const auto x = generate_baseline(Baseline::uniform_qam(64), 200000, 1).symbols;
    EXPECT_EQ(effective_snr(x, x), std::numeric_limits<double>::infinity());
    const double sigma2 = 0.01;
    Rng r(2);
    auto y = x;
    for (auto& v : y) v += Complex(r.normal(), r.normal()) * std::sqrt(sigma2 / 2);
    EXPECT_NEAR(effective_snr(x, y), 20.0, 0.05);
    PropagationResult a{{x, {}}, {y, {}}, 0};
    PropagationResult b{{x, {}}, {x, {}}, 0};
    b.rx_symbols.symbols[0] += 0.1;
    const std::vector<PropagationResult> runs{a, b};
    EXPECT_NEAR(effective_snr(runs), 0.5 * (effective_snr(a) + effective_snr(b)), 1e-12);
    EXPECT_THROW(effective_snr(x, std::vector<Complex>(3)), InvalidInputError);
}
