#include <gtest/gtest.h>

#include <map>

#include <nlohmann/json.hpp>

#include "edi/ccdm.hpp"
#include "edi/error.hpp"
#include "oracles.hpp"

using namespace edi;

namespace {

const AmplitudeAlphabet kAlpha = AmplitudeAlphabet::pam(4);

}  // namespace

TEST(Trellis, ExampleBlocklengthFour) {
    const auto t = build_trellis(Composition({1, 3}, {3, 1}), kAlpha);
    EXPECT_EQ(t.all_energy_levels(), (std::vector<std::int64_t>{0, 1, 2, 3, 9, 10, 11, 12}));
    EXPECT_DOUBLE_EQ(t.state_prob(2, 10), 0.5);
    EXPECT_DOUBLE_EQ(t.cond_prob(2, 1, 10), 1.0);
    EXPECT_DOUBLE_EQ(t.joint_prob(2, 1, 10), 0.5);
    EXPECT_DOUBLE_EQ(t.joint_prob(2, 1, 2), 0.25);
    EXPECT_DOUBLE_EQ(t.marginal(2, 1), 0.75);
    EXPECT_EQ(t.cond_prob(2, 1, 5), 0.0);  // unreachable energy
}

TEST(Trellis, ExampleBlocklengthEight) {
    const auto t4 = build_trellis(Composition({1, 3}, {3, 1}), kAlpha);
    const auto t8 = build_trellis(Composition({1, 3}, {6, 2}), kAlpha);
    EXPECT_EQ(t8.energy_levels(8), (std::vector<std::int64_t>{24}));
    EXPECT_EQ(t4.energy_levels(4), (std::vector<std::int64_t>{12}));
    EXPECT_DOUBLE_EQ(24.0 / 8, 12.0 / 4);
}

TEST(Trellis, MatchesPermutationEnumeration) {
    const std::vector<int> levels{1, 3, 5, 7};
    const std::vector<std::size_t> counts{3, 2, 2, 1};
    const auto perms = oracle::permutations(levels, counts);
    const auto t = build_trellis(Composition(levels, counts), kAlpha);
    const double w = 1.0 / perms.size();
    for (std::size_t i = 0; i < 8; ++i) {
        std::map<std::int64_t, double> pe;
        std::map<std::pair<int, std::int64_t>, double> joint;
        for (const auto& p : perms) {
            std::int64_t e = 0;
            for (std::size_t k = 0; k < i; ++k) e += p[k] * p[k];
            pe[e] += w;
            joint[{p[i], e}] += w;
        }
        for (const auto& [e, p] : pe) EXPECT_NEAR(t.state_prob(i, e), p, 1e-13) << "i=" << i << " e=" << e;
        for (const auto& [k, p] : joint) EXPECT_NEAR(t.joint_prob(i, k.first, k.second), p, 1e-13);
        EXPECT_EQ(t.energy_levels(i).size(), pe.size());
    }
}

TEST(Trellis, ProbabilityInvariants) {
    const Composition comp({1, 3, 5, 7}, {6, 5, 3, 2});
    const auto t = build_trellis(comp, kAlpha);
    const std::size_t n = comp.blocklength();
    ASSERT_EQ(t.stages().size(), n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0;
        for (const auto& s : t.stage(i).states) {
            total += s.prob;
            double cond = 0;
            for (std::size_t a = 0; a < comp.num_levels(); ++a) {
                cond += s.cond_prob[a];
                // drawing without replacement: P(a | node) = residual_a / (n - i)
                EXPECT_NEAR(s.cond_prob[a], double(s.residual[a]) / double(n - i), 1e-15);
                EXPECT_NEAR(s.joint_prob[a], s.cond_prob[a] * s.prob, 1e-15);
            }
            EXPECT_NEAR(cond, 1.0, 1e-14);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        for (std::size_t a = 0; a < comp.num_levels(); ++a)
            EXPECT_NEAR(t.marginal(i, comp.levels()[a]), double(comp.counts()[a]) / n, 1e-12);
    }
}

TEST(Trellis, ResidualKeysWhenEnergyIsAmbiguous) {
    // 1+1+...+1 (25 ones... ) vs a 5: with levels {1, 5, 7}, 1²·... collisions: 5² + 5² = 1² + 7²
    const Composition comp({1, 5, 7}, {2, 2, 2});
    const auto t = build_trellis(comp, kAlpha);
    bool shared = false;
    for (const auto& st : t.stages()) {
        std::map<std::int64_t, int> by_e;
        for (const auto& s : st.states) ++by_e[s.energy];
        for (const auto& [e, c] : by_e) shared |= c > 1;
    }
    EXPECT_TRUE(shared);
    const auto perms = oracle::permutations(comp.levels(), comp.counts());
    std::map<std::int64_t, double> pe;
    for (const auto& p : perms) pe[p[0] * p[0] + p[1] * p[1]] += 1.0 / perms.size();
    EXPECT_NEAR(t.state_prob(2, 50), pe[50], 1e-14);
}

TEST(Trellis, GuardAndJson) {
    EXPECT_THROW(build_trellis(Composition({1, 3, 5, 7}, {4, 3, 2, 1}), kAlpha, 10), ResourceError);
    const auto j = to_json(build_trellis(Composition({1, 3}, {3, 1}), kAlpha));
    ASSERT_EQ(j.at("stages").size(), 5u);
    EXPECT_EQ(j.at("stages")[2].at("states").size(), 2u);
    EXPECT_TRUE(j.at("stages")[2].at("states")[0].contains("joint_prob"));
}
