#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "edi/ccdm.hpp"
#include "edi/error.hpp"

namespace edi {

ShapingTrellis::ShapingTrellis(Composition comp, double delta, std::vector<TrellisStage> stages)
    : comp_(std::move(comp)), delta_(delta), stages_(std::move(stages)) {}

std::size_t ShapingTrellis::level_index(int level) const {
    const auto& levels = comp_.levels();
    auto it = std::lower_bound(levels.begin(), levels.end(), level);
    if (it == levels.end() || *it != level)
        throw InvalidInputError("level " + std::to_string(level) + " is not part of the composition");
    return static_cast<std::size_t>(it - levels.begin());
}

std::vector<std::int64_t> ShapingTrellis::energy_levels(std::size_t i) const {
    std::vector<std::int64_t> out;
    for (const auto& s : stage(i).states)
        if (out.empty() || out.back() != s.energy) out.push_back(s.energy);
    return out;
}

std::vector<std::int64_t> ShapingTrellis::all_energy_levels() const {
    std::set<std::int64_t> all;
    for (const auto& st : stages_)
        for (const auto& s : st.states) all.insert(s.energy);
    return {all.begin(), all.end()};
}

double ShapingTrellis::state_prob(std::size_t i, std::int64_t energy) const {
    double p = 0.0;
    for (const auto& s : stage(i).states)
        if (s.energy == energy) p += s.prob;
    return p;
}

double ShapingTrellis::joint_prob(std::size_t i, int level, std::int64_t energy) const {
    const std::size_t a = level_index(level);
    double p = 0.0;
    for (const auto& s : stage(i).states)
        if (s.energy == energy && !s.joint_prob.empty()) p += s.joint_prob[a];
    return p;
}

double ShapingTrellis::cond_prob(std::size_t i, int level, std::int64_t energy) const {
    const double pe = state_prob(i, energy);
    if (pe <= 0.0) return 0.0;
    return joint_prob(i, level, energy) / pe;
}

double ShapingTrellis::marginal(std::size_t i, int level) const {
    const std::size_t a = level_index(level);
    double p = 0.0;
    for (const auto& s : stage(i).states)
        if (!s.joint_prob.empty()) p += s.joint_prob[a];
    return p;
}

std::size_t ShapingTrellis::num_states() const noexcept {
    std::size_t total = 0;
    for (const auto& st : stages_) total += st.states.size();
    return total;
}

ShapingTrellis build_trellis(const Composition& comp, const AmplitudeAlphabet& alphabet, std::size_t max_states) {
    for (std::size_t s = 0; s < comp.num_levels(); ++s)
        if (comp.counts()[s] > 0 && !alphabet.index_of(comp.levels()[s]))
            throw ConfigError("composition level " + std::to_string(comp.levels()[s]) +
                              " is not in the amplitude alphabet");

    const std::size_t n = comp.blocklength();
    const std::size_t L = comp.num_levels();
    std::vector<std::int64_t> sq(L);
    for (std::size_t s = 0; s < L; ++s) sq[s] = static_cast<std::int64_t>(comp.levels()[s]) * comp.levels()[s];

    // Key (energy, residual): the energy is a function of the residual, so
    // ordering by it first groups nodes that collapse onto the same height.
    using Key = std::pair<std::int64_t, std::vector<std::size_t>>;
    std::map<Key, double> current{{Key{0, comp.counts()}, 1.0}};
    std::vector<TrellisStage> stages;
    stages.reserve(n + 1);
    std::size_t total = 0;

    for (std::size_t i = 0; i <= n; ++i) {
        total += current.size();
        if (total > max_states)
            throw ResourceError("shaping trellis needs more than " + std::to_string(max_states) + " states");

        TrellisStage stage;
        stage.index = i;
        stage.states.reserve(current.size());
        std::map<Key, double> next;
        const double left = static_cast<double>(n - i);
        for (const auto& [key, prob] : current) {
            TrellisState node;
            node.energy = key.first;
            node.residual = key.second;
            node.prob = prob;
            if (i < n) {
                node.cond_prob.assign(L, 0.0);
                node.joint_prob.assign(L, 0.0);
                for (std::size_t s = 0; s < L; ++s) {
                    if (key.second[s] == 0) continue;
                    const double q = static_cast<double>(key.second[s]) / left;
                    node.cond_prob[s] = q;
                    node.joint_prob[s] = q * prob;
                    Key child{key.first + sq[s], key.second};
                    --child.second[s];
                    next[child] += q * prob;
                }
            }
            stage.states.push_back(std::move(node));
        }
        stages.push_back(std::move(stage));
        current = std::move(next);
    }
    return ShapingTrellis(comp, alphabet.delta(), std::move(stages));
}

nlohmann::json to_json(const ShapingTrellis& trellis) {
    using json = nlohmann::json;
    json j;
    j["levels"] = trellis.composition().levels();
    j["counts"] = trellis.composition().counts();
    j["delta"] = trellis.delta();
    j["energy_unit"] = "delta^2";
    json stages = json::array();
    for (const auto& st : trellis.stages()) {
        json states = json::array();
        for (const auto& s : st.states) {
            json node{{"energy", s.energy}, {"prob", s.prob}, {"residual", s.residual}};
            if (!s.cond_prob.empty()) {
                node["cond_prob"] = s.cond_prob;
                node["joint_prob"] = s.joint_prob;
            }
            states.push_back(std::move(node));
        }
        stages.push_back(json{{"index", st.index}, {"states", std::move(states)}});
    }
    j["stages"] = std::move(stages);
    return j;
}

}  // namespace edi
