#include "cyrisk/transit.hpp"

#include <cmath>
#include <stdexcept>

namespace cyrisk {

std::vector<double> EntranceModel::draw_weights(RngStream& s) const {
    if (fixed_weights) return *fixed_weights;
    if (!weights_dist) throw ConfigError("entrance model has neither weights nor a distribution");
    return sample_vector(*weights_dist, s);
}

std::vector<std::uint8_t> simulate_transit(const SystemGraph& g, const EntranceModel& e,
                                           const PnpModel& q, const TransitBudget& t,
                                           RngStream& s, TransitTrace* trace) {
    std::vector<std::uint8_t> compromised(g.blocks.size(), 0);

    auto weights = e.draw_weights(s);
    if (weights.size() != e.combos.size())
        throw ConfigError("entrance weights do not match the declared entry combinations");
    int combo = sample_multinomial(weights, s);
    const auto& entered = e.combos[static_cast<std::size_t>(combo)];
    if (trace) trace->entry_combo = entered;

    // Entry phase: each attacked entry resists with probability 1 - q.
    bool any = false;
    for (int b : entered) {
        auto it = q.entry.find(b);
        if (it == q.entry.end())
            throw ConfigError("no entry PNP for block '" + g.blocks[static_cast<std::size_t>(b)].id +
                              "'");
        double qv = sample(it->second, s);
        if (s.uniform01() < qv) {
            compromised[static_cast<std::size_t>(b)] = 1;
            any = true;
        }
    }
    if (!any) return compromised;

    // One q draw per edge per attack; each sweep re-draws its Bernoulli.
    std::map<std::pair<int, int>, double> edge_q;
    for (auto [from, to] : g.edges) {
        auto it = q.edge.find({to, from});
        if (it == q.edge.end())
            throw ConfigError("no edge PNP for " + g.blocks[static_cast<std::size_t>(to)].id +
                              " <- " + g.blocks[static_cast<std::size_t>(from)].id);
        edge_q[{from, to}] = sample(it->second, s);
    }

    auto adj = g.successors();
    for (int level = 1; level <= g.levels; ++level) {
        int sweeps = std::max(1, sample_count(t.sweeps, s));
        for (int u = 0; u < sweeps; ++u) {
            for (std::size_t j = 0; j < g.blocks.size(); ++j) {
                if (g.blocks[j].level != level || !compromised[j]) continue;
                for (int succ : adj[j]) {
                    if (compromised[static_cast<std::size_t>(succ)]) continue;
                    if (trace) trace->attempted.emplace_back(static_cast<int>(j), succ);
                    if (s.uniform01() < edge_q.at({static_cast<int>(j), succ}))
                        compromised[static_cast<std::size_t>(succ)] = 1;
                }
            }
        }
    }
    return compromised;
}

BlockFrequencies estimate_block_probabilities(const std::vector<std::vector<std::uint8_t>>& runs) {
    if (runs.empty()) throw std::invalid_argument("estimate_block_probabilities: empty run list");
    std::size_t n = runs.front().size();
    BlockFrequencies out;
    out.freq.assign(n, 0.0);
    out.se.assign(n, 0.0);
    for (const auto& run : runs) {
        if (run.size() != n)
            throw std::invalid_argument("estimate_block_probabilities: ragged run list");
        for (std::size_t i = 0; i < n; ++i) out.freq[i] += run[i];
    }
    auto m = static_cast<double>(runs.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.freq[i] /= m;
        out.se[i] = std::sqrt(out.freq[i] * (1.0 - out.freq[i]) / m);
    }
    return out;
}

} // namespace cyrisk
