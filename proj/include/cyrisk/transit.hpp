#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cyrisk/dist.hpp"
#include "cyrisk/model.hpp"
#include "cyrisk/rng.hpp"

namespace cyrisk {

// Distribution over entry-block subsets for one attack. Weights are either
// drawn from `weights_dist` (Dirichlet over combos) or fixed.
struct EntranceModel {
    std::vector<std::vector<int>> combos; // entry-capable block indices
    std::optional<DistSpec> weights_dist;
    std::optional<std::vector<double>> fixed_weights;

    std::vector<double> draw_weights(RngStream& s) const;
};

// Probability-of-not-protecting specs: q is the probability that an attack
// on the block SUCCEEDS. Entry PNPs are keyed by block index, edge PNPs by
// (to, from).
struct PnpModel {
    std::map<int, DistSpec> entry;
    std::map<std::pair<int, int>, DistSpec> edge;
};

// Number of propagation sweeps per level (N'). Acyclic graphs need one.
struct TransitBudget {
    DistSpec sweeps = DistSpec::point(1);

    static TransitBudget acyclic() { return TransitBudget{}; }
    static TransitBudget cyclic(DistSpec d) { return TransitBudget{std::move(d)}; }
};

// Optional per-call trace used by tests to audit propagation legality.
struct TransitTrace {
    std::vector<int> entry_combo;                 // blocks entered
    std::vector<std::pair<int, int>> attempted;   // (from, to) edge attempts
};

// One attack's entry and propagation. Returns the per-block compromise
// indicator vector.
std::vector<std::uint8_t> simulate_transit(const SystemGraph& g, const EntranceModel& e,
                                           const PnpModel& q, const TransitBudget& t,
                                           RngStream& s, TransitTrace* trace = nullptr);

struct BlockFrequencies {
    std::vector<double> freq;
    std::vector<double> se;
};

BlockFrequencies estimate_block_probabilities(const std::vector<std::vector<std::uint8_t>>& runs);

} // namespace cyrisk
