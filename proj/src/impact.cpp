#include "cyrisk/impact.hpp"

#include <algorithm>

namespace cyrisk {

namespace {

const ImpactCategory& category_by_id(const std::vector<ImpactCategory>& categories,
                                     const std::string& id) {
    for (const auto& c : categories)
        if (c.id == id) return c;
    throw ConfigError("impact table references unknown category '" + id + "'");
}

double weight_of(const std::map<std::string, double>& weights, const std::string& id) {
    auto it = weights.find(id);
    return it == weights.end() ? 1.0 : it->second;
}

} // namespace

ImpactBreakdown simulate_impact(const std::vector<std::uint8_t>& compromised,
                                const ImpactTable& table,
                                const std::vector<ImpactCategory>& categories,
                                const InsuranceProduct* insurance,
                                const std::map<std::string, double>& weights, RngStream& s) {
    ImpactBreakdown out;
    bool any = std::any_of(compromised.begin(), compromised.end(),
                           [](std::uint8_t v) { return v != 0; });
    if (!any) return out; // no compromise, no loss

    auto account = [&](const std::string& cat_id, double euros) {
        double frac = insurance ? insurance->coverage(cat_id) : 0.0;
        double retained = (1.0 - frac) * euros;
        out.gross[cat_id] = euros;
        out.retained[cat_id] = retained;
        out.total += weight_of(weights, cat_id) * retained;
    };

    for (const auto& [cat_id, spec] : table.global) {
        const auto& cat = category_by_id(categories, cat_id);
        if (cat.scope != ImpactScope::Global)
            throw ConfigError("category '" + cat_id + "' is separable but listed as global");
        account(cat_id, sample(spec, s) * cat.unit_to_euros);
    }

    for (const auto& [cat_id, per_block] : table.separable) {
        const auto& cat = category_by_id(categories, cat_id);
        if (cat.scope != ImpactScope::Separable)
            throw ConfigError("category '" + cat_id + "' is global but listed as separable");
        double agg = 0.0;
        for (std::size_t b = 0; b < compromised.size(); ++b) {
            if (!compromised[b]) continue;
            auto it = per_block.find(static_cast<int>(b));
            if (it == per_block.end())
                throw ConfigError("category '" + cat_id + "': no impact spec for block index " +
                                  std::to_string(b));
            double v = sample(it->second, s);
            agg = cat.aggregation == ImpactAggregation::Sum ? agg + v : std::max(agg, v);
        }
        account(cat_id, agg * cat.unit_to_euros);
    }
    return out;
}

} // namespace cyrisk
