#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyrisk {

// Thrown for scenario/configuration problems (missing table entries,
// malformed inputs). Distinct from runtime failures so the CLI can map it
// to its own exit code.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Block {
    std::string id;
    std::string name;
    int level = 1;
    bool entry_capable = false;
    std::vector<std::string> tags;
};

struct SystemGraph {
    std::vector<Block> blocks;
    std::vector<std::pair<int, int>> edges; // (from, to) block indices
    int levels = 1;

    int index_of(const std::string& block_id) const;
    // Adjacency list: successors()[from] lists the `to` indices in edge order.
    std::vector<std::vector<int>> successors() const;
    std::vector<std::string> validate() const;
};

struct ControlDef {
    std::string id;
    std::string name;
    double icost = 0.0; // implementation, euros
    double mcost = 0.0; // maintenance, euros/year
    double alpha = 0.0; // surrogate zero-loss effectiveness
    double beta = 0.0;  // surrogate scale effectiveness
    std::vector<std::string> counters; // attack-type ids this control protects against
};

struct ControlCatalog {
    std::vector<ControlDef> controls;

    int index_of(const std::string& control_id) const;
    bool counters_attack(const std::string& control_id, const std::string& attack_id) const;
    std::vector<std::string> validate() const;
};

enum class ControlState : int { Absent = 0, Planned = 1, Implemented = 2 };

struct Portfolio {
    std::vector<ControlState> states; // aligned with catalog order
    std::string insurance;            // product id, empty for none

    bool active(std::size_t i) const {
        return states[i] == ControlState::Planned || states[i] == ControlState::Implemented;
    }
    // Control-state digits, e.g. "011".
    std::string state_key() const;
    // Full key including insurance, e.g. "011+A".
    std::string key() const;
};

// Table keyed by the portfolio's active-control pattern, restricted to the
// controls named in `relevant`. Lookup keys are full-length digit strings in
// catalog order with irrelevant positions forced to '0'; an empty relevant
// list means the value is portfolio-independent and stored under "*".
template <class T>
struct PortfolioKeyed {
    std::vector<std::string> relevant;
    std::map<std::string, T> entries;

    std::string project(const Portfolio& p, const ControlCatalog& cat) const {
        if (relevant.empty()) return "*";
        std::string key(cat.controls.size(), '0');
        for (std::size_t i = 0; i < cat.controls.size(); ++i) {
            if (!p.active(i)) continue;
            for (const auto& r : relevant) {
                if (cat.controls[i].id == r) {
                    key[i] = '1';
                    break;
                }
            }
        }
        return key;
    }

    const T* find(const Portfolio& p, const ControlCatalog& cat) const {
        auto it = entries.find(project(p, cat));
        return it == entries.end() ? nullptr : &it->second;
    }

    const T& at(const Portfolio& p, const ControlCatalog& cat, const std::string& what) const {
        auto key = project(p, cat);
        auto it = entries.find(key);
        if (it == entries.end())
            throw ConfigError(what + ": no entry for portfolio subset '" + key + "'");
        return it->second;
    }
};

struct InsuranceProduct {
    std::string id;
    std::string name;
    std::map<std::string, double> covered_fraction; // impact-category id -> [0, 1]
    PortfolioKeyed<double> price;                   // euros/year

    double coverage(const std::string& category_id) const {
        auto it = covered_fraction.find(category_id);
        return it == covered_fraction.end() ? 0.0 : it->second;
    }
};

struct Constraints {
    std::optional<double> total_budget;
    std::optional<double> implementation_budget;
    std::optional<double> maintenance_budget;
    std::vector<std::string> allowed_insurance; // compliance floor; empty = anything goes
    std::vector<std::string> enforced_controls;
};

struct InsuranceRegistry {
    std::vector<InsuranceProduct> products;

    const InsuranceProduct* find(const std::string& id) const;
    const InsuranceProduct& at(const std::string& id) const;
};

// Decision cost of a portfolio: implementation cost for planned controls,
// maintenance for all active controls, plus the insurance price looked up by
// the active-control subset. Already-implemented controls are sunk and
// contribute maintenance only.
double portfolio_cost(const Portfolio& p, const ControlCatalog& cat, const InsuranceRegistry& ins);

struct Feasibility {
    bool ok = true;
    std::vector<std::string> violations;
};

Feasibility is_feasible(const Portfolio& p, const Constraints& c, const ControlCatalog& cat,
                        const InsuranceRegistry& ins);

struct DecisionSpace {
    std::vector<std::string> free_controls;
    std::vector<std::string> insurance_options;
    Portfolio base; // fixed states for non-free controls
};

inline constexpr std::size_t kEnumerationCap = 4096;

// All feasible portfolios in lexicographic order (states, then insurance id).
std::vector<Portfolio> enumerate_feasible(const DecisionSpace& space, const Constraints& c,
                                          const ControlCatalog& cat, const InsuranceRegistry& ins,
                                          std::size_t cap = kEnumerationCap);

// All portfolios of the space, same order, no feasibility filter.
std::vector<Portfolio> enumerate_all(const DecisionSpace& space, const ControlCatalog& cat,
                                     std::size_t cap = kEnumerationCap);

} // namespace cyrisk
