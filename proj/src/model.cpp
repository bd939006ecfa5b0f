#include "cyrisk/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cyrisk {

int SystemGraph::index_of(const std::string& block_id) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].id == block_id) return static_cast<int>(i);
    return -1;
}

std::vector<std::vector<int>> SystemGraph::successors() const {
    std::vector<std::vector<int>> adj(blocks.size());
    for (auto [from, to] : edges) adj[static_cast<std::size_t>(from)].push_back(to);
    return adj;
}

std::vector<std::string> SystemGraph::validate() const {
    std::vector<std::string> errs;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        if (!ids.insert(b.id).second) errs.push_back("duplicate block id '" + b.id + "'");
        if (b.level < 1 || b.level > levels) {
            std::ostringstream os;
            os << "block '" << b.id << "' has level " << b.level << " outside [1, " << levels << "]";
            errs.push_back(os.str());
        }
        if (i > 0 && blocks[i - 1].level > b.level)
            errs.push_back("block '" + b.id + "' breaks ascending level order");
    }
    auto n = static_cast<int>(blocks.size());
    for (auto [from, to] : edges) {
        if (from < 0 || from >= n || to < 0 || to >= n) {
            errs.push_back("edge references a nonexistent block");
            continue;
        }
        if (from == to) {
            errs.push_back("self-loop on block '" + blocks[static_cast<std::size_t>(from)].id + "'");
            continue;
        }
        int lf = blocks[static_cast<std::size_t>(from)].level;
        int lt = blocks[static_cast<std::size_t>(to)].level;
        if (lf != lt && lf != lt - 1) {
            errs.push_back("edge " + blocks[static_cast<std::size_t>(from)].id + " -> " +
                           blocks[static_cast<std::size_t>(to)].id +
                           " crosses more than one level");
        }
        if (lf < lt && from > to)
            errs.push_back("edge " + blocks[static_cast<std::size_t>(from)].id + " -> " +
                           blocks[static_cast<std::size_t>(to)].id +
                           " violates the ascending index rule");
    }
    return errs;
}

int ControlCatalog::index_of(const std::string& control_id) const {
    for (std::size_t i = 0; i < controls.size(); ++i)
        if (controls[i].id == control_id) return static_cast<int>(i);
    return -1;
}

bool ControlCatalog::counters_attack(const std::string& control_id,
                                     const std::string& attack_id) const {
    int i = index_of(control_id);
    if (i < 0) return false;
    const auto& cs = controls[static_cast<std::size_t>(i)].counters;
    return std::find(cs.begin(), cs.end(), attack_id) != cs.end();
}

std::vector<std::string> ControlCatalog::validate() const {
    std::vector<std::string> errs;
    std::set<std::string> ids;
    for (const auto& c : controls) {
        if (!ids.insert(c.id).second) errs.push_back("duplicate control id '" + c.id + "'");
        if (c.icost < 0 || c.mcost < 0) errs.push_back("control '" + c.id + "' has negative cost");
        if (c.alpha < 0 || c.beta < 0)
            errs.push_back("control '" + c.id + "' has negative effectiveness");
    }
    return errs;
}

std::string Portfolio::state_key() const {
    std::string k;
    k.reserve(states.size());
    for (auto s : states) k.push_back(static_cast<char>('0' + static_cast<int>(s)));
    return k;
}

std::string Portfolio::key() const {
    std::string k = state_key();
    if (!insurance.empty()) k += "+" + insurance;
    return k;
}

const InsuranceProduct* InsuranceRegistry::find(const std::string& id) const {
    for (const auto& p : products)
        if (p.id == id) return &p;
    return nullptr;
}

const InsuranceProduct& InsuranceRegistry::at(const std::string& id) const {
    const auto* p = find(id);
    if (!p) throw ConfigError("unknown insurance product '" + id + "'");
    return *p;
}

double portfolio_cost(const Portfolio& p, const ControlCatalog& cat, const InsuranceRegistry& ins) {
    if (p.states.size() != cat.controls.size())
        throw ConfigError("portfolio state vector does not match the control catalog");
    double cost = 0.0;
    for (std::size_t i = 0; i < cat.controls.size(); ++i) {
        if (p.states[i] == ControlState::Planned) cost += cat.controls[i].icost;
        if (p.active(i)) cost += cat.controls[i].mcost;
    }
    if (!p.insurance.empty()) {
        const auto& product = ins.at(p.insurance);
        cost += product.price.at(p, cat, "insurance '" + product.id + "' price table");
    }
    return cost;
}

Feasibility is_feasible(const Portfolio& p, const Constraints& c, const ControlCatalog& cat,
                        const InsuranceRegistry& ins) {
    Feasibility f;
    auto violate = [&f](const std::string& msg) {
        f.ok = false;
        f.violations.push_back(msg);
    };

    double icost = 0.0, mcost = 0.0;
    for (std::size_t i = 0; i < cat.controls.size(); ++i) {
        if (p.states[i] == ControlState::Planned) icost += cat.controls[i].icost;
        if (p.active(i)) mcost += cat.controls[i].mcost;
    }
    double total = icost + mcost;
    if (!p.insurance.empty()) {
        const auto* product = ins.find(p.insurance);
        if (!product) {
            violate("unknown insurance product '" + p.insurance + "'");
        } else if (const double* price = product->price.find(p, cat)) {
            total += *price;
        } else {
            violate("insurance '" + p.insurance + "' has no price for this portfolio");
        }
    }

    std::ostringstream os;
    if (c.total_budget && total > *c.total_budget + 1e-9) {
        os << "total cost " << total << " exceeds budget " << *c.total_budget;
        violate(os.str());
    }
    if (c.implementation_budget && icost > *c.implementation_budget + 1e-9)
        violate("implementation cost exceeds implementation budget");
    if (c.maintenance_budget && mcost > *c.maintenance_budget + 1e-9)
        violate("maintenance cost exceeds maintenance budget");
    for (const auto& id : c.enforced_controls) {
        int i = cat.index_of(id);
        if (i < 0 || !p.active(static_cast<std::size_t>(i)))
            violate("enforced control '" + id + "' is not active");
    }
    if (!c.allowed_insurance.empty() &&
        std::find(c.allowed_insurance.begin(), c.allowed_insurance.end(), p.insurance) ==
            c.allowed_insurance.end())
        violate("insurance '" + (p.insurance.empty() ? std::string("none") : p.insurance) +
                "' does not meet the compliance floor");
    return f;
}

std::vector<Portfolio> enumerate_all(const DecisionSpace& space, const ControlCatalog& cat,
                                     std::size_t cap) {
    std::vector<int> free_idx;
    for (const auto& id : space.free_controls) {
        int i = cat.index_of(id);
        if (i < 0) throw ConfigError("free control '" + id + "' not in catalog");
        free_idx.push_back(i);
    }
    std::size_t n_states = std::size_t{1} << free_idx.size();
    std::size_t n_ins = std::max<std::size_t>(1, space.insurance_options.size());
    if (n_states * n_ins > cap) {
        std::ostringstream os;
        os << "decision space has " << n_states * n_ins << " portfolios, above the enumeration cap "
           << cap << "; use the stochastic optimizer";
        throw ConfigError(os.str());
    }

    Portfolio base = space.base;
    if (base.states.size() != cat.controls.size())
        base.states.assign(cat.controls.size(), ControlState::Absent);

    std::vector<Portfolio> out;
    for (std::size_t mask = 0; mask < n_states; ++mask) {
        Portfolio p = base;
        // lexicographic on the state string: the first free position is the
        // most significant digit
        for (std::size_t b = 0; b < free_idx.size(); ++b) {
            bool on = (mask >> (free_idx.size() - 1 - b)) & 1u;
            p.states[static_cast<std::size_t>(free_idx[b])] =
                on ? ControlState::Planned : ControlState::Absent;
        }
        if (space.insurance_options.empty()) {
            out.push_back(p);
        } else {
            auto ins_sorted = space.insurance_options;
            std::sort(ins_sorted.begin(), ins_sorted.end());
            for (const auto& ins_id : ins_sorted) {
                p.insurance = ins_id;
                out.push_back(p);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Portfolio& a, const Portfolio& b) { return a.key() < b.key(); });
    return out;
}

std::vector<Portfolio> enumerate_feasible(const DecisionSpace& space, const Constraints& c,
                                          const ControlCatalog& cat, const InsuranceRegistry& ins,
                                          std::size_t cap) {
    std::vector<Portfolio> out;
    for (auto& p : enumerate_all(space, cat, cap))
        if (is_feasible(p, c, cat, ins).ok) out.push_back(std::move(p));
    return out;
}

} // namespace cyrisk
