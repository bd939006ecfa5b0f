#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cyrisk/scenario.hpp"

namespace cyrisk {

using nlohmann::json;

namespace {

// ---- distributions -------------------------------------------------------

json dist_to_json(const DistSpec& d) {
    switch (d.family) {
        case DistFamily::PointMass: return {{"point", d.a}};
        case DistFamily::Uniform: return {{"uniform", {d.a, d.b}}};
        case DistFamily::Beta: return {{"beta", {d.a, d.b}}};
        case DistFamily::Gamma: return {{"gamma", {d.a, d.b}}};
        case DistFamily::Poisson: return {{"poisson", d.a}};
        case DistFamily::Dirichlet: return {{"dirichlet", d.conc}};
    }
    throw std::logic_error("unreachable");
}

DistSpec dist_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        throw ConfigError(path + ": expected an object with one distribution key");
    try {
        if (j.contains("point")) return DistSpec::point(j.at("point").get<double>());
        if (j.contains("uniform")) {
            auto v = j.at("uniform").get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError(path + ": uniform needs [lo, hi]");
            return DistSpec::uniform(v[0], v[1]);
        }
        if (j.contains("beta")) {
            auto v = j.at("beta").get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError(path + ": beta needs [alpha, beta]");
            return DistSpec::beta(v[0], v[1]);
        }
        if (j.contains("gamma")) {
            auto v = j.at("gamma").get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError(path + ": gamma needs [shape, scale]");
            return DistSpec::gamma(v[0], v[1]);
        }
        if (j.contains("poisson")) return DistSpec::poisson(j.at("poisson").get<double>());
        if (j.contains("dirichlet"))
            return DistSpec::dirichlet(j.at("dirichlet").get<std::vector<double>>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ": unknown distribution family '" + j.begin().key() + "'");
}

// ---- portfolio-keyed tables ----------------------------------------------

template <class T, class ToJson>
json keyed_to_json(const PortfolioKeyed<T>& k, ToJson&& value_to_json) {
    json entries = json::object();
    for (const auto& [key, value] : k.entries) entries[key] = value_to_json(value);
    return {{"relevant", k.relevant}, {"entries", entries}};
}

template <class T, class FromJson>
PortfolioKeyed<T> keyed_from_json(const json& j, const std::string& path, FromJson&& value_from) {
    PortfolioKeyed<T> k;
    if (!j.is_object() || !j.contains("entries"))
        throw ConfigError(path + ": expected {relevant, entries}");
    if (j.contains("relevant")) k.relevant = j.at("relevant").get<std::vector<std::string>>();
    for (const auto& [key, value] : j.at("entries").items())
        k.entries.emplace(key, value_from(value, path + ".entries." + key));
    return k;
}

// ---- graph ---------------------------------------------------------------

json graph_to_json(const SystemGraph& g) {
    json blocks = json::array();
    for (const auto& b : g.blocks)
        blocks.push_back(
            {{"id", b.id}, {"name", b.name}, {"level", b.level}, {"entry", b.entry_capable}});
    json edges = json::array();
    for (const auto& [from, to] : g.edges)
        edges.push_back({g.blocks[static_cast<std::size_t>(from)].id,
                         g.blocks[static_cast<std::size_t>(to)].id});
    return {{"blocks", blocks}, {"edges", edges}};
}

SystemGraph graph_from_json(const json& j, const std::string& path) {
    SystemGraph g;
    for (const auto& b : j.at("blocks")) {
        Block block;
        block.id = b.at("id").get<std::string>();
        block.name = b.value("name", block.id);
        block.level = b.value("level", 1);
        block.entry_capable = b.value("entry", false);
        g.levels = std::max(g.levels, block.level);
        g.blocks.push_back(std::move(block));
    }
    for (const auto& e : j.at("edges")) {
        auto pair = e.get<std::vector<std::string>>();
        if (pair.size() != 2) throw ConfigError(path + ".edges: expected [from, to] pairs");
        int from = g.index_of(pair[0]);
        int to = g.index_of(pair[1]);
        if (from < 0) throw ConfigError(path + ".edges: unknown block '" + pair[0] + "'");
        if (to < 0) throw ConfigError(path + ".edges: unknown block '" + pair[1] + "'");
        g.edges.emplace_back(from, to);
    }
    return g;
}

// ---- pnp / impacts (block ids in JSON, indices in memory) ----------------

json pnp_to_json(const PnpModel& m, const SystemGraph& g) {
    json entry = json::object();
    for (const auto& [block, d] : m.entry)
        entry[g.blocks[static_cast<std::size_t>(block)].id] = dist_to_json(d);
    json edges = json::array();
    for (const auto& [key, d] : m.edge) {
        const auto& [to, from] = key;
        edges.push_back({{"from", g.blocks[static_cast<std::size_t>(from)].id},
                         {"to", g.blocks[static_cast<std::size_t>(to)].id},
                         {"q", dist_to_json(d)}});
    }
    return {{"entry", entry}, {"edges", edges}};
}

PnpModel pnp_from_json(const json& j, const SystemGraph& g, const std::string& path) {
    PnpModel m;
    if (j.contains("entry")) {
        for (const auto& [id, d] : j.at("entry").items()) {
            int b = g.index_of(id);
            if (b < 0) throw ConfigError(path + ".entry: unknown block '" + id + "'");
            m.entry.emplace(b, dist_from_json(d, path + ".entry." + id));
        }
    }
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            auto from_id = e.at("from").get<std::string>();
            auto to_id = e.at("to").get<std::string>();
            int from = g.index_of(from_id);
            int to = g.index_of(to_id);
            if (from < 0) throw ConfigError(path + ".edges: unknown block '" + from_id + "'");
            if (to < 0) throw ConfigError(path + ".edges: unknown block '" + to_id + "'");
            m.edge.emplace(std::make_pair(to, from), dist_from_json(e.at("q"), path + ".edges.q"));
        }
    }
    return m;
}

json impacts_to_json(const ImpactTable& t, const SystemGraph& g) {
    json global = json::object();
    for (const auto& [cat, d] : t.global) global[cat] = dist_to_json(d);
    json separable = json::object();
    for (const auto& [cat, per_block] : t.separable) {
        json blocks = json::object();
        for (const auto& [block, d] : per_block)
            blocks[g.blocks[static_cast<std::size_t>(block)].id] = dist_to_json(d);
        separable[cat] = blocks;
    }
    return {{"global", global}, {"separable", separable}};
}

ImpactTable impacts_from_json(const json& j, const SystemGraph& g, const std::string& path) {
    ImpactTable t;
    if (j.contains("global"))
        for (const auto& [cat, d] : j.at("global").items())
            t.global.emplace(cat, dist_from_json(d, path + ".global." + cat));
    if (j.contains("separable")) {
        for (const auto& [cat, per_block] : j.at("separable").items()) {
            std::map<int, DistSpec> blocks;
            for (const auto& [id, d] : per_block.items()) {
                int b = g.index_of(id);
                if (b < 0)
                    throw ConfigError(path + ".separable." + cat + ": unknown block '" + id + "'");
                blocks.emplace(b, dist_from_json(d, path + ".separable." + cat + "." + id));
            }
            t.separable.emplace(cat, std::move(blocks));
        }
    }
    return t;
}

// ---- attack types --------------------------------------------------------

json combos_to_json(const std::vector<std::vector<int>>& combos, const SystemGraph& g) {
    json out = json::array();
    for (const auto& combo : combos) {
        json ids = json::array();
        for (int b : combo) ids.push_back(g.blocks[static_cast<std::size_t>(b)].id);
        out.push_back(ids);
    }
    return out;
}

std::vector<std::vector<int>> combos_from_json(const json& j, const SystemGraph& g,
                                               const std::string& path) {
    std::vector<std::vector<int>> combos;
    for (const auto& combo : j) {
        std::vector<int> blocks;
        for (const auto& id : combo) {
            int b = g.index_of(id.get<std::string>());
            if (b < 0)
                throw ConfigError(path + ": unknown block '" + id.get<std::string>() + "'");
            blocks.push_back(b);
        }
        combos.push_back(std::move(blocks));
    }
    return combos;
}

json attack_type_to_json(const AttackTypeSpec& t, const SystemGraph& g) {
    json j = {{"id", t.id},
              {"name", t.name},
              {"targeted", t.targeted},
              {"entry_combos", combos_to_json(t.entry_combos, g)},
              {"pnp", keyed_to_json(t.pnp, [&](const PnpModel& m) { return pnp_to_json(m, g); })},
              {"impacts", keyed_to_json(t.impacts, [&](const ImpactTable& m) {
                   return impacts_to_json(m, g);
               })},
              {"sweeps", dist_to_json(t.transit.sweeps)}};
    if (!t.targeted) {
        j["arrival"] = dist_to_json(t.arrival);
        if (t.entry_weights) j["entry_weights"] = dist_to_json(*t.entry_weights);
    }
    return j;
}

AttackTypeSpec attack_type_from_json(const json& j, const SystemGraph& g, const std::string& path) {
    AttackTypeSpec t;
    t.id = j.at("id").get<std::string>();
    t.name = j.value("name", t.id);
    t.targeted = j.value("targeted", false);
    t.entry_combos = combos_from_json(j.at("entry_combos"), g, path + ".entry_combos");
    if (j.contains("arrival")) t.arrival = dist_from_json(j.at("arrival"), path + ".arrival");
    if (j.contains("entry_weights"))
        t.entry_weights = dist_from_json(j.at("entry_weights"), path + ".entry_weights");
    t.pnp = keyed_from_json<PnpModel>(j.at("pnp"), path + ".pnp",
                                      [&](const json& v, const std::string& p) {
                                          return pnp_from_json(v, g, p);
                                      });
    t.impacts = keyed_from_json<ImpactTable>(j.at("impacts"), path + ".impacts",
                                             [&](const json& v, const std::string& p) {
                                                 return impacts_from_json(v, g, p);
                                             });
    if (j.contains("sweeps"))
        t.transit = TransitBudget::cyclic(dist_from_json(j.at("sweeps"), path + ".sweeps"));
    return t;
}

// ---- attackers -----------------------------------------------------------

json gain_to_json(const GainModel& gm) {
    if (gm.kind == GainModel::Kind::Notoriety) {
        return {{"kind", "notoriety"},
                {"financial", keyed_to_json(gm.financial, dist_to_json)},
                {"casualties", keyed_to_json(gm.casualties, dist_to_json)},
                {"vsl", gm.vsl},
                {"financial_unit", gm.financial_unit}};
    }
    return {{"kind", "records"},
            {"record_count", keyed_to_json(gm.record_count, dist_to_json)},
            {"record_value", dist_to_json(gm.record_value)}};
}

GainModel gain_from_json(const json& j, const std::string& path) {
    GainModel gm;
    auto kind = j.at("kind").get<std::string>();
    if (kind == "notoriety") {
        gm.kind = GainModel::Kind::Notoriety;
        gm.financial = keyed_from_json<DistSpec>(j.at("financial"), path + ".financial",
                                                 dist_from_json);
        gm.casualties = keyed_from_json<DistSpec>(j.at("casualties"), path + ".casualties",
                                                  dist_from_json);
        gm.vsl = j.at("vsl").get<double>();
        gm.financial_unit = j.value("financial_unit", 1.0);
    } else if (kind == "records") {
        gm.kind = GainModel::Kind::Records;
        gm.record_count = keyed_from_json<DistSpec>(j.at("record_count"), path + ".record_count",
                                                    dist_from_json);
        gm.record_value = dist_from_json(j.at("record_value"), path + ".record_value");
    } else {
        throw ConfigError(path + ".kind: expected 'notoriety' or 'records'");
    }
    return gm;
}

json action_to_json(const AttackerAction& a) {
    json j = {{"attack_type", a.attack_type},
              {"success", keyed_to_json(a.success, dist_to_json)},
              {"detect_prob", keyed_to_json(a.detect_prob, dist_to_json)},
              {"detect_cost", dist_to_json(a.detect_cost)},
              {"gain", gain_to_json(a.gain)}};
    if (a.targets_us())
        j["entry_combo"] = a.entry_combo;
    else
        j["other_system"] = a.other_system;
    return j;
}

AttackerAction action_from_json(const json& j, const std::string& path) {
    AttackerAction a;
    a.attack_type = j.at("attack_type").get<std::string>();
    a.entry_combo = j.value("entry_combo", -1);
    a.other_system = j.value("other_system", std::string());
    a.success = keyed_from_json<DistSpec>(j.at("success"), path + ".success", dist_from_json);
    a.detect_prob =
        keyed_from_json<DistSpec>(j.at("detect_prob"), path + ".detect_prob", dist_from_json);
    a.detect_cost = dist_from_json(j.at("detect_cost"), path + ".detect_cost");
    a.gain = gain_from_json(j.at("gain"), path + ".gain");
    return a;
}

json attacker_to_json(const AttackerSpec& a) {
    json actions = json::array();
    for (const auto& act : a.actions) actions.push_back(action_to_json(act));
    return {{"id", a.id},
            {"name", a.name},
            {"arrival", dist_to_json(a.arrival)},
            {"risk_proneness", dist_to_json(a.risk_proneness)},
            {"actions", actions}};
}

AttackerSpec attacker_from_json(const json& j, const std::string& path) {
    AttackerSpec a;
    a.id = j.at("id").get<std::string>();
    a.name = j.value("name", a.id);
    a.arrival = dist_from_json(j.at("arrival"), path + ".arrival");
    a.risk_proneness = dist_from_json(j.at("risk_proneness"), path + ".risk_proneness");
    std::size_t i = 0;
    for (const auto& act : j.at("actions"))
        a.actions.push_back(
            action_from_json(act, path + ".actions[" + std::to_string(i++) + "]"));
    return a;
}

// ---- remaining pieces ----------------------------------------------------

std::string scope_name(ImpactScope s) { return s == ImpactScope::Global ? "global" : "separable"; }
std::string agg_name(ImpactAggregation a) { return a == ImpactAggregation::Sum ? "sum" : "max"; }

json category_to_json(const ImpactCategory& c) {
    return {{"id", c.id},
            {"name", c.name},
            {"scope", scope_name(c.scope)},
            {"aggregation", agg_name(c.aggregation)},
            {"unit_to_euros", c.unit_to_euros}};
}

ImpactCategory category_from_json(const json& j, const std::string& path) {
    ImpactCategory c;
    c.id = j.at("id").get<std::string>();
    c.name = j.value("name", c.id);
    auto scope = j.value("scope", "global");
    if (scope == "global")
        c.scope = ImpactScope::Global;
    else if (scope == "separable")
        c.scope = ImpactScope::Separable;
    else
        throw ConfigError(path + ".scope: expected 'global' or 'separable'");
    auto agg = j.value("aggregation", "sum");
    if (agg == "sum")
        c.aggregation = ImpactAggregation::Sum;
    else if (agg == "max")
        c.aggregation = ImpactAggregation::Max;
    else
        throw ConfigError(path + ".aggregation: expected 'sum' or 'max'");
    c.unit_to_euros = j.value("unit_to_euros", 1.0);
    return c;
}

json control_to_json(const ControlDef& c) {
    return {{"id", c.id},       {"name", c.name},   {"icost", c.icost},
            {"mcost", c.mcost}, {"alpha", c.alpha}, {"beta", c.beta},
            {"counters", c.counters}};
}

ControlDef control_from_json(const json& j) {
    ControlDef c;
    c.id = j.at("id").get<std::string>();
    c.name = j.value("name", c.id);
    c.icost = j.value("icost", 0.0);
    c.mcost = j.value("mcost", 0.0);
    c.alpha = j.value("alpha", 0.0);
    c.beta = j.value("beta", 0.0);
    if (j.contains("counters")) c.counters = j.at("counters").get<std::vector<std::string>>();
    return c;
}

json insurance_to_json(const InsuranceProduct& p) {
    return {{"id", p.id},
            {"name", p.name},
            {"covered_fraction", p.covered_fraction},
            {"price", keyed_to_json(p.price, [](double v) { return json(v); })}};
}

InsuranceProduct insurance_from_json(const json& j, const std::string& path) {
    InsuranceProduct p;
    p.id = j.at("id").get<std::string>();
    p.name = j.value("name", p.id);
    p.covered_fraction = j.at("covered_fraction").get<std::map<std::string, double>>();
    p.price = keyed_from_json<double>(j.at("price"), path + ".price",
                                      [](const json& v, const std::string& vp) {
                                          if (!v.is_number())
                                              throw ConfigError(vp + ": expected a number");
                                          return v.get<double>();
                                      });
    return p;
}

std::string states_to_string(const std::vector<ControlState>& states) {
    std::string out;
    for (auto s : states) out.push_back(static_cast<char>('0' + static_cast<int>(s)));
    return out;
}

std::vector<ControlState> states_from_string(const std::string& digits, const std::string& path) {
    std::vector<ControlState> states;
    for (char c : digits) {
        if (c < '0' || c > '2')
            throw ConfigError(path + ": control-state digits must be 0, 1 or 2");
        states.push_back(static_cast<ControlState>(c - '0'));
    }
    return states;
}

} // namespace

const AttackTypeSpec* Scenario::find_attack_type(const std::string& type_id) const {
    for (const auto& t : attack_types)
        if (t.id == type_id) return &t;
    return nullptr;
}

const AttackTypeSpec& Scenario::attack_type(const std::string& type_id) const {
    const auto* t = find_attack_type(type_id);
    if (!t) throw ConfigError("unknown attack type '" + type_id + "'");
    return *t;
}

Portfolio Scenario::make_portfolio(const std::string& key) const {
    auto plus = key.find('+');
    std::string digits = key.substr(0, plus);
    Portfolio p;
    p.states = states_from_string(digits, "portfolio '" + key + "'");
    if (p.states.size() != catalog.controls.size())
        throw ConfigError("portfolio '" + key + "': expected " +
                          std::to_string(catalog.controls.size()) + " control-state digits");
    if (plus != std::string::npos) {
        p.insurance = key.substr(plus + 1);
        if (!insurance.find(p.insurance))
            throw ConfigError("portfolio '" + key + "': unknown insurance '" + p.insurance + "'");
    }
    return p;
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> errors;
    auto err = [&](const std::string& m) { errors.push_back(m); };

    if (id.empty()) err("scenario.id: empty");
    for (const auto& e : graph.validate()) err("graph: " + e);
    for (const auto& e : catalog.validate()) err("controls: " + e);

    std::set<std::string> category_ids;
    for (const auto& c : categories)
        if (!category_ids.insert(c.id).second) err("categories: duplicate id '" + c.id + "'");
    for (const auto& [cat, w] : category_weights) {
        if (!category_ids.count(cat)) err("category_weights: unknown category '" + cat + "'");
        if (w < 0) err("category_weights." + cat + ": negative weight");
    }

    std::set<std::string> insurance_ids;
    for (const auto& p : insurance.products) {
        if (!insurance_ids.insert(p.id).second) err("insurance: duplicate id '" + p.id + "'");
        for (const auto& [cat, f] : p.covered_fraction) {
            if (!category_ids.count(cat))
                err("insurance." + p.id + ": unknown category '" + cat + "'");
            if (f < 0 || f > 1)
                err("insurance." + p.id + "." + cat + ": covered fraction outside [0, 1]");
        }
        if (p.price.entries.empty()) err("insurance." + p.id + ".price: empty table");
        for (const auto& r : p.price.relevant)
            if (catalog.index_of(r) < 0)
                err("insurance." + p.id + ".price: unknown control '" + r + "'");
    }

    auto check_keyed_shape = [&](const auto& keyed, const std::string& path) {
        for (const auto& r : keyed.relevant)
            if (catalog.index_of(r) < 0) err(path + ": unknown control '" + r + "'");
        for (const auto& [key, value] : keyed.entries) {
            (void)value;
            if (keyed.relevant.empty()) {
                if (key != "*") err(path + ": portfolio-independent tables use key '*'");
            } else if (key.size() != catalog.controls.size()) {
                err(path + ": key '" + key + "' length != number of controls");
            }
        }
    };

    std::set<std::string> type_ids;
    auto n_blocks = static_cast<int>(graph.blocks.size());
    for (const auto& t : attack_types) {
        std::string path = "attack_types." + t.id;
        if (!type_ids.insert(t.id).second) err(path + ": duplicate id");
        if (t.entry_combos.empty()) err(path + ".entry_combos: empty");
        for (const auto& combo : t.entry_combos) {
            if (combo.empty()) err(path + ".entry_combos: empty combination");
            for (int b : combo)
                if (b < 0 || b >= n_blocks) err(path + ".entry_combos: block index out of range");
        }
        if (!t.targeted) {
            if (t.arrival.family != DistFamily::Poisson && t.arrival.family != DistFamily::PointMass)
                err(path + ".arrival: expected a count distribution");
            if (t.entry_weights && t.entry_weights->is_dirichlet() &&
                t.entry_weights->conc.size() != t.entry_combos.size())
                err(path + ".entry_weights: size != number of entry combinations");
        }
        check_keyed_shape(t.pnp, path + ".pnp");
        check_keyed_shape(t.impacts, path + ".impacts");
        if (t.pnp.entries.empty()) err(path + ".pnp: empty table");
        if (t.impacts.entries.empty()) err(path + ".impacts: empty table");
        for (const auto& [key, m] : t.pnp.entries) {
            for (const auto& [b, d] : m.entry) {
                (void)d;
                if (b < 0 || b >= n_blocks)
                    err(path + ".pnp." + key + ".entry: block index out of range");
            }
            for (const auto& [edge, d] : m.edge) {
                (void)d;
                auto [to, from] = edge;
                bool exists = std::find(graph.edges.begin(), graph.edges.end(),
                                        std::make_pair(from, to)) != graph.edges.end();
                if (!exists) err(path + ".pnp." + key + ".edges: no such graph edge");
            }
        }
        for (const auto& [key, table] : t.impacts.entries) {
            for (const auto& [cat, d] : table.global) {
                (void)d;
                if (!category_ids.count(cat))
                    err(path + ".impacts." + key + ": unknown category '" + cat + "'");
            }
            for (const auto& [cat, per_block] : table.separable) {
                if (!category_ids.count(cat))
                    err(path + ".impacts." + key + ": unknown category '" + cat + "'");
                for (const auto& [b, d] : per_block) {
                    (void)d;
                    if (b < 0 || b >= n_blocks)
                        err(path + ".impacts." + key + "." + cat + ": block index out of range");
                }
            }
        }
    }

    std::set<std::string> attacker_ids;
    for (const auto& a : attackers) {
        std::string path = "attackers." + a.id;
        if (!attacker_ids.insert(a.id).second) err(path + ": duplicate id");
        if (a.actions.empty()) err(path + ".actions: empty");
        for (std::size_t i = 0; i < a.actions.size(); ++i) {
            const auto& act = a.actions[i];
            std::string ap = path + ".actions[" + std::to_string(i) + "]";
            if (act.targets_us()) {
                const auto* t = find_attack_type(act.attack_type);
                if (!t) {
                    err(ap + ": unknown attack type '" + act.attack_type + "'");
                } else if (act.entry_combo < 0 ||
                           act.entry_combo >= static_cast<int>(t->entry_combos.size())) {
                    err(ap + ": entry_combo out of range for '" + act.attack_type + "'");
                }
            }
            check_keyed_shape(act.success, ap + ".success");
            check_keyed_shape(act.detect_prob, ap + ".detect_prob");
        }
    }

    for (const auto& cid : decision.free_controls)
        if (catalog.index_of(cid) < 0) err("decision.free_controls: unknown control '" + cid + "'");
    for (const auto& iid : decision.insurance_options)
        if (!insurance.find(iid)) err("decision.insurance_options: unknown insurance '" + iid + "'");
    if (decision.base.states.size() != catalog.controls.size())
        err("decision.base: state vector length != number of controls");
    for (const auto& iid : constraints.allowed_insurance)
        if (!insurance.find(iid))
            err("constraints.allowed_insurance: unknown insurance '" + iid + "'");
    for (const auto& cid : constraints.enforced_controls)
        if (catalog.index_of(cid) < 0)
            err("constraints.enforced_controls: unknown control '" + cid + "'");

    if (defaults.iterations < 1) err("defaults.iterations: must be >= 1");
    if (defaults.attacker_iterations < 1) err("defaults.attacker_iterations: must be >= 1");
    if (!(defaults.rho > 0)) err("defaults.rho: must be > 0");
    if (defaults.level < 0 || defaults.level >= 1) err("defaults.level: must be in [0, 1)");
    return errors;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["id"] = s.id;
    j["version"] = s.version;
    j["graph"] = graph_to_json(s.graph);

    json categories = json::array();
    for (const auto& c : s.categories) categories.push_back(category_to_json(c));
    j["categories"] = categories;
    j["category_weights"] = s.category_weights;

    json controls = json::array();
    for (const auto& c : s.catalog.controls) controls.push_back(control_to_json(c));
    j["controls"] = controls;

    json products = json::array();
    for (const auto& p : s.insurance.products) products.push_back(insurance_to_json(p));
    j["insurance"] = products;

    json constraints = json::object();
    if (s.constraints.total_budget) constraints["total_budget"] = *s.constraints.total_budget;
    if (s.constraints.implementation_budget)
        constraints["implementation_budget"] = *s.constraints.implementation_budget;
    if (s.constraints.maintenance_budget)
        constraints["maintenance_budget"] = *s.constraints.maintenance_budget;
    constraints["allowed_insurance"] = s.constraints.allowed_insurance;
    constraints["enforced_controls"] = s.constraints.enforced_controls;
    j["constraints"] = constraints;

    j["decision"] = {{"free_controls", s.decision.free_controls},
                     {"insurance_options", s.decision.insurance_options},
                     {"base", {{"states", states_to_string(s.decision.base.states)},
                               {"insurance", s.decision.base.insurance}}}};

    json types = json::array();
    for (const auto& t : s.attack_types) types.push_back(attack_type_to_json(t, s.graph));
    j["attack_types"] = types;

    json attackers = json::array();
    for (const auto& a : s.attackers) attackers.push_back(attacker_to_json(a));
    j["attackers"] = attackers;

    if (s.surrogate)
        j["surrogate"] = {{"s0", s.surrogate->s0},
                          {"t0", s.surrogate->t0},
                          {"shape", s.surrogate->shape}};

    j["defaults"] = {{"iterations", s.defaults.iterations},
                     {"attacker_iterations", s.defaults.attacker_iterations},
                     {"rho", s.defaults.rho},
                     {"level", s.defaults.level},
                     {"seed", s.defaults.seed}};
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }

    Scenario s;
    try {
        s.id = j.at("id").get<std::string>();
        s.version = j.value("version", "1");
        s.graph = graph_from_json(j.at("graph"), "graph");

        std::size_t i = 0;
        for (const auto& c : j.at("categories"))
            s.categories.push_back(
                category_from_json(c, "categories[" + std::to_string(i++) + "]"));
        if (j.contains("category_weights"))
            s.category_weights = j.at("category_weights").get<std::map<std::string, double>>();
        for (const auto& c : s.categories)
            if (!s.category_weights.count(c.id)) s.category_weights[c.id] = 1.0;

        for (const auto& c : j.at("controls"))
            s.catalog.controls.push_back(control_from_json(c));

        i = 0;
        for (const auto& p : j.value("insurance", json::array()))
            s.insurance.products.push_back(
                insurance_from_json(p, "insurance[" + std::to_string(i++) + "]"));

        if (j.contains("constraints")) {
            const auto& c = j.at("constraints");
            if (c.contains("total_budget"))
                s.constraints.total_budget = c.at("total_budget").get<double>();
            if (c.contains("implementation_budget"))
                s.constraints.implementation_budget = c.at("implementation_budget").get<double>();
            if (c.contains("maintenance_budget"))
                s.constraints.maintenance_budget = c.at("maintenance_budget").get<double>();
            if (c.contains("allowed_insurance"))
                s.constraints.allowed_insurance =
                    c.at("allowed_insurance").get<std::vector<std::string>>();
            if (c.contains("enforced_controls"))
                s.constraints.enforced_controls =
                    c.at("enforced_controls").get<std::vector<std::string>>();
        }

        if (j.contains("decision")) {
            const auto& d = j.at("decision");
            s.decision.free_controls = d.value("free_controls", std::vector<std::string>{});
            s.decision.insurance_options = d.value("insurance_options", std::vector<std::string>{});
            if (d.contains("base")) {
                s.decision.base.states = states_from_string(
                    d.at("base").value("states", std::string()), "decision.base.states");
                s.decision.base.insurance = d.at("base").value("insurance", std::string());
            }
        }
        if (s.decision.base.states.empty())
            s.decision.base.states.assign(s.catalog.controls.size(), ControlState::Absent);

        i = 0;
        for (const auto& t : j.at("attack_types"))
            s.attack_types.push_back(
                attack_type_from_json(t, s.graph, "attack_types[" + std::to_string(i++) + "]"));

        i = 0;
        for (const auto& a : j.value("attackers", json::array()))
            s.attackers.push_back(
                attacker_from_json(a, "attackers[" + std::to_string(i++) + "]"));

        if (j.contains("surrogate")) {
            SurrogateModel m;
            m.s0 = j.at("surrogate").at("s0").get<double>();
            m.t0 = j.at("surrogate").at("t0").get<double>();
            m.shape = j.at("surrogate").at("shape").get<double>();
            s.surrogate = m;
        }

        if (j.contains("defaults")) {
            const auto& d = j.at("defaults");
            s.defaults.iterations = d.value("iterations", s.defaults.iterations);
            s.defaults.attacker_iterations =
                d.value("attacker_iterations", s.defaults.attacker_iterations);
            s.defaults.rho = d.value("rho", s.defaults.rho);
            s.defaults.level = d.value("level", s.defaults.level);
            s.defaults.seed = d.value("seed", s.defaults.seed);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }

    auto errors = s.validate();
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "scenario '" << s.id << "' is invalid:";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file '" + path + "'");
    out << scenario_to_json(s);
}

} // namespace cyrisk
