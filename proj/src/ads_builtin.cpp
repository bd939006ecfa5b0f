#include "cyrisk/scenario.hpp"

// Bundled automated-driving-system case study. Control order everywhere is
// FwGw, AML, PmVs, so portfolio subset keys read as FwGw/AML/PmVs digits.

namespace cyrisk {

namespace {

constexpr int P = 0; // perception block
constexpr int L = 1; // location block
constexpr int D = 2; // decision block

DistSpec B(double a, double b) { return DistSpec::beta(a, b); }
DistSpec G(double shape, double scale) { return DistSpec::gamma(shape, scale); }
DistSpec U(double lo, double hi) { return DistSpec::uniform(lo, hi); }
DistSpec Po(double rate) { return DistSpec::poisson(rate); }

template <class T>
PortfolioKeyed<T> keyed(std::vector<std::string> relevant, std::map<std::string, T> entries) {
    PortfolioKeyed<T> k;
    k.relevant = std::move(relevant);
    k.entries = std::move(entries);
    return k;
}

template <class T>
PortfolioKeyed<T> fixed(T value) {
    return keyed<T>({}, {{"*", std::move(value)}});
}

// One PNP row: entry betas for P and L, edge betas for P->D and L->D.
PnpModel pnp_row(DistSpec qP, DistSpec qL, DistSpec qDP, DistSpec qDL) {
    PnpModel m;
    m.entry.emplace(P, std::move(qP));
    m.entry.emplace(L, std::move(qL));
    m.edge.emplace(std::make_pair(D, P), std::move(qDP));
    m.edge.emplace(std::make_pair(D, L), std::move(qDL));
    return m;
}

std::map<int, DistSpec> per_block(DistSpec p, DistSpec l, DistSpec d) {
    return {{P, std::move(p)}, {L, std::move(l)}, {D, std::move(d)}};
}

AttackTypeSpec dos_attack() {
    AttackTypeSpec t;
    t.id = "dos";
    t.name = "denial of service";
    t.arrival = Po(32);
    t.entry_combos = {{P}, {L}, {P, L}};
    t.entry_weights = DistSpec::dirichlet({4, 8, 1});
    t.pnp = keyed<PnpModel>({"fwgw", "pmvs"},
                            {{"000", pnp_row(B(27, 3), B(26, 3), B(25, 3), B(24, 3))},
                             {"100", pnp_row(B(5, 65), B(4, 65), B(3, 65), B(2, 65))},
                             {"001", pnp_row(B(5, 95), B(4, 95), B(3, 95), B(2, 95))},
                             {"101", pnp_row(B(5, 125), B(4, 125), B(3, 125), B(2, 125))}});

    auto impacts = [](DistSpec fi, DistSpec dtP, DistSpec dtL, DistSpec dtD) {
        ImpactTable it;
        it.global.emplace("financial", std::move(fi));
        it.separable.emplace("downtime",
                             per_block(std::move(dtP), std::move(dtL), std::move(dtD)));
        return it;
    };
    t.impacts = keyed<ImpactTable>(
        {"fwgw", "pmvs"},
        {{"000", impacts(G(7, 3), G(14, 2), G(15, 2), G(18, 3))},
         {"100", impacts(G(6, 3), G(12, 2), G(13, 2), G(16, 3))},
         {"001", impacts(G(4, 3), G(9, 2), G(10, 2), G(13, 3))},
         {"101", impacts(G(3, 3), G(8, 2), G(9, 2), G(12, 3))}});
    return t;
}

AttackTypeSpec sct_attack() {
    AttackTypeSpec t;
    t.id = "sct";
    t.name = "supply chain threat";
    t.arrival = Po(2.75);
    t.entry_combos = {{P}, {L}, {P, L}};
    t.entry_weights = DistSpec::dirichlet({5, 5, 1});
    t.pnp = keyed<PnpModel>({"fwgw", "aml", "pmvs"},
                            {{"000", pnp_row(B(35, 3), B(33, 3), B(32, 3), B(31, 3))},
                             {"100", pnp_row(B(5, 10), B(4, 10), B(3, 10), B(2, 10))},
                             {"010", pnp_row(B(5, 45), B(4, 45), B(3, 45), B(2, 45))},
                             {"001", pnp_row(B(5, 30), B(5, 30), B(3, 30), B(2, 30))},
                             {"110", pnp_row(B(5, 75), B(4, 75), B(3, 75), B(2, 75))},
                             {"011", pnp_row(B(5, 105), B(4, 105), B(3, 105), B(2, 105))},
                             {"101", pnp_row(B(5, 90), B(4, 90), B(3, 90), B(2, 90))},
                             {"111", pnp_row(B(5, 125), B(4, 125), B(3, 125), B(2, 125))}});

    auto impacts = [](DistSpec fi, DistSpec edP, DistSpec edL, DistSpec edD, DistSpec dtP,
                      DistSpec dtL, DistSpec dtD) {
        ImpactTable it;
        it.global.emplace("financial", std::move(fi));
        it.separable.emplace("equipment",
                             per_block(std::move(edP), std::move(edL), std::move(edD)));
        it.separable.emplace("downtime",
                             per_block(std::move(dtP), std::move(dtL), std::move(dtD)));
        return it;
    };
    t.impacts = keyed<ImpactTable>(
        {"fwgw", "aml", "pmvs"},
        {{"000", impacts(G(10, 2), G(9, 2), G(8, 2), G(10, 2), G(17, 2), G(14, 2), G(16, 2))},
         {"100", impacts(G(8, 2), G(8, 2), G(7, 2), G(9, 2), G(12, 2), G(11, 2), G(13, 2))},
         {"010", impacts(G(6, 2), G(6, 2), G(5, 2), G(7, 2), G(10, 2), G(9, 2), G(11, 2))},
         {"001", impacts(G(7, 2), G(7, 2), G(6, 2), G(8, 2), G(11, 2), G(10, 2), G(12, 2))},
         {"110", impacts(G(3, 1), G(4, 2), G(3, 2), G(5, 2), G(4, 2), G(5, 2), G(6, 2))},
         {"011", impacts(G(2, 1), G(3, 2), G(2, 2), G(4, 2), G(3, 2), G(4, 2), G(5, 2))},
         {"101", impacts(G(4, 1), G(5, 2), G(4, 2), G(6, 2), G(5, 2), G(6, 2), G(7, 2))},
         {"111", impacts(G(1, 1), G(2, 1), G(1, 1), G(3, 1), G(1, 2), G(2, 2), G(3, 2))}});
    return t;
}

ImpactTable full_impacts(DistSpec fi, DistSpec edP, DistSpec edL, DistSpec edD, DistSpec dtP,
                         DistSpec dtL, DistSpec dtD) {
    ImpactTable it;
    it.global.emplace("financial", std::move(fi));
    it.separable.emplace("equipment", per_block(std::move(edP), std::move(edL), std::move(edD)));
    it.separable.emplace("downtime", per_block(std::move(dtP), std::move(dtL), std::move(dtD)));
    return it;
}

AttackTypeSpec cy_aml_attack() {
    AttackTypeSpec t;
    t.id = "cy_aml";
    t.name = "adversarial machine learning (competitor)";
    t.targeted = true;
    t.entry_combos = {{P}, {L}, {P, L}};
    t.pnp = keyed<PnpModel>({"aml"},
                            {{"000", pnp_row(B(72, 3), B(73, 3), B(74, 3), B(75, 3))},
                             {"010", pnp_row(B(5, 195), B(4, 195), B(3, 195), B(2, 195))}});
    t.impacts = keyed<ImpactTable>(
        {"aml"},
        {{"000",
          full_impacts(G(12, 2), G(6, 2), G(7, 2), G(6, 3), G(30, 2), G(36, 2), G(45, 2))},
         {"010", full_impacts(G(2, 2), G(1, 2), G(1, 2), G(1, 3), G(2, 2), G(3, 1), G(4, 2))}});
    return t;
}

AttackTypeSpec cy_wjam_attack() {
    AttackTypeSpec t;
    t.id = "cy_wjam";
    t.name = "wireless jamming (competitor)";
    t.targeted = true;
    t.entry_combos = {{P}, {L}, {P, L}};
    t.pnp = keyed<PnpModel>({"fwgw", "pmvs"},
                            {{"000", pnp_row(B(8, 3), B(9, 4), B(10, 3), B(11, 3))},
                             {"100", pnp_row(B(5, 60), B(4, 60), B(3, 60), B(3, 60))},
                             {"001", pnp_row(B(5, 95), B(4, 95), B(4, 90), B(3, 90))},
                             {"101", pnp_row(B(5, 115), B(4, 115), B(3, 115), B(2, 115))}});
    t.impacts = keyed<ImpactTable>(
        {"fwgw", "pmvs"},
        {{"000",
          full_impacts(G(13, 2), G(4, 2), G(4, 2), G(5, 2), G(22, 2), G(21, 2), G(23, 2))},
         {"100",
          full_impacts(G(6, 2), G(3, 2), G(3, 2), G(4, 2), G(16, 2), G(15, 2), G(17, 2))},
         {"001", full_impacts(G(3, 2), G(2, 2), G(2, 2), G(2, 2), G(9, 2), G(8, 2), G(10, 2))},
         {"101", full_impacts(G(1, 1), G(1, 2), G(1, 2), G(1, 2), G(2, 2), G(2, 2), G(3, 2))}});
    return t;
}

AttackTypeSpec cr_aml_attack() {
    AttackTypeSpec t;
    t.id = "cr_aml";
    t.name = "adversarial machine learning (criminal)";
    t.targeted = true;
    t.entry_combos = {{P}, {L}, {P, L}};
    t.pnp = keyed<PnpModel>({"aml"},
                            {{"000", pnp_row(B(16, 5), B(15, 5), B(22, 5), B(20, 5))},
                             {"010", pnp_row(B(5, 245), B(4, 245), B(3, 245), B(2, 245))}});

    auto impacts = [](DistSpec fi, DistSpec edP, DistSpec edL, DistSpec edD) {
        ImpactTable it;
        it.global.emplace("financial", std::move(fi));
        it.separable.emplace("equipment",
                             per_block(std::move(edP), std::move(edL), std::move(edD)));
        return it;
    };
    t.impacts =
        keyed<ImpactTable>({"aml"}, {{"000", impacts(G(10, 2), G(5, 2), G(5, 2), G(4, 2))},
                                     {"010", impacts(G(2, 2), G(1, 2), G(1, 2), G(1, 3))}});
    return t;
}

// Notoriety gain of the competitor when hitting us: financial impact scaled
// by omega (Keuros) and casualties Poisson(omega * 25) valued at the VSL.
GainModel our_notoriety(PortfolioKeyed<DistSpec> financial, PortfolioKeyed<DistSpec> casualties) {
    GainModel g;
    g.kind = GainModel::Kind::Notoriety;
    g.financial = std::move(financial);
    g.casualties = std::move(casualties);
    g.vsl = 6e6;
    g.financial_unit = 1000;
    return g;
}

AttackerSpec competitor() {
    AttackerSpec a;
    a.id = "competitor";
    a.name = "competitor attacker";
    a.arrival = Po(4);
    a.risk_proneness = U(1e-6, 2e-6);

    DistSpec det_cost = U(100000, 130000);

    // omega: 1 / 0.2 for AML with/without the AML control active.
    GainModel aml_gain = our_notoriety(
        keyed<DistSpec>({"aml"}, {{"000", G(8, 3)}, {"010", G(1.6, 3)}}),
        keyed<DistSpec>({"aml"}, {{"000", Po(25)}, {"010", Po(5)}}));
    // omega: 0.8 / 0.6 / 0.4 / 0.2 as firewall-gateway and physical measures
    // come online.
    GainModel wjam_gain = our_notoriety(
        keyed<DistSpec>({"fwgw", "pmvs"},
                        {{"000", G(6.4, 3)}, {"100", G(4.8, 3)}, {"001", G(3.2, 3)},
                         {"101", G(1.6, 3)}}),
        keyed<DistSpec>({"fwgw", "pmvs"},
                        {{"000", Po(20)}, {"100", Po(15)}, {"001", Po(10)}, {"101", Po(5)}}));
    GainModel aml_other = our_notoriety(fixed(G(7.2, 2.7)), fixed(Po(22.5)));
    GainModel wjam_other = our_notoriety(fixed(G(5.6, 2.1)), fixed(Po(17.5)));

    auto aml_success = [](DistSpec d000, DistSpec d010) {
        return keyed<DistSpec>({"aml"}, {{"000", std::move(d000)}, {"010", std::move(d010)}});
    };
    auto wjam_success = [](DistSpec d000, DistSpec d100_001, DistSpec d101) {
        return keyed<DistSpec>({"fwgw", "pmvs"}, {{"000", std::move(d000)},
                                                  {"100", d100_001},
                                                  {"001", std::move(d100_001)},
                                                  {"101", std::move(d101)}});
    };

    auto our_action = [&](const std::string& type, int combo, PortfolioKeyed<DistSpec> success,
                          DistSpec detect, const GainModel& gain) {
        AttackerAction act;
        act.attack_type = type;
        act.entry_combo = combo;
        act.success = std::move(success);
        act.detect_prob = fixed(std::move(detect));
        act.detect_cost = det_cost;
        act.gain = gain;
        return act;
    };
    auto other_action = [&](const std::string& type, const std::string& system, DistSpec detect,
                            const GainModel& gain) {
        AttackerAction act;
        act.attack_type = type;
        act.other_system = system;
        act.success = fixed(B(1, 1));
        act.detect_prob = fixed(std::move(detect));
        act.detect_cost = det_cost;
        act.gain = gain;
        return act;
    };

    a.actions = {
        our_action("cy_aml", 0, aml_success(B(75, 25), B(15, 85)), B(2, 998), aml_gain),
        our_action("cy_aml", 1, aml_success(B(75, 25), B(15, 85)), B(2, 998), aml_gain),
        our_action("cy_aml", 2, aml_success(B(90, 10), B(10, 90)), B(1, 99), aml_gain),
        our_action("cy_wjam", 0, wjam_success(B(60, 40), B(25, 75), B(5, 95)), B(1, 999),
                   wjam_gain),
        our_action("cy_wjam", 1, wjam_success(B(60, 40), B(25, 75), B(5, 95)), B(1, 999),
                   wjam_gain),
        our_action("cy_wjam", 2, wjam_success(B(70, 30), B(35, 65), B(15, 85)), B(5, 995),
                   wjam_gain),
        other_action("cy_aml", "competitor_2", B(6, 994), aml_other),
        other_action("cy_aml", "competitor_3", B(6, 994), aml_other),
        other_action("cy_wjam", "competitor_2", B(6, 994), wjam_other),
        other_action("cy_wjam", "competitor_3", B(6, 994), wjam_other),
    };
    return a;
}

AttackerSpec cybercriminal() {
    AttackerSpec a;
    a.id = "cybercriminal";
    a.name = "cybercriminal attacker";
    a.arrival = Po(3);
    a.risk_proneness = U(1e-6, 2e-6);

    DistSpec det_cost = U(100000, 130000);

    GainModel our_records;
    our_records.kind = GainModel::Kind::Records;
    our_records.record_count =
        keyed<DistSpec>({"aml"}, {{"000", U(0, 660)}, {"010", U(0, 360)}});
    our_records.record_value = U(80, 120);

    GainModel other_records;
    other_records.kind = GainModel::Kind::Records;
    other_records.record_count = fixed(U(0, 600));
    other_records.record_value = U(80, 120);

    auto success = [](DistSpec d000, DistSpec d010) {
        return keyed<DistSpec>({"aml"}, {{"000", std::move(d000)}, {"010", std::move(d010)}});
    };
    auto our_action = [&](int combo, PortfolioKeyed<DistSpec> s, DistSpec detect) {
        AttackerAction act;
        act.attack_type = "cr_aml";
        act.entry_combo = combo;
        act.success = std::move(s);
        act.detect_prob = fixed(std::move(detect));
        act.detect_cost = det_cost;
        act.gain = our_records;
        return act;
    };
    auto other_action = [&](const std::string& system) {
        AttackerAction act;
        act.attack_type = "cr_aml";
        act.other_system = system;
        act.success = fixed(B(1, 1));
        act.detect_prob = fixed(B(4, 996));
        act.detect_cost = det_cost;
        act.gain = other_records;
        return act;
    };

    a.actions = {
        our_action(0, success(B(65, 35), B(15, 85)), B(3, 997)),
        our_action(1, success(B(65, 35), B(15, 85)), B(3, 997)),
        our_action(2, success(B(80, 20), B(25, 75)), B(5, 995)),
        other_action("company_2"),
        other_action("company_3"),
    };
    return a;
}

} // namespace

Scenario builtin_ads_scenario() {
    Scenario s;
    s.id = "ads";
    s.version = "1";

    s.graph.blocks = {{"P", "perception", 1, true, {}},
                      {"L", "location", 1, true, {}},
                      {"D", "decision", 2, false, {}}};
    s.graph.edges = {{P, D}, {L, D}};
    s.graph.levels = 2;

    s.categories = {
        {"financial", "financial impact", ImpactScope::Global, ImpactAggregation::Sum, 1000},
        {"equipment", "equipment damage", ImpactScope::Separable, ImpactAggregation::Sum, 1000},
        {"downtime", "downtime", ImpactScope::Separable, ImpactAggregation::Max, 100}};
    s.category_weights = {{"financial", 1.0}, {"equipment", 1.0}, {"downtime", 1.0}};

    s.catalog.controls = {
        {"fwgw", "firewall and gateway", 1250, 0, 0, 0, {"dos", "sct", "cy_wjam"}},
        {"aml", "adversarial ML defences", 300, 0, 0, 0, {"sct", "cy_aml", "cr_aml"}},
        {"pmvs", "physical measures for vehicle security", 1750, 0, 0, 0,
         {"dos", "sct", "cy_wjam"}}};

    InsuranceProduct a;
    a.id = "A";
    a.name = "equipment cover";
    a.covered_fraction = {{"equipment", 0.65}};
    a.price = keyed<double>({"fwgw", "aml", "pmvs"},
                            {{"000", 600}, {"100", 500}, {"010", 500}, {"001", 500},
                             {"110", 250}, {"101", 250}, {"011", 250}, {"111", 150}});
    InsuranceProduct b;
    b.id = "B";
    b.name = "equipment and downtime cover";
    b.covered_fraction = {{"equipment", 0.7}, {"downtime", 0.7}};
    b.price = keyed<double>({"fwgw", "aml", "pmvs"},
                            {{"000", 1800}, {"100", 1600}, {"010", 1600}, {"001", 1600},
                             {"110", 1400}, {"101", 1400}, {"011", 1400}, {"111", 1000}});
    s.insurance.products = {a, b};

    s.constraints.total_budget = 3400;
    s.constraints.allowed_insurance = {"A", "B"};

    s.decision.free_controls = {"fwgw", "aml", "pmvs"};
    s.decision.insurance_options = {"A", "B"};
    s.decision.base.states = {ControlState::Absent, ControlState::Absent, ControlState::Absent};

    s.attack_types = {dos_attack(), sct_attack(), cy_aml_attack(), cy_wjam_attack(),
                      cr_aml_attack()};
    s.attackers = {competitor(), cybercriminal()};

    s.defaults = ScenarioDefaults{};
    return s;
}

} // namespace cyrisk
