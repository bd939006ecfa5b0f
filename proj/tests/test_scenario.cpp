#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cyrisk/export.hpp"
#include "cyrisk/risk.hpp"

using namespace cyrisk;

namespace {

void check_dist(const DistSpec& d, DistFamily family, double a, double b) {
    CHECK(d.family == family);
    CHECK(d.a == a);
    CHECK(d.b == b);
}

struct PnpRow {
    const char* key;
    double cell[4][2]; // entry P, entry L, edge P->D, edge L->D as beta (a, b)
};

void check_pnp_rows(const AttackTypeSpec& t, const std::vector<PnpRow>& rows) {
    REQUIRE(t.pnp.entries.size() == rows.size());
    for (const auto& row : rows) {
        CAPTURE(row.key);
        const auto& m = t.pnp.entries.at(row.key);
        check_dist(m.entry.at(0), DistFamily::Beta, row.cell[0][0], row.cell[0][1]);
        check_dist(m.entry.at(1), DistFamily::Beta, row.cell[1][0], row.cell[1][1]);
        check_dist(m.edge.at({2, 0}), DistFamily::Beta, row.cell[2][0], row.cell[2][1]);
        check_dist(m.edge.at({2, 1}), DistFamily::Beta, row.cell[3][0], row.cell[3][1]);
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bundled scenario structure") {
    auto s = builtin_ads_scenario();
    CHECK(s.id == "ads");
    REQUIRE(s.graph.blocks.size() == 3);
    CHECK(s.graph.blocks[0].id == "P");
    CHECK(s.graph.blocks[1].id == "L");
    CHECK(s.graph.blocks[2].id == "D");
    CHECK(s.graph.blocks[0].entry_capable);
    CHECK(s.graph.blocks[1].entry_capable);
    CHECK_FALSE(s.graph.blocks[2].entry_capable);
    CHECK(s.graph.edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});
    CHECK(s.graph.levels == 2);

    REQUIRE(s.categories.size() == 3);
    CHECK(s.categories[0].unit_to_euros == 1000); // financial in Keuros
    CHECK(s.categories[1].unit_to_euros == 1000); // equipment in Keuros
    CHECK(s.categories[2].unit_to_euros == 100);  // downtime in hours
    CHECK(s.categories[2].aggregation == ImpactAggregation::Max);
    for (const auto& [cat, w] : s.category_weights) {
        CAPTURE(cat);
        CHECK(w == 1.0);
    }

    REQUIRE(s.attack_types.size() == 5);
    int targeted = 0;
    for (const auto& t : s.attack_types) targeted += t.targeted;
    CHECK(targeted == 3);
    REQUIRE(s.attackers.size() == 2);
    CHECK(s.attackers[0].actions.size() == 10);
    CHECK(s.attackers[1].actions.size() == 5);

    CHECK(s.defaults.iterations == 10000);
    CHECK(s.defaults.attacker_iterations == 10000);
    CHECK(s.defaults.rho == 1e-7);
    CHECK(s.defaults.level == 0.95);
    CHECK(s.defaults.seed == 20240905);

    CHECK(s.validate().empty());
}

TEST_CASE("control catalog cells") {
    auto s = builtin_ads_scenario();
    REQUIRE(s.catalog.controls.size() == 3);
    const double icosts[] = {1250, 300, 1750};
    const char* ids[] = {"fwgw", "aml", "pmvs"};
    for (int i = 0; i < 3; ++i) {
        CAPTURE(i);
        CHECK(s.catalog.controls[static_cast<std::size_t>(i)].id == ids[i]);
        CHECK(s.catalog.controls[static_cast<std::size_t>(i)].icost == icosts[i]);
        CHECK(s.catalog.controls[static_cast<std::size_t>(i)].mcost == 0);
    }
    CHECK(s.catalog.counters_attack("fwgw", "dos"));
    CHECK(s.catalog.counters_attack("fwgw", "cy_wjam"));
    CHECK_FALSE(s.catalog.counters_attack("fwgw", "cy_aml"));
    CHECK(s.catalog.counters_attack("aml", "cy_aml"));
    CHECK(s.catalog.counters_attack("aml", "cr_aml"));
    CHECK(s.catalog.counters_attack("pmvs", "sct"));
}

TEST_CASE("insurance product cells") {
    auto s = builtin_ads_scenario();
    const auto& a = s.insurance.at("A");
    const auto& b = s.insurance.at("B");

    CHECK(a.coverage("equipment") == 0.65);
    CHECK(a.coverage("downtime") == 0.0);
    CHECK(b.coverage("equipment") == 0.7);
    CHECK(b.coverage("downtime") == 0.7);

    struct Price {
        const char* key;
        double a, b;
    };
    const std::vector<Price> prices = {{"000", 600, 1800}, {"100", 500, 1600}, {"010", 500, 1600},
                                       {"001", 500, 1600}, {"110", 250, 1400}, {"101", 250, 1400},
                                       {"011", 250, 1400}, {"111", 150, 1000}};
    for (const auto& p : prices) {
        CAPTURE(p.key);
        CHECK(a.price.entries.at(p.key) == p.a);
        CHECK(b.price.entries.at(p.key) == p.b);
    }
}

TEST_CASE("denial-of-service tables cell by cell") {
    auto s = builtin_ads_scenario();
    const auto& t = s.attack_type("dos");
    CHECK_FALSE(t.targeted);
    check_dist(t.arrival, DistFamily::Poisson, 32, 0);
    CHECK(t.entry_combos == std::vector<std::vector<int>>{{0}, {1}, {0, 1}});
    REQUIRE(t.entry_weights);
    CHECK(t.entry_weights->conc == std::vector<double>{4, 8, 1});

    check_pnp_rows(t, {{"000", {{27, 3}, {26, 3}, {25, 3}, {24, 3}}},
                       {"100", {{5, 65}, {4, 65}, {3, 65}, {2, 65}}},
                       {"001", {{5, 95}, {4, 95}, {3, 95}, {2, 95}}},
                       {"101", {{5, 125}, {4, 125}, {3, 125}, {2, 125}}}});

    struct Row {
        const char* key;
        double fi[2], dt[3][2];
    };
    const std::vector<Row> rows = {{"000", {7, 3}, {{14, 2}, {15, 2}, {18, 3}}},
                                   {"100", {6, 3}, {{12, 2}, {13, 2}, {16, 3}}},
                                   {"001", {4, 3}, {{9, 2}, {10, 2}, {13, 3}}},
                                   {"101", {3, 3}, {{8, 2}, {9, 2}, {12, 3}}}};
    REQUIRE(t.impacts.entries.size() == 4);
    for (const auto& r : rows) {
        CAPTURE(r.key);
        const auto& it = t.impacts.entries.at(r.key);
        check_dist(it.global.at("financial"), DistFamily::Gamma, r.fi[0], r.fi[1]);
        CHECK(it.separable.count("equipment") == 0); // no equipment damage from DoS
        for (int b = 0; b < 3; ++b)
            check_dist(it.separable.at("downtime").at(b), DistFamily::Gamma, r.dt[b][0],
                       r.dt[b][1]);
    }
}

TEST_CASE("supply-chain tables cell by cell") {
    auto s = builtin_ads_scenario();
    const auto& t = s.attack_type("sct");
    check_dist(t.arrival, DistFamily::Poisson, 2.75, 0);
    REQUIRE(t.entry_weights);
    CHECK(t.entry_weights->conc == std::vector<double>{5, 5, 1});
    CHECK(t.pnp.relevant == std::vector<std::string>{"fwgw", "aml", "pmvs"});

    check_pnp_rows(t, {{"000", {{35, 3}, {33, 3}, {32, 3}, {31, 3}}},
                       {"100", {{5, 10}, {4, 10}, {3, 10}, {2, 10}}},
                       {"010", {{5, 45}, {4, 45}, {3, 45}, {2, 45}}},
                       {"001", {{5, 30}, {5, 30}, {3, 30}, {2, 30}}},
                       {"110", {{5, 75}, {4, 75}, {3, 75}, {2, 75}}},
                       {"011", {{5, 105}, {4, 105}, {3, 105}, {2, 105}}},
                       {"101", {{5, 90}, {4, 90}, {3, 90}, {2, 90}}},
                       {"111", {{5, 125}, {4, 125}, {3, 125}, {2, 125}}}});

    struct Row {
        const char* key;
        double fi[2], ed[3][2], dt[3][2];
    };
    const std::vector<Row> rows = {
        {"000", {10, 2}, {{9, 2}, {8, 2}, {10, 2}}, {{17, 2}, {14, 2}, {16, 2}}},
        {"100", {8, 2}, {{8, 2}, {7, 2}, {9, 2}}, {{12, 2}, {11, 2}, {13, 2}}},
        {"010", {6, 2}, {{6, 2}, {5, 2}, {7, 2}}, {{10, 2}, {9, 2}, {11, 2}}},
        {"001", {7, 2}, {{7, 2}, {6, 2}, {8, 2}}, {{11, 2}, {10, 2}, {12, 2}}},
        {"110", {3, 1}, {{4, 2}, {3, 2}, {5, 2}}, {{4, 2}, {5, 2}, {6, 2}}},
        {"011", {2, 1}, {{3, 2}, {2, 2}, {4, 2}}, {{3, 2}, {4, 2}, {5, 2}}},
        {"101", {4, 1}, {{5, 2}, {4, 2}, {6, 2}}, {{5, 2}, {6, 2}, {7, 2}}},
        {"111", {1, 1}, {{2, 1}, {1, 1}, {3, 1}}, {{1, 2}, {2, 2}, {3, 2}}},
    };
    REQUIRE(t.impacts.entries.size() == 8);
    for (const auto& r : rows) {
        CAPTURE(r.key);
        const auto& it = t.impacts.entries.at(r.key);
        check_dist(it.global.at("financial"), DistFamily::Gamma, r.fi[0], r.fi[1]);
        for (int b = 0; b < 3; ++b) {
            check_dist(it.separable.at("equipment").at(b), DistFamily::Gamma, r.ed[b][0],
                       r.ed[b][1]);
            check_dist(it.separable.at("downtime").at(b), DistFamily::Gamma, r.dt[b][0],
                       r.dt[b][1]);
        }
    }
}

TEST_CASE("targeted attack-type tables cell by cell") {
    auto s = builtin_ads_scenario();

    const auto& aml = s.attack_type("cy_aml");
    CHECK(aml.targeted);
    CHECK(aml.pnp.relevant == std::vector<std::string>{"aml"});
    check_pnp_rows(aml, {{"000", {{72, 3}, {73, 3}, {74, 3}, {75, 3}}},
                         {"010", {{5, 195}, {4, 195}, {3, 195}, {2, 195}}}});
    check_dist(aml.impacts.entries.at("000").global.at("financial"), DistFamily::Gamma, 12, 2);
    check_dist(aml.impacts.entries.at("000").separable.at("downtime").at(2), DistFamily::Gamma,
               45, 2);
    check_dist(aml.impacts.entries.at("010").global.at("financial"), DistFamily::Gamma, 2, 2);

    const auto& wjam = s.attack_type("cy_wjam");
    check_pnp_rows(wjam, {{"000", {{8, 3}, {9, 4}, {10, 3}, {11, 3}}},
                          {"100", {{5, 60}, {4, 60}, {3, 60}, {3, 60}}},
                          {"001", {{5, 95}, {4, 95}, {4, 90}, {3, 90}}},
                          {"101", {{5, 115}, {4, 115}, {3, 115}, {2, 115}}}});
    check_dist(wjam.impacts.entries.at("000").global.at("financial"), DistFamily::Gamma, 13, 2);
    check_dist(wjam.impacts.entries.at("101").global.at("financial"), DistFamily::Gamma, 1, 1);
    check_dist(wjam.impacts.entries.at("000").separable.at("downtime").at(0), DistFamily::Gamma,
               22, 2);

    const auto& cr = s.attack_type("cr_aml");
    check_pnp_rows(cr, {{"000", {{16, 5}, {15, 5}, {22, 5}, {20, 5}}},
                        {"010", {{5, 245}, {4, 245}, {3, 245}, {2, 245}}}});
    check_dist(cr.impacts.entries.at("000").global.at("financial"), DistFamily::Gamma, 10, 2);
    CHECK(cr.impacts.entries.at("000").separable.count("downtime") == 0);
    check_dist(cr.impacts.entries.at("010").separable.at("equipment").at(2), DistFamily::Gamma, 1,
               3);
}

TEST_CASE("competitor attacker cells") {
    auto s = builtin_ads_scenario();
    const auto& a = s.attackers[0];
    CHECK(a.id == "competitor");
    check_dist(a.arrival, DistFamily::Poisson, 4, 0);
    check_dist(a.risk_proneness, DistFamily::Uniform, 1e-6, 2e-6);
    CHECK(a.our_attack_types() == std::vector<std::string>{"cy_aml", "cy_wjam"});
    CHECK(a.other_systems() == std::vector<std::string>{"competitor_2", "competitor_3"});

    // AML actions: success 0.75 -> 0.15 when the AML control is on
    for (int i : {0, 1}) {
        CAPTURE(i);
        const auto& act = a.actions[static_cast<std::size_t>(i)];
        CHECK(act.attack_type == "cy_aml");
        CHECK(act.entry_combo == i);
        check_dist(act.success.entries.at("000"), DistFamily::Beta, 75, 25);
        check_dist(act.success.entries.at("010"), DistFamily::Beta, 15, 85);
        check_dist(act.detect_prob.entries.at("*"), DistFamily::Beta, 2, 998);
    }
    check_dist(a.actions[2].success.entries.at("000"), DistFamily::Beta, 90, 10);
    check_dist(a.actions[2].detect_prob.entries.at("*"), DistFamily::Beta, 1, 99);

    // jamming gain: omega 0.8 / 0.6 / 0.4 / 0.2 as fwgw and pmvs come online
    const auto& wg = a.actions[3].gain;
    CHECK(wg.vsl == 6e6);
    CHECK(wg.financial_unit == 1000);
    check_dist(wg.financial.entries.at("000"), DistFamily::Gamma, 6.4, 3);
    check_dist(wg.financial.entries.at("100"), DistFamily::Gamma, 4.8, 3);
    check_dist(wg.financial.entries.at("001"), DistFamily::Gamma, 3.2, 3);
    check_dist(wg.financial.entries.at("101"), DistFamily::Gamma, 1.6, 3);
    check_dist(wg.casualties.entries.at("000"), DistFamily::Poisson, 20, 0);
    check_dist(wg.casualties.entries.at("101"), DistFamily::Poisson, 5, 0);

    // AML gain: omega 1 / 0.2
    const auto& ag = a.actions[0].gain;
    check_dist(ag.financial.entries.at("000"), DistFamily::Gamma, 8, 3);
    check_dist(ag.financial.entries.at("010"), DistFamily::Gamma, 1.6, 3);
    check_dist(ag.casualties.entries.at("000"), DistFamily::Poisson, 25, 0);
    check_dist(ag.casualties.entries.at("010"), DistFamily::Poisson, 5, 0);

    check_dist(a.actions[0].detect_cost, DistFamily::Uniform, 100000, 130000);

    // competitor-system actions: certain success, fixed gains at 0.9 omega
    for (int i : {6, 7, 8, 9}) {
        CAPTURE(i);
        const auto& act = a.actions[static_cast<std::size_t>(i)];
        CHECK_FALSE(act.targets_us());
        check_dist(act.success.entries.at("*"), DistFamily::Beta, 1, 1);
        check_dist(act.detect_prob.entries.at("*"), DistFamily::Beta, 6, 994);
    }
    check_dist(a.actions[6].gain.financial.entries.at("*"), DistFamily::Gamma, 7.2, 2.7);
    check_dist(a.actions[8].gain.financial.entries.at("*"), DistFamily::Gamma, 5.6, 2.1);
}

TEST_CASE("cybercriminal attacker cells") {
    auto s = builtin_ads_scenario();
    const auto& a = s.attackers[1];
    CHECK(a.id == "cybercriminal");
    check_dist(a.arrival, DistFamily::Poisson, 3, 0);
    check_dist(a.risk_proneness, DistFamily::Uniform, 1e-6, 2e-6);
    CHECK(a.our_attack_types() == std::vector<std::string>{"cr_aml"});
    CHECK(a.other_systems() == std::vector<std::string>{"company_2", "company_3"});

    const auto& g = a.actions[0].gain;
    CHECK(g.kind == GainModel::Kind::Records);
    check_dist(g.record_count.entries.at("000"), DistFamily::Uniform, 0, 660);
    check_dist(g.record_count.entries.at("010"), DistFamily::Uniform, 0, 360);
    check_dist(g.record_value, DistFamily::Uniform, 80, 120);

    check_dist(a.actions[0].success.entries.at("000"), DistFamily::Beta, 65, 35);
    check_dist(a.actions[0].success.entries.at("010"), DistFamily::Beta, 15, 85);
    check_dist(a.actions[2].success.entries.at("000"), DistFamily::Beta, 80, 20);
    check_dist(a.actions[2].success.entries.at("010"), DistFamily::Beta, 25, 75);
    check_dist(a.actions[3].gain.record_count.entries.at("*"), DistFamily::Uniform, 0, 600);
}

TEST_CASE("constraints and decision space") {
    auto s = builtin_ads_scenario();
    CHECK(s.constraints.total_budget == 3400.0);
    CHECK(s.constraints.allowed_insurance == std::vector<std::string>{"A", "B"});
    CHECK(s.decision.free_controls == std::vector<std::string>{"fwgw", "aml", "pmvs"});
    CHECK(s.decision.insurance_options == std::vector<std::string>{"A", "B"});
}

TEST_CASE("json round trip is the identity on the serialized form") {
    auto s = builtin_ads_scenario();
    auto text = scenario_to_json(s);
    auto back = scenario_from_json(text);
    CHECK(scenario_to_json(back) == text);
    CHECK(back.validate().empty());
    CHECK(back.defaults.seed == s.defaults.seed);
    CHECK(back.attackers[0].actions.size() == 10);
}

TEST_CASE("file round trip") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "cyrisk_test_scn";
    fs::create_directories(dir);
    auto path = (dir / "ads.json").string();

    auto s = builtin_ads_scenario();
    save_scenario(s, path);
    auto loaded = load_scenario(path);
    CHECK(scenario_to_json(loaded) == scenario_to_json(s));

    CHECK_THROWS_AS(load_scenario((dir / "missing.json").string()), ConfigError);
    std::ofstream(dir / "garbage.json") << "{ not json";
    CHECK_THROWS_AS(load_scenario((dir / "garbage.json").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("validation reports path-qualified problems") {
    auto s = builtin_ads_scenario();
    s.category_weights["nonexistent"] = 1.0;
    s.attack_types[0].pnp.entries.at("000").edge[{0, 1}] = DistSpec::point(0.5); // L -> P: no edge
    s.attackers[0].actions[0].entry_combo = 99;
    s.constraints.allowed_insurance.push_back("Z");
    s.defaults.rho = 0.0;

    auto errors = s.validate();
    REQUIRE(errors.size() >= 5);
    auto contains = [&](const std::string& needle) {
        for (const auto& e : errors)
            if (e.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(contains("category_weights: unknown category 'nonexistent'"));
    CHECK(contains("attack_types.dos.pnp.000.edges: no such graph edge"));
    CHECK(contains("attackers.competitor.actions[0]: entry_combo out of range"));
    CHECK(contains("constraints.allowed_insurance: unknown insurance 'Z'"));
    CHECK(contains("defaults.rho"));

    // parsing a semantically invalid document throws with the same messages
    auto text = scenario_to_json(s);
    CHECK_THROWS_WITH_AS(scenario_from_json(text), doctest::Contains("entry_combo out of range"),
                         ConfigError);
}

TEST_CASE("exports are deterministic and re-export byte-identically") {
    namespace fs = std::filesystem;
    auto s = builtin_ads_scenario();
    auto p = s.make_portfolio("000+A");
    auto campaign = simulate_campaign(s, p, 300, RngStream(99).child("portfolio").child("000+A"), 1);
    auto model = fit_loss(campaign.losses);
    auto report = risk_metrics(campaign.losses, model, 0.95);

    ResultBundle bundle;
    bundle.meta = {"ads", "1", "test", 99, 300, 0, 1e-7, 0.95, 1};
    bundle.reports["000+A"] = report;
    auto ev = evaluate_losses(s, p, campaign.losses.losses, 1e-7);
    bundle.ranking = {ev};
    ResultBundle::LossCurve curve;
    curve.portfolio = "000+A";
    curve.sorted_losses = campaign.losses.losses;
    std::sort(curve.sorted_losses.begin(), curve.sorted_losses.end());
    curve.fitted_cdf = {{0.0, model.cdf(0.0)}, {1e6, model.cdf(1e6)}};
    bundle.curves = {curve};
    bundle.targeting["competitor"]["000+A"] =
        estimate_targeting(s.attackers[0], p, s.catalog, 50, RngStream(1));

    auto base = fs::temp_directory_path() / "cyrisk_test_export";
    fs::remove_all(base);
    auto d1 = (base / "a").string(), d2 = (base / "b").string();
    auto files1 = export_results(bundle, ExportFormat::Csv, d1);
    auto files2 = export_results(bundle, ExportFormat::Csv, d2);
    REQUIRE(files1.size() == files2.size());
    REQUIRE_FALSE(files1.empty());
    for (std::size_t i = 0; i < files1.size(); ++i) {
        CAPTURE(files1[i]);
        CHECK(slurp(files1[i]) == slurp(files2[i]));
    }

    auto t1 = export_results(bundle, ExportFormat::Tree, (base / "t1").string());
    auto t2 = export_results(bundle, ExportFormat::Tree, (base / "t2").string());
    REQUIRE(t1.size() == 1); // one structured tree file
    CHECK(slurp(t1[0]) == slurp(t2[0]));

    CHECK(parse_format("csv") == ExportFormat::Csv);
    CHECK(parse_format("tree") == ExportFormat::Tree);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
    fs::remove_all(base);
}

TEST_CASE("an empty bundle exports header-only tables") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "cyrisk_test_export_empty";
    fs::remove_all(dir);

    ResultBundle bundle;
    bundle.meta.scenario_id = "empty";
    auto files = export_results(bundle, ExportFormat::Csv, dir.string());

    std::string ranking_path;
    for (const auto& f : files)
        if (f.find("ranking.csv") != std::string::npos) ranking_path = f;
    REQUIRE_FALSE(ranking_path.empty());
    auto text = slurp(ranking_path);
    CHECK(text.substr(0, text.find('\n')) == "portfolio,expected_loss,cost,expected_utility");
    fs::remove_all(dir);
}

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(-2.0) == "-2");
    double v = 0.1 + 0.2;
    CHECK(std::stod(format_number(v)) == v);
}
