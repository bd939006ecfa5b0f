#include <cmath>

#include "doctest.h"

#include "cyrisk/risk.hpp"

using namespace cyrisk;

namespace {

template <class T>
PortfolioKeyed<T> fixed(T v) {
    PortfolioKeyed<T> k;
    k.entries.emplace("*", std::move(v));
    return k;
}

GainModel point_gain(double euros) {
    GainModel g;
    g.kind = GainModel::Kind::Notoriety;
    g.financial = fixed(DistSpec::point(euros));
    g.casualties = fixed(DistSpec::point(0));
    g.vsl = 1.0;
    g.financial_unit = 1.0;
    return g;
}

AttackerAction point_action(const std::string& type, int combo, double success, double p_det,
                            double cost_det, double gain) {
    AttackerAction a;
    a.attack_type = type;
    a.entry_combo = combo;
    a.success = fixed(DistSpec::point(success));
    a.detect_prob = fixed(DistSpec::point(p_det));
    a.detect_cost = DistSpec::point(cost_det);
    a.gain = point_gain(gain);
    return a;
}

// Minimal one-block scenario for campaign arithmetic.
Scenario tiny_scenario(double pnp, double impact_keuros) {
    Scenario s;
    s.id = "tiny";
    s.graph.blocks = {{"B", "B", 1, true, {}}};
    s.graph.levels = 1;
    s.categories = {{"financial", "financial", ImpactScope::Global, ImpactAggregation::Sum, 1000}};
    s.category_weights = {{"financial", 1.0}};

    AttackTypeSpec t;
    t.id = "hit";
    t.targeted = true;
    t.entry_combos = {{0}};
    PnpModel q;
    q.entry[0] = DistSpec::point(pnp);
    t.pnp = fixed(q);
    ImpactTable imp;
    imp.global["financial"] = DistSpec::point(impact_keuros);
    t.impacts = fixed(imp);
    s.attack_types = {t};
    return s;
}

const ControlCatalog kNoControls;
const Portfolio kBare;

} // namespace

TEST_CASE("random expected utility collapses to exp(h * gain) without detection risk") {
    auto a = point_action("t", 0, 1.0, 0.0, 0.0, 1000.0);
    RngStream s(1);
    double h = 2e-6;
    double log_psi = draw_log_random_expected_utility(a, h, kBare, kNoControls, s);
    CHECK(log_psi == doctest::Approx(h * 1000.0));
}

TEST_CASE("random expected utility mixes success and failure terms") {
    // p * exp(h (gain - cd)) + (1 - p) * exp(-h cd), all point masses
    auto a = point_action("t", 0, 0.3, 0.1, 50.0, 1000.0);
    RngStream s(2);
    double h = 1e-3;
    double cd = 0.1 * 50.0;
    double expected = 0.3 * std::exp(h * (1000.0 - cd)) + 0.7 * std::exp(-h * cd);
    double log_psi = draw_log_random_expected_utility(a, h, kBare, kNoControls, s);
    CHECK(std::exp(log_psi) == doctest::Approx(expected));
}

TEST_CASE("log-space evaluation survives notoriety-scale gains") {
    auto a = point_action("t", 0, 0.5, 0.0, 0.0, 3.6e8);
    RngStream s(3);
    double log_psi = draw_log_random_expected_utility(a, 2e-6, kBare, kNoControls, s);
    CHECK(std::isfinite(log_psi));
    CHECK(log_psi == doctest::Approx(std::log(0.5) + 2e-6 * 3.6e8).epsilon(1e-6));
}

TEST_CASE("bundled competitor jamming gain has the expected magnitude") {
    auto s = builtin_ads_scenario();
    auto p = s.make_portfolio("000+A");
    const auto& wjam_p = s.attackers[0].actions[3]; // jamming via perception entry
    const auto& gain = wjam_p.gain;

    CHECK(gain.financial.at(p, s.catalog, "fin").mean() * gain.financial_unit ==
          doctest::Approx(19200.0)); // 0.8 * 8 * 3 Keuros
    CHECK(gain.casualties.at(p, s.catalog, "cas").mean() == doctest::Approx(20.0));

    // Monte Carlo E[gain] ~ 19200 + 20 * 6e6
    RngStream rs(4);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        sum += sample(gain.financial.at(p, s.catalog, "fin"), rs) * gain.financial_unit +
               sample(gain.casualties.at(p, s.catalog, "cas"), rs) * gain.vsl;
    }
    CHECK(sum / n == doctest::Approx(19200.0 + 20.0 * 6e6).epsilon(0.02));
}

TEST_CASE("bundled criminal record gain has the expected magnitude") {
    auto s = builtin_ads_scenario();
    auto aml_active = s.make_portfolio("010+A");
    const auto& action = s.attackers[1].actions[0];

    RngStream rs(5);
    double sum = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i)
        sum += sample(action.gain.record_count.at(aml_active, s.catalog, "n"), rs) *
               sample(action.gain.record_value, rs);
    CHECK(sum / n == doctest::Approx(18000.0).epsilon(0.02)); // 180 records at 100 each
}

TEST_CASE("single action gets all the targeting mass") {
    AttackerSpec spec;
    spec.id = "solo";
    spec.arrival = DistSpec::poisson(1);
    spec.risk_proneness = DistSpec::point(1e-6);
    spec.actions = {point_action("t", 1, 0.5, 0.1, 10.0, 100.0)};
    spec.actions[0].entry_combo = 1;

    auto est = estimate_targeting(spec, kBare, kNoControls, 10, RngStream(6));
    CHECK(est.tau == std::vector<double>{1.0});
    REQUIRE(est.gamma.size() == 1);
    CHECK(est.gamma[0] == std::vector<double>{1.0, 11.0}); // 10 wins + smoothing
}

TEST_CASE("a strictly dominating action always wins, ties go to the lowest index") {
    AttackerSpec spec;
    spec.id = "duo";
    spec.risk_proneness = DistSpec::point(1e-6);
    spec.actions = {point_action("a", 0, 0.9, 0.0, 0.0, 100.0),
                    point_action("b", 0, 0.1, 0.0, 0.0, 100.0)};
    auto est = estimate_targeting(spec, kBare, kNoControls, 500, RngStream(7));
    CHECK(est.tau == std::vector<double>{1.0, 0.0});

    // identical actions: the first one collects everything
    spec.actions[1] = point_action("b", 0, 0.9, 0.0, 0.0, 100.0);
    est = estimate_targeting(spec, kBare, kNoControls, 500, RngStream(8));
    CHECK(est.tau == std::vector<double>{1.0, 0.0});
}

TEST_CASE("laplace smoothing keeps every gamma component at least one") {
    auto s = builtin_ads_scenario();
    auto p = s.make_portfolio("000+A");
    auto est = estimate_targeting(s.attackers[0], p, s.catalog, 1, RngStream(9));
    double tau_sum = 0.0;
    for (double t : est.tau) tau_sum += t;
    CHECK(tau_sum == doctest::Approx(1.0));
    for (const auto& g : est.gamma)
        for (double v : g) {
            CHECK(v >= 1.0);
            CHECK((v == 1.0 || v == 2.0)); // one iteration adds at most one count
        }
}

TEST_CASE("activating the countering control does not attract more of those attacks") {
    auto s = builtin_ads_scenario();
    auto bare = s.make_portfolio("000+A");
    auto defended = s.make_portfolio("010+A");

    auto fraction_aml = [&](const Portfolio& p) {
        auto est = estimate_targeting(s.attackers[0], p, s.catalog, 5000, RngStream(10));
        double f = 0.0;
        for (std::size_t j = 0; j < est.our_types.size(); ++j)
            if (est.our_types[j] == "cy_aml") f += est.tau[j];
        return f;
    };
    CHECK(fraction_aml(defended) <= fraction_aml(bare));
}

TEST_CASE("campaign arithmetic with certain transit and point impacts") {
    auto s = tiny_scenario(1.0, 5.0); // certain compromise, 5 Keuros per attack

    AttackerSpec spec;
    spec.id = "atk";
    spec.arrival = DistSpec::point(3);
    spec.risk_proneness = DistSpec::point(1e-6);
    spec.actions = {point_action("hit", 0, 1.0, 0.0, 0.0, 1.0)};

    TargetingEstimate est;
    est.our_types = {"hit"};
    est.tau = {1.0};
    est.gamma = {{5.0}};

    RngStream rs(11);
    double loss = simulate_targeted_campaign(spec, est, s, kBare, rs);
    CHECK(loss == doctest::Approx(3 * 5000.0));
}

TEST_CASE("mass on other systems or a zero arrival costs nothing") {
    auto s = tiny_scenario(1.0, 5.0);

    AttackerSpec spec;
    spec.id = "atk";
    spec.arrival = DistSpec::poisson(4);
    spec.risk_proneness = DistSpec::point(1e-6);
    spec.actions = {point_action("hit", 0, 1.0, 0.0, 0.0, 1.0)};

    TargetingEstimate competitor_only;
    competitor_only.our_types = {"hit"};
    competitor_only.other_systems = {"sys2"};
    competitor_only.tau = {0.0, 1.0};
    competitor_only.gamma = {{1.0}};

    RngStream rs(12);
    for (int i = 0; i < 100; ++i)
        CHECK(simulate_targeted_campaign(spec, competitor_only, s, kBare, rs) == 0.0);

    spec.arrival = DistSpec::point(0);
    TargetingEstimate ours;
    ours.our_types = {"hit"};
    ours.tau = {1.0};
    ours.gamma = {{1.0}};
    CHECK(simulate_targeted_campaign(spec, ours, s, kBare, rs) == 0.0);
}

TEST_CASE("one-action targeted campaigns match an equivalent arrival-driven type") {
    // With tau = (1) the targeted loop reduces to Poisson arrivals with a
    // Dirichlet entrance; compare the annual-loss means.
    auto s = tiny_scenario(0.6, 5.0);

    AttackerSpec spec;
    spec.id = "atk";
    spec.arrival = DistSpec::poisson(3);
    spec.risk_proneness = DistSpec::point(1e-6);
    spec.actions = {point_action("hit", 0, 1.0, 0.0, 0.0, 1.0)};

    TargetingEstimate est;
    est.our_types = {"hit"};
    est.tau = {1.0};
    est.gamma = {{4.0}};

    const int n = 40000;
    double targeted_sum = 0.0;
    RngStream a(13);
    for (int i = 0; i < n; ++i) {
        RngStream it = a.child(static_cast<std::uint64_t>(i));
        targeted_sum += simulate_targeted_campaign(spec, est, s, kBare, it);
    }

    EntranceModel entrance;
    entrance.combos = {{0}};
    entrance.weights_dist = DistSpec::dirichlet({4.0});
    double plain_sum = 0.0;
    RngStream b(14);
    for (int i = 0; i < n; ++i) {
        RngStream it = b.child(static_cast<std::uint64_t>(i));
        int attacks = sample_count(spec.arrival, it);
        for (int k = 0; k < attacks; ++k)
            plain_sum += simulate_attack_loss(s, s.attack_types[0], entrance, kBare, it);
    }
    // E[annual] = 3 * 0.6 * 5000 = 9000; se ~ sqrt(var/n) with var ~ 3*(0.6*5000)^2
    CHECK(targeted_sum / n == doctest::Approx(9000.0).epsilon(0.03));
    CHECK(targeted_sum / n == doctest::Approx(plain_sum / n).epsilon(0.03));
}
