#include "cyrisk/ara.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cyrisk/math_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cyrisk/risk.hpp"
#include "cyrisk/scenario.hpp"

namespace cyrisk {

std::vector<std::string> AttackerSpec::our_attack_types() const {
    std::vector<std::string> out;
    for (const auto& a : actions) {
        if (!a.targets_us()) continue;
        if (std::find(out.begin(), out.end(), a.attack_type) == out.end())
            out.push_back(a.attack_type);
    }
    return out;
}

std::vector<std::string> AttackerSpec::other_systems() const {
    std::vector<std::string> out;
    for (const auto& a : actions) {
        if (a.targets_us()) continue;
        if (std::find(out.begin(), out.end(), a.other_system) == out.end())
            out.push_back(a.other_system);
    }
    return out;
}

double TargetingEstimate::tau_ours() const {
    double t = 0.0;
    for (std::size_t j = 0; j < our_types.size(); ++j) t += tau[j];
    return t;
}

namespace {

double draw_gain(const GainModel& g, const Portfolio& p, const ControlCatalog& cat, RngStream& s) {
    if (g.kind == GainModel::Kind::Notoriety) {
        double fin = sample(g.financial.at(p, cat, "attacker financial gain"), s) * g.financial_unit;
        double deaths = sample(g.casualties.at(p, cat, "attacker casualty count"), s);
        return fin + deaths * g.vsl;
    }
    double n = sample(g.record_count.at(p, cat, "attacker record count"), s);
    double v = sample(g.record_value, s);
    return n * v;
}

} // namespace

double draw_log_random_expected_utility(const AttackerAction& a, double h_a, const Portfolio& p,
                                        const ControlCatalog& cat, RngStream& s) {
    double success = sample(a.success.at(p, cat, "attacker success probability"), s);
    double p_det = sample(a.detect_prob.at(p, cat, "attacker detection probability"), s);
    double cost_det = sample(a.detect_cost, s);
    double c_d = p_det * cost_det; // expected detection cost
    double gain = draw_gain(a.gain, p, cat, s);

    std::array<double, 2> terms = {
        success > 0 ? std::log(success) + h_a * (gain - c_d)
                    : -std::numeric_limits<double>::infinity(),
        success < 1 ? std::log1p(-success) - h_a * c_d
                    : -std::numeric_limits<double>::infinity(),
    };
    return math::log_sum_exp(terms);
}

double draw_random_expected_utility(const AttackerAction& a, const AttackerSpec& spec,
                                    const Portfolio& p, const ControlCatalog& cat, RngStream& s) {
    double h_a = sample(spec.risk_proneness, s);
    return std::exp(draw_log_random_expected_utility(a, h_a, p, cat, s));
}

TargetingEstimate estimate_targeting(const AttackerSpec& spec, const Portfolio& p,
                                     const ControlCatalog& cat, int iterations, RngStream s,
                                     int threads) {
    if (iterations < 1) throw std::invalid_argument("estimate_targeting: iterations >= 1");
    if (spec.actions.empty()) throw ConfigError("attacker '" + spec.id + "' has no actions");

    std::vector<int> chosen(static_cast<std::size_t>(iterations));
    auto run_one = [&](int v) {
        RngStream sv = s.child(static_cast<std::uint64_t>(v));
        double h_a = sample(spec.risk_proneness, sv);
        int best = 0;
        double best_val = -std::numeric_limits<double>::infinity();
        for (std::size_t ai = 0; ai < spec.actions.size(); ++ai) {
            double val = draw_log_random_expected_utility(spec.actions[ai], h_a, p, cat, sv);
            if (val > best_val) { // ties keep the lowest index
                best_val = val;
                best = static_cast<int>(ai);
            }
        }
        chosen[static_cast<std::size_t>(v)] = best;
    };

#ifdef _OPENMP
    if (threads != 1) {
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
        for (int v = 0; v < iterations; ++v) run_one(v);
    } else
#endif
    {
        (void)threads;
        for (int v = 0; v < iterations; ++v) run_one(v);
    }

    TargetingEstimate est;
    est.our_types = spec.our_attack_types();
    est.other_systems = spec.other_systems();
    est.iterations = iterations;
    est.tau.assign(est.our_types.size() + est.other_systems.size(), 0.0);
    est.gamma.resize(est.our_types.size());

    // Per-type combo counts start at one (Laplace smoothing).
    for (std::size_t j = 0; j < est.our_types.size(); ++j) {
        std::size_t n_combos = 0;
        for (const auto& a : spec.actions)
            if (a.targets_us() && a.attack_type == est.our_types[j])
                n_combos = std::max(n_combos, static_cast<std::size_t>(a.entry_combo) + 1);
        est.gamma[j].assign(n_combos, 1.0);
    }

    auto type_index = [&](const std::string& t) {
        return static_cast<std::size_t>(
            std::find(est.our_types.begin(), est.our_types.end(), t) - est.our_types.begin());
    };
    auto system_index = [&](const std::string& sys) {
        return static_cast<std::size_t>(std::find(est.other_systems.begin(),
                                                  est.other_systems.end(), sys) -
                                        est.other_systems.begin());
    };

    for (int c : chosen) {
        const auto& a = spec.actions[static_cast<std::size_t>(c)];
        if (a.targets_us()) {
            std::size_t j = type_index(a.attack_type);
            est.tau[j] += 1.0;
            est.gamma[j][static_cast<std::size_t>(a.entry_combo)] += 1.0;
        } else {
            est.tau[est.our_types.size() + system_index(a.other_system)] += 1.0;
        }
    }
    for (double& t : est.tau) t /= iterations;
    return est;
}

double simulate_targeted_campaign(const AttackerSpec& spec, const TargetingEstimate& est,
                                  const Scenario& scenario, const Portfolio& p, RngStream& s) {
    double annual = 0.0;
    int n_attacks = sample_count(spec.arrival, s);
    for (int i = 0; i < n_attacks; ++i) {
        int target = sample_multinomial(est.tau, s);
        if (target >= static_cast<int>(est.our_types.size())) continue; // another system
        const auto& type = scenario.attack_type(est.our_types[static_cast<std::size_t>(target)]);
        EntranceModel entrance;
        entrance.combos = type.entry_combos;
        entrance.weights_dist = DistSpec::dirichlet(est.gamma[static_cast<std::size_t>(target)]);
        annual += simulate_attack_loss(scenario, type, entrance, p, s);
    }
    return annual;
}

} // namespace cyrisk
