#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cyrisk/export.hpp"

namespace cyrisk {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ExportFormat parse_format(const std::string& name) {
    if (name == "csv") return ExportFormat::Csv;
    if (name == "tree") return ExportFormat::Tree;
    throw ConfigError("unknown export format '" + name + "' (expected csv or tree)");
}

namespace {

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
    written.push_back(path);
}

std::string sanitize(const std::string& key) {
    std::string out = key;
    for (char& c : out)
        if (c == '+') c = '_';
    return out;
}

std::string metadata_csv(const RunMetadata& m) {
    std::ostringstream os;
    os << "scenario_id,scenario_version,engine_version,seed,iterations,attacker_iterations,rho,"
          "level,workers\n";
    os << m.scenario_id << ',' << m.scenario_version << ',' << m.engine_version << ',' << m.seed
       << ',' << m.iterations << ',' << m.attacker_iterations << ',' << format_number(m.rho) << ','
       << format_number(m.level) << ',' << m.workers << '\n';
    return os.str();
}

std::string reports_csv(const std::map<std::string, RiskReport>& reports) {
    std::ostringstream os;
    os << "portfolio,level,zero_mass,expected_loss,expected_loss_se,var_empirical,cvar_empirical,"
          "var_fitted,cvar_fitted\n";
    for (const auto& [key, r] : reports) {
        os << key << ',' << format_number(r.level) << ',' << format_number(r.zero_mass) << ','
           << format_number(r.expected_loss) << ',' << format_number(r.expected_loss_se) << ','
           << format_number(r.var_empirical) << ',' << format_number(r.cvar_empirical) << ','
           << format_number(r.var_fitted) << ',' << format_number(r.cvar_fitted) << '\n';
    }
    return os.str();
}

std::string ranking_csv(const std::vector<PortfolioEvaluation>& ranking) {
    std::ostringstream os;
    os << "portfolio,expected_loss,cost,expected_utility\n";
    for (const auto& ev : ranking)
        os << ev.key << ',' << format_number(ev.expected_loss) << ',' << format_number(ev.cost)
           << ',' << format_number(ev.expected_utility) << '\n';
    return os.str();
}

std::string curve_csv(const ResultBundle::LossCurve& c) {
    std::ostringstream os;
    os << "index,loss,empirical_cdf,fitted_loss,fitted_cdf\n";
    std::size_t n = std::max(c.sorted_losses.size(), c.fitted_cdf.size());
    for (std::size_t i = 0; i < n; ++i) {
        os << i << ',';
        if (i < c.sorted_losses.size()) {
            double ecdf = (static_cast<double>(i) + 1.0) /
                          static_cast<double>(c.sorted_losses.size());
            os << format_number(c.sorted_losses[i]) << ',' << format_number(ecdf);
        } else {
            os << ',';
        }
        os << ',';
        if (i < c.fitted_cdf.size())
            os << format_number(c.fitted_cdf[i].first) << ','
               << format_number(c.fitted_cdf[i].second);
        else
            os << ',';
        os << '\n';
    }
    return os.str();
}

std::string targeting_csv(
    const std::map<std::string, std::map<std::string, TargetingEstimate>>& targeting) {
    std::ostringstream os;
    os << "attacker,portfolio,target,tau,gamma\n";
    for (const auto& [attacker, per_portfolio] : targeting) {
        for (const auto& [portfolio, est] : per_portfolio) {
            for (std::size_t j = 0; j < est.tau.size(); ++j) {
                bool ours = j < est.our_types.size();
                const std::string& target =
                    ours ? est.our_types[j] : est.other_systems[j - est.our_types.size()];
                os << attacker << ',' << portfolio << ',' << target << ','
                   << format_number(est.tau[j]) << ',';
                if (ours) {
                    const auto& g = est.gamma[j];
                    for (std::size_t k = 0; k < g.size(); ++k)
                        os << (k ? ";" : "") << format_number(g[k]);
                }
                os << '\n';
            }
        }
    }
    return os.str();
}

json model_to_json(const FittedLossModel& m) {
    json comps = json::array();
    for (const auto& c : m.components)
        comps.push_back({{"weight", c.weight}, {"shape", c.shape}, {"scale", c.scale}});
    return {{"zero_mass", m.zero_mass},
            {"components", comps},
            {"log_likelihood", m.log_likelihood},
            {"converged", m.converged}};
}

json bundle_to_json(const ResultBundle& b) {
    json j;
    j["meta"] = {{"scenario_id", b.meta.scenario_id},
                 {"scenario_version", b.meta.scenario_version},
                 {"engine_version", b.meta.engine_version},
                 {"seed", b.meta.seed},
                 {"iterations", b.meta.iterations},
                 {"attacker_iterations", b.meta.attacker_iterations},
                 {"rho", b.meta.rho},
                 {"level", b.meta.level},
                 {"workers", b.meta.workers}};

    json reports = json::object();
    for (const auto& [key, r] : b.reports) {
        json jr = {{"level", r.level},
                   {"zero_mass", r.zero_mass},
                   {"expected_loss", r.expected_loss},
                   {"expected_loss_se", r.expected_loss_se},
                   {"var_empirical", r.var_empirical},
                   {"cvar_empirical", r.cvar_empirical},
                   {"var_fitted", r.var_fitted},
                   {"cvar_fitted", r.cvar_fitted},
                   {"block_frequency", r.block_frequency},
                   {"mean_loss_by_source", r.mean_loss_by_source}};
        if (r.model) jr["model"] = model_to_json(*r.model);
        reports[key] = jr;
    }
    j["reports"] = reports;

    json ranking = json::array();
    for (const auto& ev : b.ranking)
        ranking.push_back({{"portfolio", ev.key},
                           {"cost", ev.cost},
                           {"expected_loss", ev.expected_loss},
                           {"expected_loss_se", ev.expected_loss_se},
                           {"expected_utility", ev.expected_utility},
                           {"expected_utility_se", ev.expected_utility_se},
                           {"log_mean_exp", ev.log_mean_exp},
                           {"zero_mass", ev.zero_mass}});
    j["ranking"] = ranking;

    json curves = json::array();
    for (const auto& c : b.curves) {
        json fitted = json::array();
        for (const auto& [x, f] : c.fitted_cdf) fitted.push_back({x, f});
        curves.push_back({{"portfolio", c.portfolio},
                          {"sorted_losses", c.sorted_losses},
                          {"fitted_cdf", fitted}});
    }
    j["curves"] = curves;

    json targeting = json::object();
    for (const auto& [attacker, per_portfolio] : b.targeting) {
        json jp = json::object();
        for (const auto& [portfolio, est] : per_portfolio) {
            jp[portfolio] = {{"our_types", est.our_types},
                             {"other_systems", est.other_systems},
                             {"tau", est.tau},
                             {"gamma", est.gamma},
                             {"iterations", est.iterations}};
        }
        targeting[attacker] = jp;
    }
    j["targeting"] = targeting;
    return j;
}

} // namespace

std::vector<std::string> export_results(const ResultBundle& bundle, ExportFormat format,
                                        const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    auto path = [&](const std::string& name) {
        return (std::filesystem::path(dir) / name).string();
    };

    if (format == ExportFormat::Tree) {
        write_file(path("results.json"), bundle_to_json(bundle).dump(2) + "\n", written);
        return written;
    }

    write_file(path("metadata.csv"), metadata_csv(bundle.meta), written);
    write_file(path("reports.csv"), reports_csv(bundle.reports), written);
    write_file(path("ranking.csv"), ranking_csv(bundle.ranking), written);
    for (const auto& c : bundle.curves)
        write_file(path("loss_curve_" + sanitize(c.portfolio) + ".csv"), curve_csv(c), written);
    write_file(path("targeting.csv"), targeting_csv(bundle.targeting), written);
    return written;
}

} // namespace cyrisk
