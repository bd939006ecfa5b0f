#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cyrisk/math_util.hpp"
#include "cyrisk/risk.hpp"
#include "cyrisk/rng.hpp"

namespace cyrisk {

namespace {

constexpr int kEmIterations = 200;
constexpr double kEmTolerance = 1e-8;
constexpr int kEmRestarts = 5;
constexpr double kMinShape = 1e-3;
constexpr double kMaxShape = 1e6;

// Maximum-likelihood gamma shape given s = log(mean) - mean(log x):
// closed-form start, then Newton on log k - digamma(k) = s.
double mle_shape(double s) {
    if (!(s > 0)) return kMaxShape; // zero-variance sample
    double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    k = std::clamp(k, kMinShape, kMaxShape);
    for (int it = 0; it < 100; ++it) {
        double f = std::log(k) - math::digamma(k) - s;
        double fp = 1.0 / k - math::trigamma(k);
        double step = f / fp;
        double next = k - step;
        if (!(next > 0)) next = k / 2.0;
        next = std::clamp(next, kMinShape, kMaxShape);
        if (std::abs(next - k) <= 1e-12 * k) {
            k = next;
            break;
        }
        k = next;
    }
    return k;
}

FittedLossModel::Component fit_single(const std::vector<double>& xs) {
    double mean = 0.0, mean_log = 0.0;
    for (double x : xs) {
        mean += x;
        mean_log += std::log(x);
    }
    mean /= static_cast<double>(xs.size());
    mean_log /= static_cast<double>(xs.size());
    double shape = mle_shape(std::log(mean) - mean_log);
    return {1.0, shape, mean / shape};
}

double mixture_log_likelihood(const std::vector<double>& xs,
                              const std::vector<FittedLossModel::Component>& comps) {
    double ll = 0.0;
    std::vector<double> terms(comps.size());
    for (double x : xs) {
        for (std::size_t j = 0; j < comps.size(); ++j)
            terms[j] = std::log(comps[j].weight) + math::gamma_logpdf(x, comps[j].shape, comps[j].scale);
        ll += math::log_sum_exp(terms);
    }
    return ll;
}

struct EmFit {
    std::vector<FittedLossModel::Component> comps;
    double log_likelihood = -std::numeric_limits<double>::infinity();
    bool converged = false;
};

// Moment-matched components over quantile slices of the sorted sample, with
// an optional multiplicative jitter for restarts.
std::vector<FittedLossModel::Component> em_init(const std::vector<double>& sorted, int k,
                                                RngStream* jitter) {
    std::vector<FittedLossModel::Component> comps;
    auto n = sorted.size();
    for (int j = 0; j < k; ++j) {
        std::size_t lo = n * static_cast<std::size_t>(j) / static_cast<std::size_t>(k);
        std::size_t hi = n * static_cast<std::size_t>(j + 1) / static_cast<std::size_t>(k);
        if (hi <= lo) hi = lo + 1;
        double mean = 0.0;
        for (std::size_t i = lo; i < hi; ++i) mean += sorted[i];
        mean /= static_cast<double>(hi - lo);
        double var = 0.0;
        for (std::size_t i = lo; i < hi; ++i) var += (sorted[i] - mean) * (sorted[i] - mean);
        var /= static_cast<double>(hi - lo);
        if (!(var > 0)) var = std::max(mean * mean * 0.01, 1e-12);
        double shape = std::clamp(mean * mean / var, kMinShape, kMaxShape);
        double scale = mean / shape;
        if (jitter) {
            shape = std::clamp(shape * std::exp(0.3 * (jitter->uniform01() - 0.5)), kMinShape, kMaxShape);
            scale *= std::exp(0.3 * (jitter->uniform01() - 0.5));
        }
        comps.push_back({1.0 / k, shape, scale});
    }
    return comps;
}

EmFit run_em(const std::vector<double>& xs, std::vector<FittedLossModel::Component> comps) {
    auto n = xs.size();
    auto k = comps.size();
    std::vector<double> resp(n * k);
    std::vector<double> terms(k);

    EmFit fit;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < kEmIterations; ++it) {
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < k; ++j)
                terms[j] = std::log(comps[j].weight) +
                           math::gamma_logpdf(xs[i], comps[j].shape, comps[j].scale);
            double norm = math::log_sum_exp(terms);
            ll += norm;
            for (std::size_t j = 0; j < k; ++j) resp[i * k + j] = std::exp(terms[j] - norm);
        }
        if (!std::isfinite(ll)) return fit;

        for (std::size_t j = 0; j < k; ++j) {
            double w = 0.0, wx = 0.0, wlog = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double r = resp[i * k + j];
                w += r;
                wx += r * xs[i];
                wlog += r * std::log(xs[i]);
            }
            if (w <= n * 1e-12) return fit; // dying component
            double mean = wx / w;
            double shape = mle_shape(std::log(mean) - wlog / w);
            comps[j].weight = w / static_cast<double>(n);
            comps[j].shape = shape;
            comps[j].scale = mean / shape;
        }

        if (std::abs(ll - prev_ll) <= kEmTolerance * (1.0 + std::abs(ll))) {
            fit.converged = true;
            fit.comps = comps;
            fit.log_likelihood = ll;
            return fit;
        }
        prev_ll = ll;
    }
    fit.comps = comps;
    fit.log_likelihood = prev_ll;
    return fit;
}

} // namespace

FittedLossModel fit_loss(const LossSample& sample, int n_components) {
    if (sample.losses.empty()) throw std::invalid_argument("fit_loss: empty sample");
    if (n_components < 1) throw std::invalid_argument("fit_loss: n_components >= 1");

    std::vector<double> pos;
    pos.reserve(sample.losses.size());
    for (double x : sample.losses) {
        if (x < 0) throw std::invalid_argument("fit_loss: negative loss");
        if (x > 0) pos.push_back(x);
    }

    FittedLossModel model;
    auto n = sample.losses.size();
    model.zero_mass = static_cast<double>(n - pos.size()) / static_cast<double>(n);
    if (pos.empty()) return model; // pure point mass at zero

    std::sort(pos.begin(), pos.end());

    auto single = fit_single(pos);
    model.components = {single};
    model.log_likelihood = mixture_log_likelihood(pos, model.components);

    if (n_components > 1 && pos.size() >= static_cast<std::size_t>(5 * n_components)) {
        EmFit best;
        RngStream restart_stream(0x5eedf17ULL);
        for (int r = 0; r < kEmRestarts; ++r) {
            RngStream jitter = restart_stream.child(static_cast<std::uint64_t>(r));
            auto init = em_init(pos, n_components, r == 0 ? nullptr : &jitter);
            auto fit = run_em(pos, init);
            if (fit.converged && fit.log_likelihood > best.log_likelihood) best = fit;
        }
        if (best.converged && best.log_likelihood > model.log_likelihood) {
            model.components = best.comps;
            model.log_likelihood = best.log_likelihood;
        } else if (!best.converged) {
            model.converged = false; // kept the single-component fit
        }
    }

    // Zero/positive split contribution, so likelihoods compare across models.
    auto n0 = n - pos.size();
    if (n0 > 0) model.log_likelihood += static_cast<double>(n0) * std::log(model.zero_mass);
    if (!pos.empty() && model.zero_mass < 1.0)
        model.log_likelihood += static_cast<double>(pos.size()) * std::log1p(-model.zero_mass);
    return model;
}

double FittedLossModel::mean() const {
    double m = 0.0;
    for (const auto& c : components) m += c.weight * c.shape * c.scale;
    return (1.0 - zero_mass) * m;
}

double FittedLossModel::cdf(double x) const {
    if (x < 0) return 0.0;
    if (components.empty()) return 1.0;
    double f = 0.0;
    for (const auto& c : components) f += c.weight * math::gamma_cdf(x, c.shape, c.scale);
    return zero_mass + (1.0 - zero_mass) * f;
}

double FittedLossModel::quantile(double p) const {
    if (p < 0 || p > 1) throw std::invalid_argument("quantile: p in [0, 1]");
    if (p <= zero_mass || components.empty()) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    double hi = 1.0;
    for (const auto& c : components)
        hi = std::max(hi, c.shape * c.scale + 20.0 * std::sqrt(c.shape) * c.scale);
    while (cdf(hi) < p) hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-6 * (1.0 + hi)) {
        double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double FittedLossModel::tail_mean(double level) const {
    if (level < 0 || level >= 1) throw std::invalid_argument("tail_mean: level in [0, 1)");
    double q = quantile(level);
    // E[X 1{X > q}] via the gamma partial expectation, with the usual
    // correction for probability mass sitting exactly at q.
    double partial = 0.0;
    for (const auto& c : components)
        partial += c.weight * c.shape * c.scale * (1.0 - math::gamma_p(c.shape + 1.0, q / c.scale));
    partial *= 1.0 - zero_mass;
    return (partial + q * (cdf(q) - level)) / (1.0 - level);
}

} // namespace cyrisk
