#include "cyrisk/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cyrisk::math {

double digamma(double x) {
    double result = 0.0;
    while (x < 6.0) { // shift into the asymptotic regime
        result -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

double trigamma(double x) {
    double result = 0.0;
    while (x < 6.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += inv * (1.0 + 0.5 * inv +
                     inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0))));
    return result;
}

namespace {

// Series expansion, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double n = a;
    for (int i = 0; i < 500; ++i) {
        n += 1.0;
        term *= x / n;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0) throw std::invalid_argument("gamma_p: a must be positive");
    if (x <= 0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_logpdf(double x, double shape, double scale) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}

double gamma_cdf(double x, double shape, double scale) {
    if (x <= 0) return 0.0;
    return gamma_p(shape, x / scale);
}

double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - m);
    return m + std::log(sum);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (sorted.size() == 1) return sorted[0];
    double h = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double tail_mean_sorted(std::span<const double> sorted, double level) {
    if (sorted.empty()) throw std::invalid_argument("tail mean of empty sample");
    double m = (1.0 - level) * static_cast<double>(sorted.size());
    if (m <= 0) return sorted.back();
    auto full = static_cast<std::size_t>(std::floor(m));
    full = std::min(full, sorted.size());
    double sum = 0.0;
    for (std::size_t i = sorted.size() - full; i < sorted.size(); ++i) sum += sorted[i];
    double frac = m - static_cast<double>(full);
    if (frac > 0 && full < sorted.size()) sum += frac * sorted[sorted.size() - full - 1];
    return sum / m;
}

MeanSE mean_se(std::span<const double> xs) {
    MeanSE r;
    if (xs.empty()) return r;
    double sum = 0.0;
    for (double x : xs) sum += x;
    r.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / (static_cast<double>(xs.size() - 1) * static_cast<double>(xs.size())));
    }
    return r;
}

} // namespace cyrisk::math
