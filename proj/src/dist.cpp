#include "cyrisk/dist.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cyrisk {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("invalid distribution: " + msg);
}

} // namespace

DistSpec DistSpec::point(double v) {
    DistSpec d;
    d.family = DistFamily::PointMass;
    d.a = v;
    return d;
}

DistSpec DistSpec::uniform(double lo, double hi) {
    require(lo <= hi, "uniform requires lo <= hi");
    DistSpec d;
    d.family = DistFamily::Uniform;
    d.a = lo;
    d.b = hi;
    return d;
}

DistSpec DistSpec::beta(double alpha, double beta) {
    require(alpha > 0 && beta > 0, "beta requires positive parameters");
    DistSpec d;
    d.family = DistFamily::Beta;
    d.a = alpha;
    d.b = beta;
    return d;
}

DistSpec DistSpec::gamma(double shape, double scale) {
    require(shape > 0 && scale > 0, "gamma requires positive shape and scale");
    DistSpec d;
    d.family = DistFamily::Gamma;
    d.a = shape;
    d.b = scale;
    return d;
}

DistSpec DistSpec::poisson(double rate) {
    require(rate >= 0, "poisson requires rate >= 0");
    DistSpec d;
    d.family = DistFamily::Poisson;
    d.a = rate;
    return d;
}

DistSpec DistSpec::dirichlet(std::vector<double> alpha) {
    require(!alpha.empty(), "dirichlet requires a nonempty concentration vector");
    for (double v : alpha) require(v > 0, "dirichlet concentrations must be positive");
    DistSpec d;
    d.family = DistFamily::Dirichlet;
    d.conc = std::move(alpha);
    return d;
}

double DistSpec::mean() const {
    switch (family) {
        case DistFamily::PointMass: return a;
        case DistFamily::Uniform: return 0.5 * (a + b);
        case DistFamily::Beta: return a / (a + b);
        case DistFamily::Gamma: return a * b;
        case DistFamily::Poisson: return a;
        case DistFamily::Dirichlet: break;
    }
    throw std::logic_error("mean() is not defined for vector distributions");
}

double sample(const DistSpec& d, RngStream& s) {
    switch (d.family) {
        case DistFamily::PointMass:
            return d.a;
        case DistFamily::Uniform:
            return std::uniform_real_distribution<double>(d.a, d.b)(s.engine());
        case DistFamily::Beta: {
            double x = std::gamma_distribution<double>(d.a, 1.0)(s.engine());
            double y = std::gamma_distribution<double>(d.b, 1.0)(s.engine());
            double t = x + y;
            return t > 0 ? x / t : 0.5;
        }
        case DistFamily::Gamma:
            return std::gamma_distribution<double>(d.a, d.b)(s.engine());
        case DistFamily::Poisson:
            if (d.a == 0) return 0.0;
            return static_cast<double>(std::poisson_distribution<long>(d.a)(s.engine()));
        case DistFamily::Dirichlet:
            break;
    }
    throw std::logic_error("scalar sample() called on a Dirichlet spec");
}

std::vector<double> sample_vector(const DistSpec& d, RngStream& s) {
    if (d.family != DistFamily::Dirichlet) return {sample(d, s)};
    std::vector<double> out(d.conc.size());
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::gamma_distribution<double>(d.conc[i], 1.0)(s.engine());
        total += out[i];
    }
    if (total <= 0) { // all draws underflowed; fall back to the mean direction
        total = std::accumulate(d.conc.begin(), d.conc.end(), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = d.conc[i];
    }
    for (double& v : out) v /= total;
    return out;
}

int sample_count(const DistSpec& d, RngStream& s) {
    if (d.family != DistFamily::Poisson && d.family != DistFamily::PointMass)
        throw std::invalid_argument("sample_count: expected a count distribution");
    double v = sample(d, s);
    if (v < 0) v = 0;
    return static_cast<int>(std::llround(v));
}

int sample_multinomial(std::span<const double> weights, RngStream& s) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = s.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

std::vector<double> generic_vs_targeted_entry(const DistSpec& generic_prob, int n_entries,
                                              RngStream& s) {
    if (n_entries < 1) throw std::invalid_argument("generic_vs_targeted_entry: n_entries >= 1");
    double g = sample(generic_prob, s);
    std::vector<double> out(static_cast<std::size_t>(n_entries) + 1, (1.0 - g) / n_entries);
    out[0] = g;
    return out;
}

std::string to_string(const DistSpec& d) {
    std::ostringstream os;
    switch (d.family) {
        case DistFamily::PointMass: os << "PointMass(" << d.a << ")"; break;
        case DistFamily::Uniform: os << "Uniform(" << d.a << "," << d.b << ")"; break;
        case DistFamily::Beta: os << "Beta(" << d.a << "," << d.b << ")"; break;
        case DistFamily::Gamma: os << "Gamma(" << d.a << "," << d.b << ")"; break;
        case DistFamily::Poisson: os << "Poisson(" << d.a << ")"; break;
        case DistFamily::Dirichlet: {
            os << "Dirichlet(";
            for (std::size_t i = 0; i < d.conc.size(); ++i) os << (i ? "," : "") << d.conc[i];
            os << ")";
            break;
        }
    }
    return os.str();
}

} // namespace cyrisk
