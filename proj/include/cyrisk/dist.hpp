#pragma once

#include <span>
#include <string>
#include <vector>

#include "cyrisk/rng.hpp"

namespace cyrisk {

enum class DistFamily { PointMass, Uniform, Beta, Gamma, Poisson, Dirichlet };

// Parametric distribution spec. Parameters are validated at construction so
// that sampling never fails. Gamma uses the (shape, scale) convention with
// mean = shape * scale.
struct DistSpec {
    DistFamily family = DistFamily::PointMass;
    double a = 0.0;               // point value / lo / alpha / shape / rate
    double b = 0.0;               // hi / beta / scale
    std::vector<double> conc;     // Dirichlet concentration vector

    static DistSpec point(double v);
    static DistSpec uniform(double lo, double hi);
    static DistSpec beta(double alpha, double beta);
    static DistSpec gamma(double shape, double scale);
    static DistSpec poisson(double rate);
    static DistSpec dirichlet(std::vector<double> alpha);

    double mean() const;
    bool is_dirichlet() const { return family == DistFamily::Dirichlet; }
};

// One scalar draw. Dirichlet specs must go through sample_vector.
double sample(const DistSpec& d, RngStream& s);

// One vector draw; scalar families return a single-element vector.
// Dirichlet output lies on the simplex (components >= 0, sum == 1).
std::vector<double> sample_vector(const DistSpec& d, RngStream& s);

// Integer draw for count-valued specs (Poisson or PointMass).
int sample_count(const DistSpec& d, RngStream& s);

// Index drawn from a discrete distribution with the given weights.
int sample_multinomial(std::span<const double> weights, RngStream& s);

// Entry-combination weights for the generic-vs-targeted construction: draw
// g from the beta; mass g goes to the all-entries combination and (1-g)/n
// to each of the n single entries. Returned layout: [all, e1, ..., en].
std::vector<double> generic_vs_targeted_entry(const DistSpec& generic_prob, int n_entries,
                                              RngStream& s);

std::string to_string(const DistSpec& d);

} // namespace cyrisk
