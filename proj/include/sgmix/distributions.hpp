#pragma once

#include <span>
#include <vector>

#include "sgmix/rng.hpp"

namespace sgmix {

// Parameters of the symmetric Gamma distribution SGa(a,b): the law of X - Y
// for independent X, Y ~ Gamma(a,b). Fourier transform (1 + t^2/b^2)^-a.
struct SGaParams {
    double a = 1.0;  // shape
    double b = 1.0;  // rate of each Gamma factor

    void validate() const;
};

// Gamma(shape, rate), mean shape/rate. Throws ParameterError on nonpositive
// parameters.
double sample_gamma(double shape, double rate, Rng& rng);

// Difference of two independent Gamma(a,b) draws.
double sample_sga(const SGaParams& params, Rng& rng);

// Exact moments of SGa(a,b): order 2n gives (2n)!/n! * rising(a,n) / b^{2n};
// odd orders are 0, order 0 is 1.
double sga_moment(const SGaParams& params, int order);

// InverseGamma(shape, scale): 1/X for X ~ Gamma(shape, rate=scale).
double sample_inverse_gamma(double shape, double scale, Rng& rng);

double sample_beta(double a, double b, Rng& rng);

std::vector<double> sample_dirichlet(std::span<const double> concentration, Rng& rng);

// Log densities used in Metropolis-Hastings ratios and Gibbs conditionals.
double log_gamma_density(double x, double shape, double rate);
double log_normal_density(double x, double mean, double sd);
double log_inverse_gamma_density(double x, double shape, double scale);
// Normal(mean, sd) conditioned on x > 0.
double log_truncated_normal_density(double x, double mean, double sd);
// Normal(mean, sd) conditioned on x > 0; rejection sampler.
double sample_truncated_normal(double mean, double sd, Rng& rng);

}  // namespace sgmix
