#include "sgmix/distributions.hpp"

#include <cmath>
#include <random>

#include "sgmix/errors.hpp"

namespace sgmix {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void SGaParams::validate() const {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ParameterError("SGaParams: a and b must be positive");
    }
}

double sample_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
        throw ParameterError("sample_gamma: shape and rate must be positive");
    }
    return std::gamma_distribution<double>(shape, 1.0 / rate)(rng.engine());
}

double sample_sga(const SGaParams& params, Rng& rng) {
    params.validate();
    if (params.a == 1.0) {
        // Gamma(1,b) is Exponential(b); the difference of two exponentials
        // is log(u2/u1)/b. Hot path for the SGa(1,1) jumps.
        double u1 = -std::log(rng.uniform(0.0, 1.0) + 1e-300);
        double u2 = -std::log(rng.uniform(0.0, 1.0) + 1e-300);
        return (u1 - u2) / params.b;
    }
    double x = sample_gamma(params.a, params.b, rng);
    double y = sample_gamma(params.a, params.b, rng);
    return x - y;
}

double sga_moment(const SGaParams& params, int order) {
    params.validate();
    if (order < 0) throw ParameterError("sga_moment: order must be >= 0");
    if (order == 0) return 1.0;
    if (order % 2 == 1) return 0.0;
    int n = order / 2;
    // (2n)!/n! * (a)(a+1)...(a+n-1) / b^{2n}
    double value = 1.0;
    for (int k = n + 1; k <= 2 * n; ++k) value *= static_cast<double>(k);
    for (int k = 0; k < n; ++k) value *= (params.a + k);
    return value / std::pow(params.b, 2.0 * n);
}

double sample_inverse_gamma(double shape, double scale, Rng& rng) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw ParameterError("sample_inverse_gamma: parameters must be positive");
    }
    double g = sample_gamma(shape, scale, rng);
    return 1.0 / g;
}

double sample_beta(double a, double b, Rng& rng) {
    double x = sample_gamma(a, 1.0, rng);
    double y = sample_gamma(b, 1.0, rng);
    return x / (x + y);
}

std::vector<double> sample_dirichlet(std::span<const double> concentration, Rng& rng) {
    std::vector<double> w(concentration.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = sample_gamma(concentration[i], 1.0, rng);
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

double log_gamma_density(double x, double shape, double rate) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_normal_density(double x, double mean, double sd) {
    double z = (x - mean) / sd;
    return -0.5 * kLog2Pi - std::log(sd) - 0.5 * z * z;
}

double log_inverse_gamma_density(double x, double shape, double scale) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double log_truncated_normal_density(double x, double mean, double sd) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    double mass = 0.5 * std::erfc(-mean / (sd * std::sqrt(2.0)));
    return log_normal_density(x, mean, sd) - std::log(mass);
}

double sample_truncated_normal(double mean, double sd, Rng& rng) {
    for (int tries = 0; tries < 10000; ++tries) {
        double x = mean + sd * rng.normal();
        if (x > 0.0) return x;
    }
    throw NumericError("sample_truncated_normal: rejection sampler failed");
}

}  // namespace sgmix
