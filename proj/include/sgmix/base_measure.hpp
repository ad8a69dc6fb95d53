#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sgmix/distributions.hpp"
#include "sgmix/rng.hpp"

namespace sgmix {

// Atom parameters for one mixture component. The slot meaning is fixed by
// the kernel family: location-scale 1-D uses (scale, mu); location-modulation
// uses (xi, phi, mu); the 2-D shearlet family uses (a, s, mu0, mu1).
// `component` is the latent indicator when a factor carries a mixture prior.
struct Atom {
    std::array<double, 4> v{};
    std::int8_t arity = 0;
    std::int8_t component = 0;
};

// Reparameterization used for random-walk moves on a factor.
struct Transform {
    enum class Kind { identity, log, logit };
    Kind kind = Kind::identity;
    double lo = 0.0;  // logit bounds
    double hi = 1.0;

    double to_unconstrained(double x) const;
    double from_unconstrained(double u) const;
    // log |d constrained / d unconstrained| at the constrained value x.
    double log_jacobian(double x) const;
};

// One scalar factor of the base probability measure F.
class ScalarPrior {
public:
    static ScalarPrior normal(double mean, double sd);
    // Normal restricted to (0, inf), sampled by rejection.
    static ScalarPrior truncated_normal(double mean, double sd);
    static ScalarPrior uniform(double lo, double hi);
    static ScalarPrior gamma(double shape, double rate);
    // Two-component Gamma mixture; the weights live in the chain state and
    // are passed in at sample/density time.
    static ScalarPrior gamma_mixture(double shape1, double rate1, double shape2, double rate2);

    bool is_mixture() const { return kind_ == Kind::gamma_mixture; }

    // Draws a value; for a mixture factor also picks the component (written
    // to *component_out) using the supplied weights.
    double sample(Rng& rng, std::span<const double> mix_weights = {},
                  int* component_out = nullptr) const;

    // Density conditional on the mixture component (ignored for plain
    // factors). Includes log(weight) for mixture factors.
    double log_density(double x, int component = 0,
                       std::span<const double> mix_weights = {}) const;

    Transform transform() const;

    // Approximate prior standard deviation in the transformed domain; used
    // to scale random-walk proposals per factor.
    double unconstrained_scale() const;

    // Component density without the weight, for indicator resampling.
    double log_component_density(double x, int component) const;

private:
    enum class Kind { normal, truncated_normal, uniform, gamma, gamma_mixture };
    Kind kind_ = Kind::normal;
    double p1_ = 0.0, p2_ = 1.0;  // (mean,sd) | (lo,hi) | (shape,rate) | comp1
    double p3_ = 0.0, p4_ = 1.0;  // comp2 of gamma_mixture
};

// Base distribution alpha * F over atom parameters, as a product of scalar
// factors. alpha is the total mass; each factor integrates to one.
struct BaseMeasure {
    double alpha = 1.0;
    std::vector<ScalarPrior> factors;

    void validate() const;
    int arity() const { return static_cast<int>(factors.size()); }
    // Index of the factor with a mixture prior, or -1.
    int mixture_factor() const;

    Atom sample_atom(Rng& rng, std::span<const double> mix_weights = {}) const;
    double log_density(const Atom& atom, std::span<const double> mix_weights = {}) const;
};

}  // namespace sgmix
