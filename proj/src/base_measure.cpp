#include "sgmix/base_measure.hpp"

#include <cmath>
#include <limits>

#include "sgmix/errors.hpp"

namespace sgmix {

double Transform::to_unconstrained(double x) const {
    switch (kind) {
        case Kind::identity: return x;
        case Kind::log: return std::log(x);
        case Kind::logit: {
            double t = (x - lo) / (hi - lo);
            return std::log(t / (1.0 - t));
        }
    }
    return x;
}

double Transform::from_unconstrained(double u) const {
    switch (kind) {
        case Kind::identity: return u;
        case Kind::log: return std::exp(u);
        case Kind::logit: {
            double s = 1.0 / (1.0 + std::exp(-u));
            return lo + (hi - lo) * s;
        }
    }
    return u;
}

double Transform::log_jacobian(double x) const {
    switch (kind) {
        case Kind::identity: return 0.0;
        case Kind::log: return std::log(x);
        case Kind::logit: {
            double t = (x - lo) / (hi - lo);
            return std::log((hi - lo) * t * (1.0 - t));
        }
    }
    return 0.0;
}

ScalarPrior ScalarPrior::normal(double mean, double sd) {
    if (!(sd > 0.0)) throw ParameterError("ScalarPrior::normal: sd must be positive");
    ScalarPrior p;
    p.kind_ = Kind::normal;
    p.p1_ = mean;
    p.p2_ = sd;
    return p;
}

ScalarPrior ScalarPrior::truncated_normal(double mean, double sd) {
    if (!(sd > 0.0)) throw ParameterError("ScalarPrior::truncated_normal: sd must be positive");
    ScalarPrior p;
    p.kind_ = Kind::truncated_normal;
    p.p1_ = mean;
    p.p2_ = sd;
    return p;
}

ScalarPrior ScalarPrior::uniform(double lo, double hi) {
    if (!(hi > lo)) throw ParameterError("ScalarPrior::uniform: hi must exceed lo");
    ScalarPrior p;
    p.kind_ = Kind::uniform;
    p.p1_ = lo;
    p.p2_ = hi;
    return p;
}

ScalarPrior ScalarPrior::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
        throw ParameterError("ScalarPrior::gamma: parameters must be positive");
    }
    ScalarPrior p;
    p.kind_ = Kind::gamma;
    p.p1_ = shape;
    p.p2_ = rate;
    return p;
}

ScalarPrior ScalarPrior::gamma_mixture(double shape1, double rate1, double shape2, double rate2) {
    if (!(shape1 > 0.0) || !(rate1 > 0.0) || !(shape2 > 0.0) || !(rate2 > 0.0)) {
        throw ParameterError("ScalarPrior::gamma_mixture: parameters must be positive");
    }
    ScalarPrior p;
    p.kind_ = Kind::gamma_mixture;
    p.p1_ = shape1;
    p.p2_ = rate1;
    p.p3_ = shape2;
    p.p4_ = rate2;
    return p;
}

double ScalarPrior::sample(Rng& rng, std::span<const double> mix_weights,
                           int* component_out) const {
    switch (kind_) {
        case Kind::normal: return p1_ + p2_ * rng.normal();
        case Kind::truncated_normal: return sample_truncated_normal(p1_, p2_, rng);
        case Kind::uniform: return rng.uniform(p1_, p2_);
        case Kind::gamma: return sample_gamma(p1_, p2_, rng);
        case Kind::gamma_mixture: {
            double w0 = mix_weights.empty() ? 0.5 : mix_weights[0];
            int c = rng.uniform() < w0 ? 0 : 1;
            if (component_out) *component_out = c;
            return c == 0 ? sample_gamma(p1_, p2_, rng) : sample_gamma(p3_, p4_, rng);
        }
    }
    return 0.0;
}

double ScalarPrior::log_density(double x, int component,
                                std::span<const double> mix_weights) const {
    switch (kind_) {
        case Kind::normal: return log_normal_density(x, p1_, p2_);
        case Kind::truncated_normal: return log_truncated_normal_density(x, p1_, p2_);
        case Kind::uniform:
            if (x < p1_ || x > p2_) return -std::numeric_limits<double>::infinity();
            return -std::log(p2_ - p1_);
        case Kind::gamma: return log_gamma_density(x, p1_, p2_);
        case Kind::gamma_mixture: {
            double w = mix_weights.empty() ? 0.5
                                           : mix_weights[component == 0 ? 0 : 1];
            return std::log(w) + log_component_density(x, component);
        }
    }
    return 0.0;
}

double ScalarPrior::log_component_density(double x, int component) const {
    if (kind_ != Kind::gamma_mixture) return log_density(x);
    return component == 0 ? log_gamma_density(x, p1_, p2_)
                          : log_gamma_density(x, p3_, p4_);
}

namespace {

// trigamma(a) = Var(log X) for X ~ Gamma(a, rate); asymptotic series with
// recurrence for small arguments.
double trigamma(double a) {
    double acc = 0.0;
    while (a < 6.0) {
        acc += 1.0 / (a * a);
        a += 1.0;
    }
    double inv = 1.0 / a;
    double inv2 = inv * inv;
    return acc + inv * (1.0 + 0.5 * inv + inv2 / 6.0 - inv2 * inv2 / 30.0);
}

}  // namespace

double ScalarPrior::unconstrained_scale() const {
    switch (kind_) {
        case Kind::normal: return p2_;
        case Kind::truncated_normal: return std::max(p2_ / std::max(p1_, p2_), 0.1);
        case Kind::uniform: return 1.8;  // SD of logit(U) is pi/sqrt(3)
        case Kind::gamma: return std::sqrt(trigamma(p1_));
        case Kind::gamma_mixture:
            return std::max(std::sqrt(trigamma(p1_)), std::sqrt(trigamma(p3_)));
    }
    return 1.0;
}

Transform ScalarPrior::transform() const {
    switch (kind_) {
        case Kind::normal: return {Transform::Kind::identity};
        case Kind::truncated_normal: return {Transform::Kind::log};
        case Kind::uniform: return {Transform::Kind::logit, p1_, p2_};
        case Kind::gamma: return {Transform::Kind::log};
        case Kind::gamma_mixture: return {Transform::Kind::log};
    }
    return {Transform::Kind::identity};
}

void BaseMeasure::validate() const {
    if (!(alpha > 0.0)) throw ParameterError("BaseMeasure: alpha must be positive");
    if (factors.empty() || factors.size() > 4) {
        throw ParameterError("BaseMeasure: needs 1 to 4 factors");
    }
}

int BaseMeasure::mixture_factor() const {
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].is_mixture()) return static_cast<int>(i);
    }
    return -1;
}

Atom BaseMeasure::sample_atom(Rng& rng, std::span<const double> mix_weights) const {
    Atom atom;
    atom.arity = static_cast<std::int8_t>(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        int comp = 0;
        atom.v[i] = factors[i].sample(rng, mix_weights, &comp);
        if (factors[i].is_mixture()) atom.component = static_cast<std::int8_t>(comp);
    }
    return atom;
}

double BaseMeasure::log_density(const Atom& atom, std::span<const double> mix_weights) const {
    double total = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        total += factors[i].log_density(atom.v[i], atom.component, mix_weights);
    }
    return total;
}

}  // namespace sgmix
