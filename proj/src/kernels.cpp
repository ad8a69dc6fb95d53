#include "sgmix/kernels.hpp"

#include <cmath>

#include "sgmix/errors.hpp"

namespace sgmix {

Mat2 Mat2::inverse() const {
    double dt = det();
    if (dt == 0.0 || !std::isfinite(dt)) {
        throw NumericError("Mat2::inverse: singular matrix");
    }
    return {d / dt, -b / dt, -c / dt, a / dt};
}

double Mat2::cond() const {
    // Singular values from the eigenvalues of A^T A.
    double p = a * a + c * c;
    double q = b * b + d * d;
    double r = a * b + c * d;
    double tr = p + q;
    double disc = std::sqrt(std::max(0.0, (p - q) * (p - q) + 4.0 * r * r));
    double smax = std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
    double smin2 = 0.5 * (tr - disc);
    if (smin2 <= 0.0) return std::numeric_limits<double>::infinity();
    return smax / std::sqrt(smin2);
}

double Mat2::spectral_norm() const {
    double p = a * a + c * c;
    double q = b * b + d * d;
    double r = a * b + c * d;
    double tr = p + q;
    double disc = std::sqrt(std::max(0.0, (p - q) * (p - q) + 4.0 * r * r));
    return std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
}

Mat2 ShearletMatrix::matrix() const {
    validate();
    double sq = std::sqrt(a);
    // [[1,s],[0,1]] * [[a,0],[0,sqrt(a)]] = [[a, s*sqrt(a)],[0, sqrt(a)]]
    return {a, s * sq, 0.0, sq};
}

void ShearletMatrix::validate() const {
    if (!(a > 0.0)) throw ParameterError("ShearletMatrix: dilation coefficient a must be > 0");
}

double eval_location_scale(const MotherFunction& g, double A, double mu, double x) {
    if (!(A > 0.0)) throw NumericError("eval_location_scale: A must be positive");
    if (A < 1.0 / kSingularCondThreshold || A > kSingularCondThreshold) {
        throw NumericError("eval_location_scale: A out of numeric range");
    }
    return g((x - mu) / A);
}

double eval_location_scale(const MotherFunction& g, const Mat2& A, Vec2 mu, Vec2 x) {
    if (A.cond() > kSingularCondThreshold) {
        throw NumericError("eval_location_scale: dilation matrix numerically singular");
    }
    Mat2 inv = A.inverse();
    Vec2 z = inv.apply({x.x - mu.x, x.y - mu.y});
    return g.radial2(z.x, z.y);
}

double eval_location_modulation(const MotherFunction& g, double xi, double mu, double phi,
                                double x) {
    return g(x - mu) * std::cos(xi * (x - mu) + phi);
}

double eval_location_modulation(const MotherFunction& g, Vec2 xi, Vec2 mu, double phi,
                                Vec2 x) {
    double dx = x.x - mu.x;
    double dy = x.y - mu.y;
    return g.radial2(dx, dy) * std::cos(xi.x * dx + xi.y * dy + phi);
}

void KernelFamily::to_unconstrained(const Atom& atom, double* u) const {
    for (int i = 0; i < arity(); ++i) {
        u[i] = base_.factors[i].transform().to_unconstrained(atom.v[i]);
    }
}

Atom KernelFamily::from_unconstrained(const double* u, int component) const {
    Atom atom;
    atom.arity = static_cast<std::int8_t>(arity());
    atom.component = static_cast<std::int8_t>(component);
    for (int i = 0; i < arity(); ++i) {
        atom.v[i] = base_.factors[i].transform().from_unconstrained(u[i]);
    }
    return atom;
}

double KernelFamily::log_jacobian(const Atom& atom) const {
    double total = 0.0;
    for (int i = 0; i < arity(); ++i) {
        total += base_.factors[i].transform().log_jacobian(atom.v[i]);
    }
    return total;
}

namespace {

// Atom layout (scale, mu) where scale = lambda(A^{-1}) is the inverse
// bandwidth: K(x) = g(scale * (x - mu)).
class LocScale1D final : public KernelFamily {
public:
    LocScale1D(Id id, const MotherFunction& g, BaseMeasure base)
        : KernelFamily(id, 1, std::move(base)), g_(g) {}

    double eval(const Atom& atom, const double* x) const override {
        return g_(atom.v[0] * (x[0] - atom.v[1]));
    }

    void validate_atom(const Atom& atom) const override {
        if (!(atom.v[0] > 0.0) || !std::isfinite(atom.v[0]) || !std::isfinite(atom.v[1])) {
            throw ParameterError("location-scale atom: scale must be positive and finite");
        }
        if (atom.v[0] < 1.0 / kSingularCondThreshold || atom.v[0] > kSingularCondThreshold) {
            throw ParameterError("location-scale atom: scale out of numeric range");
        }
    }

    double sup_norm_bound(const Atom& atom) const override {
        validate_atom(atom);
        return g_.sup_norm();
    }

    double center(const Atom& atom) const override { return atom.v[1]; }

    double support_radius(const Atom& atom) const override {
        // Gaussian: exp(-z^2/2) rounds to zero beyond |z| ~ 38.7; the
        // wavelet table is identically zero outside its support.
        double half = (g_.kind() == MotherFunction::Kind::gaussian) ? 39.0
                                                                    : g_.support().second;
        return half / atom.v[0];
    }

private:
    const MotherFunction& g_;
};

// Atom layout (xi, phi, mu): K(x) = g(x - mu) cos(xi (x - mu) + phi).
class LocMod1D final : public KernelFamily {
public:
    LocMod1D(BaseMeasure base)
        : KernelFamily(Id::gauss_lm, 1, std::move(base)), g_(MotherFunction::gaussian()) {}

    double eval(const Atom& atom, const double* x) const override {
        return eval_location_modulation(g_, atom.v[0], atom.v[2], atom.v[1], x[0]);
    }

    void validate_atom(const Atom& atom) const override {
        constexpr double half_pi = 1.5707963267948966;
        if (!(atom.v[1] >= 0.0) || !(atom.v[1] <= half_pi)) {
            throw ParameterError("location-modulation atom: phase must lie in [0, pi/2]");
        }
        if (!std::isfinite(atom.v[0]) || !std::isfinite(atom.v[2])) {
            throw ParameterError("location-modulation atom: parameters must be finite");
        }
    }

    double sup_norm_bound(const Atom& atom) const override {
        validate_atom(atom);
        return g_.sup_norm();
    }

    double center(const Atom& atom) const override { return atom.v[2]; }
    double support_radius(const Atom& atom) const override {
        (void)atom;
        return 39.0;
    }

private:
    const MotherFunction& g_;
};

// Atom layout (a, s, mu0, mu1): anisotropic Gaussian with shearlet dilation.
class GaussShearlet2D final : public KernelFamily {
public:
    GaussShearlet2D(BaseMeasure base)
        : KernelFamily(Id::gauss_shearlet, 2, std::move(base)), g_(MotherFunction::gaussian()) {}

    double eval(const Atom& atom, const double* x) const override {
        ShearletMatrix m{atom.v[0], atom.v[1]};
        return eval_location_scale(g_, m.matrix(), {atom.v[2], atom.v[3]}, {x[0], x[1]});
    }

    void validate_atom(const Atom& atom) const override {
        if (!(atom.v[0] > 0.0)) {
            throw ParameterError("shearlet atom: dilation coefficient a must be > 0");
        }
        ShearletMatrix m{atom.v[0], atom.v[1]};
        if (m.matrix().cond() > kSingularCondThreshold) {
            throw ParameterError("shearlet atom: dilation matrix numerically singular");
        }
    }

    double sup_norm_bound(const Atom& atom) const override {
        validate_atom(atom);
        return 1.0;
    }

private:
    const MotherFunction& g_;
};

}  // namespace

std::unique_ptr<KernelFamily> make_family(KernelFamily::Id id, const FamilyPriors& priors,
                                          double alpha) {
    BaseMeasure base;
    base.alpha = alpha;
    switch (id) {
        case KernelFamily::Id::gauss_ls:
        case KernelFamily::Id::symmlet8_ls: {
            base.factors = {
                ScalarPrior::gamma_mixture(priors.scale_shape1, priors.scale_rate1,
                                           priors.scale_shape2, priors.scale_rate2),
                ScalarPrior::normal(priors.translation_mean, priors.translation_sd)};
            const MotherFunction& g = (id == KernelFamily::Id::gauss_ls)
                                          ? MotherFunction::gaussian()
                                          : MotherFunction::symmlet8();
            return std::make_unique<LocScale1D>(id, g, std::move(base));
        }
        case KernelFamily::Id::gauss_lm: {
            base.factors = {ScalarPrior::normal(0.0, priors.frequency_sd),
                            ScalarPrior::uniform(0.0, 1.5707963267948966),
                            ScalarPrior::normal(priors.translation_mean, priors.translation_sd)};
            return std::make_unique<LocMod1D>(std::move(base));
        }
        case KernelFamily::Id::gauss_shearlet: {
            base.factors = {ScalarPrior::truncated_normal(1.0, priors.ct_sigma_a),
                            ScalarPrior::normal(0.0, priors.ct_sigma_s),
                            ScalarPrior::normal(0.0, std::sqrt(priors.ct_tau)),
                            ScalarPrior::normal(0.0, std::sqrt(priors.ct_tau))};
            return std::make_unique<GaussShearlet2D>(std::move(base));
        }
    }
    throw ParameterError("make_family: unknown family id");
}

KernelFamily::Id family_id_from_name(const std::string& name) {
    if (name == "gauss-ls" || name == "gaussian") return KernelFamily::Id::gauss_ls;
    if (name == "symmlet8-ls" || name == "symmlet8") return KernelFamily::Id::symmlet8_ls;
    if (name == "gauss-lm") return KernelFamily::Id::gauss_lm;
    if (name == "gauss-shearlet") return KernelFamily::Id::gauss_shearlet;
    throw ParameterError("unknown kernel family '" + name +
                         "' (expected gaussian, symmlet8, gauss-lm or gauss-shearlet)");
}

std::string family_name(KernelFamily::Id id) {
    switch (id) {
        case KernelFamily::Id::gauss_ls: return "gaussian";
        case KernelFamily::Id::symmlet8_ls: return "symmlet8";
        case KernelFamily::Id::gauss_lm: return "gauss-lm";
        case KernelFamily::Id::gauss_shearlet: return "gauss-shearlet";
    }
    return "?";
}

double mixture_eval(const ParticleMeasure& q, const KernelFamily& family, const double* x) {
    q.validate();
    int p = q.particle_count();
    double scale = std::sqrt(q.total_mass / p);
    double total = 0.0;
    for (int i = 0; i < p; ++i) {
        family.validate_atom(q.atoms[i]);
        total += q.jumps[i] * family.eval(q.atoms[i], x);
    }
    return scale * total;
}

std::vector<double> mixture_eval_grid(const ParticleMeasure& q, const KernelFamily& family,
                                      std::span<const double> points) {
    q.validate();
    int d = family.space_dim();
    if (points.size() % d != 0) {
        throw ParameterError("mixture_eval_grid: point buffer size not a multiple of dimension");
    }
    std::size_t n = points.size() / d;
    int p = q.particle_count();
    for (int i = 0; i < p; ++i) family.validate_atom(q.atoms[i]);
    double scale = std::sqrt(q.total_mass / p);
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double total = 0.0;
        for (int i = 0; i < p; ++i) {
            total += q.jumps[i] * family.eval(q.atoms[i], points.data() + j * d);
        }
        out[j] = scale * total;
    }
    return out;
}

}  // namespace sgmix
