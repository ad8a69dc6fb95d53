#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sgmix/base_measure.hpp"
#include "sgmix/mother.hpp"
#include "sgmix/particle_measure.hpp"

namespace sgmix {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct Mat2 {
    double a = 1.0, b = 0.0;  // [a b]
    double c = 0.0, d = 1.0;  // [c d]

    double det() const { return a * d - b * c; }
    Mat2 inverse() const;
    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    // Spectral condition number via singular values.
    double cond() const;
    double spectral_norm() const;
};

// Dilation of the form [[1,s],[0,1]] * [[a,0],[0,sqrt(a)]]; requires a > 0.
struct ShearletMatrix {
    double a = 1.0;  // dilation coefficient
    double s = 0.0;  // shear coefficient

    Mat2 matrix() const;
    void validate() const;
};

// Condition-number threshold beyond which a dilation matrix is treated as
// numerically singular.
inline constexpr double kSingularCondThreshold = 1e12;

// Location-scale kernel K_A(x - mu) = g(A^{-1}(x - mu)).
double eval_location_scale(const MotherFunction& g, double A, double mu, double x);
double eval_location_scale(const MotherFunction& g, const Mat2& A, Vec2 mu, Vec2 x);

// Location-modulation kernel g(x - mu) * cos(sum_i xi_i (x_i - mu_i) + phi).
double eval_location_modulation(const MotherFunction& g, double xi, double mu, double phi,
                                double x);
double eval_location_modulation(const MotherFunction& g, Vec2 xi, Vec2 mu, double phi,
                                Vec2 x);

// Hyperparameters of the atom-parameter priors for the supported families.
struct FamilyPriors {
    double translation_mean = 0.5;  // N(0.5, 0.3) on [0,1]-scaled locations
    double translation_sd = 0.3;
    // Bimodal prior on the inverse bandwidth lambda(A^{-1}).
    double scale_shape1 = 30.0, scale_rate1 = 0.06;  // expectation 500
    double scale_shape2 = 2.0, scale_rate2 = 0.04;   // expectation 50
    // Location-modulation extras.
    double frequency_sd = 20.0;
    // 2-D shearlet extras.
    double ct_tau = 0.25;      // variance of each N(0, tau) location coordinate
    double ct_sigma_a = 0.25;  // sd of the dilation coefficient around 1
    double ct_sigma_s = 0.5;   // sd of the shear coefficient around 0
};

// A kernel family bundles atom layout, pointwise evaluation, the base
// measure over atom parameters, and the reparameterization used by
// random-walk moves.
class KernelFamily {
public:
    enum class Id { gauss_ls, symmlet8_ls, gauss_lm, gauss_shearlet };

    virtual ~KernelFamily() = default;

    Id id() const { return id_; }
    int space_dim() const { return space_dim_; }
    int arity() const { return base_.arity(); }
    const BaseMeasure& base() const { return base_; }
    BaseMeasure& base() { return base_; }

    // K(atom; x); x points at space_dim() doubles.
    virtual double eval(const Atom& atom, const double* x) const = 0;

    // Boundedness guard: throws ParameterError when the atom admits no
    // finite sup-norm bound or violates the family constraints.
    virtual void validate_atom(const Atom& atom) const = 0;
    virtual double sup_norm_bound(const Atom& atom) const = 0;

    // 1-D families: center and half-width outside of which the kernel
    // evaluates to exactly zero in double precision. Enables sparse rows.
    virtual double center(const Atom& atom) const { (void)atom; return 0.0; }
    virtual double support_radius(const Atom& atom) const {
        (void)atom;
        return std::numeric_limits<double>::infinity();
    }

    Atom sample_atom(Rng& rng, std::span<const double> mix_weights = {}) const {
        return base_.sample_atom(rng, mix_weights);
    }
    double log_base_density(const Atom& atom, std::span<const double> mix_weights = {}) const {
        return base_.log_density(atom, mix_weights);
    }

    void to_unconstrained(const Atom& atom, double* u) const;
    Atom from_unconstrained(const double* u, int component) const;
    double log_jacobian(const Atom& atom) const;

protected:
    KernelFamily(Id id, int space_dim, BaseMeasure base)
        : id_(id), space_dim_(space_dim), base_(std::move(base)) {}

    Id id_;
    int space_dim_;
    BaseMeasure base_;
};

std::unique_ptr<KernelFamily> make_family(KernelFamily::Id id, const FamilyPriors& priors,
                                          double alpha = 1.0);
KernelFamily::Id family_id_from_name(const std::string& name);
std::string family_name(KernelFamily::Id id);

// f(x) = sqrt(T/p) sum_i J_i K(X_i; x). Validates every atom against the
// family's boundedness guard.
double mixture_eval(const ParticleMeasure& q, const KernelFamily& family, const double* x);
std::vector<double> mixture_eval_grid(const ParticleMeasure& q, const KernelFamily& family,
                                      std::span<const double> points);

}  // namespace sgmix
