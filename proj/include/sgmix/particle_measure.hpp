#pragma once

#include <vector>

#include "sgmix/polya_urn.hpp"

namespace sgmix {

// Finite particle approximation Q_p = sqrt(T/p) * sum_i J_i delta_{X_i} of a
// symmetric Gamma random measure: T ~ Ga(alpha, eta), J_i iid SGa(1,1), X a
// Polya urn sequence with base alpha*F. As p grows, Q_p converges in
// distribution to the symmetric Gamma random measure with base alpha*F and
// scale parameter sqrt(eta) -- callers wanting limit scale s must pass
// eta = s^2.
struct ParticleMeasure {
    double total_mass = 0.0;      // T
    std::vector<double> jumps;    // J_1..J_p
    std::vector<Atom> atoms;      // X_1..X_p
    std::vector<int> labels;      // clustering of the urn draw
    PolyaUrnState urn;

    int particle_count() const { return static_cast<int>(jumps.size()); }
    // Evaluation weight of atom i: sqrt(T/p) * J_i.
    double weight(int i) const;
    void validate() const;
};

ParticleMeasure build_particle_measure(double alpha, double eta, const BaseMeasure& base,
                                       int p, Rng& rng,
                                       std::span<const double> mix_weights = {});

}  // namespace sgmix
