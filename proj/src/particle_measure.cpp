#include "sgmix/particle_measure.hpp"

#include <cmath>

#include "sgmix/distributions.hpp"
#include "sgmix/errors.hpp"

namespace sgmix {

double ParticleMeasure::weight(int i) const {
    int p = particle_count();
    return std::sqrt(total_mass / p) * jumps[i];
}

void ParticleMeasure::validate() const {
    if (jumps.size() != atoms.size() || jumps.empty()) {
        throw ParameterError("ParticleMeasure: jumps/atoms size mismatch");
    }
    if (total_mass < 0.0) throw ParameterError("ParticleMeasure: T must be nonnegative");
}

ParticleMeasure build_particle_measure(double alpha, double eta, const BaseMeasure& base,
                                       int p, Rng& rng,
                                       std::span<const double> mix_weights) {
    if (!(alpha > 0.0) || !(eta > 0.0)) {
        throw ParameterError("build_particle_measure: alpha and eta must be positive");
    }
    if (p < 1) throw ParameterError("build_particle_measure: p must be >= 1");

    ParticleMeasure q;
    q.total_mass = sample_gamma(alpha, eta, rng);
    q.jumps.resize(p);
    SGaParams unit{1.0, 1.0};
    for (int i = 0; i < p; ++i) q.jumps[i] = sample_sga(unit, rng);

    BaseMeasure urn_base = base;
    urn_base.alpha = alpha;
    PolyaUrnDraw draw = sample_polya_urn(urn_base, p, rng, mix_weights);
    q.atoms = std::move(draw.sequence);
    q.labels = std::move(draw.labels);
    q.urn = std::move(draw.state);
    return q;
}

}  // namespace sgmix
