#include "sgmix/polya_urn.hpp"

#include <numeric>

#include "sgmix/errors.hpp"

namespace sgmix {

int PolyaUrnState::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0);
}

void PolyaUrnState::validate() const {
    if (unique_values.size() != counts.size()) {
        throw ParameterError("PolyaUrnState: unique_values/counts size mismatch");
    }
    for (int c : counts) {
        if (c < 1) throw ParameterError("PolyaUrnState: counts must be >= 1");
    }
}

PolyaUrnDraw sample_polya_urn(const BaseMeasure& base, int p, Rng& rng,
                              std::span<const double> mix_weights) {
    base.validate();
    if (p < 1) throw ParameterError("sample_polya_urn: p must be >= 1");

    PolyaUrnDraw draw;
    draw.sequence.reserve(p);
    draw.labels.reserve(p);
    draw.state.alpha = base.alpha;

    for (int k = 0; k < p; ++k) {
        // P(fresh) = alpha / (alpha + k); otherwise copy with prob count/k.
        double u = rng.uniform() * (base.alpha + k);
        if (u < base.alpha || k == 0) {
            Atom atom = base.sample_atom(rng, mix_weights);
            draw.state.unique_values.push_back(atom);
            draw.state.counts.push_back(1);
            draw.labels.push_back(static_cast<int>(draw.state.unique_values.size()) - 1);
            draw.sequence.push_back(atom);
        } else {
            double target = u - base.alpha;
            double cum = 0.0;
            int chosen = static_cast<int>(draw.state.counts.size()) - 1;
            for (std::size_t j = 0; j < draw.state.counts.size(); ++j) {
                cum += draw.state.counts[j];
                if (target < cum) {
                    chosen = static_cast<int>(j);
                    break;
                }
            }
            draw.state.counts[chosen]++;
            draw.labels.push_back(chosen);
            draw.sequence.push_back(draw.state.unique_values[chosen]);
        }
    }
    return draw;
}

}  // namespace sgmix
