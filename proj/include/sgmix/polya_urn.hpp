#pragma once

#include <vector>

#include "sgmix/base_measure.hpp"
#include "sgmix/rng.hpp"

namespace sgmix {

// Clustering state of a Polya urn sequence: unique atom values with their
// occupancy counts.
struct PolyaUrnState {
    std::vector<Atom> unique_values;
    std::vector<int> counts;
    double alpha = 1.0;

    int total() const;
    void validate() const;
};

struct PolyaUrnDraw {
    std::vector<Atom> sequence;  // X_1..X_p
    std::vector<int> labels;     // cluster index of each draw (reusable as C)
    PolyaUrnState state;
};

// Draws a Polya urn sequence of length p with base distribution alpha*F:
// X_1 ~ F; X_{k+1} copies an existing value with probability proportional to
// its count, or is a fresh F draw with probability proportional to alpha.
PolyaUrnDraw sample_polya_urn(const BaseMeasure& base, int p, Rng& rng,
                              std::span<const double> mix_weights = {});

}  // namespace sgmix
