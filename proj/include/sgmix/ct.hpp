#pragma once

#include <cstdint>
#include <vector>

#include "sgmix/sampler.hpp"

namespace sgmix {

struct CtConfig {
    int resolution = 32;
    int n_r = 32;
    int m_theta = 16;
    double sigma2 = 0.1;
    SamplerConfig sampler;
    double discard_fraction = 0.5;  // burn-in discarded from the fixed-length chain
    std::uint64_t seed = 1;

    void validate() const;
};

struct CtResult {
    int resolution = 0;
    std::vector<double> phantom;          // resolution^2, row-major
    std::vector<double> sinogram_clean;   // n_r * m_theta
    std::vector<double> sinogram_noisy;
    std::vector<double> reconstruction;   // resolution^2
    double rmse_reconstruction = 0.0;
    double rmse_zero_baseline = 0.0;
    ChainTrace trace;
};

// Exact Radon transform of the Shepp-Logan phantom (sum of ellipse chords).
double shepp_logan_radon(double r, double theta);

// Full pipeline: phantom, synthetic noisy Radon data, 2-D shearlet
// location-scale chain, posterior-mean image.
CtResult run_ct(const CtConfig& config);

}  // namespace sgmix
