#pragma once

#include <string>
#include <vector>

#include "sgmix/diagnostics.hpp"

namespace sgmix {

// The twelve wavelet-regression benchmark signals on [0,1], each taking
// values in [0.2, 0.8].
const std::vector<std::string>& test_function_names();
double eval_test_function(const std::string& name, double x);

// Fixed uniform design x_i = (i - 1/2)/n on [0,1].
std::vector<double> uniform_design(int n);

// Noise level sigma = SD(f0 at design points)/rsnr, SD with denominator n.
double calibrate_noise(std::span<const double> f0_values, double rsnr);

double rmse(std::span<const double> estimate, std::span<const double> truth);

struct CredibleBands {
    std::vector<double> mean;
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t kept = 0;
};

// Pointwise min/max envelope of the `level` fraction of snapshots closest in
// l2 distance to the posterior mean curve.
CredibleBands credible_bands(const std::vector<std::vector<double>>& snapshots,
                             double level = 0.95);

struct BenchmarkSpec {
    std::string function = "blip";
    int n = 128;
    double rsnr = 3.0;
    // Overrides RSNR-calibrated noise when positive (for noiseless smokes).
    double sigma_override = -1.0;
    int replications = 10;
    KernelFamily::Id kernel = KernelFamily::Id::gauss_ls;
    SamplerConfig sampler;
    ConvergenceConfig convergence;
    std::uint64_t master_seed = 1;
    int threads = 1;
    bool keep_curves = false;  // retain per-replication mean/band curves

    void validate() const;
};

struct ReplicationResult {
    int index = 0;
    double rmse = 0.0;
    bool converged = false;
    bool ess_reached = false;
    double ess_value = 0.0;
    long iterations = 0;
    int restarts = 0;
    double jump_acceptance = 0.0;  // particle-count monitor
    double band_coverage = 0.0;    // fraction of grid points with f0 in band
    // Populated only when BenchmarkSpec::keep_curves is set.
    std::vector<double> posterior_mean;
    std::vector<double> band_lower, band_upper;
};

struct BenchmarkReport {
    std::string function;
    int n = 0;
    double sigma = 0.0;
    std::vector<double> design;
    std::vector<ReplicationResult> replications;
    double mean_rmse = 0.0;  // over converged replications
    double rmse_stderr = 0.0;
    int failures = 0;
    double wall_seconds = 0.0;
};

// Runs `replications` chains on noise-regenerated copies of the same
// design/f0 (design and f0 bit-identical across replications), in parallel
// with per-replication derived seeds.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

// Posterior mean and bands for a single converged run on a dataset.
struct FitResult {
    std::vector<double> design;
    std::vector<double> posterior_mean;
    CredibleBands bands;
    ConvergenceReport report;
    ChainTrace trace;
    std::size_t kept_from = 0;
};

FitResult fit_regression(const RegressionDataset& data, KernelFamily::Id kernel,
                         const SamplerConfig& sampler_config,
                         const ConvergenceConfig& convergence, Rng rng);

}  // namespace sgmix
