#pragma once

#include <span>
#include <vector>

#include "sgmix/errors.hpp"
#include "sgmix/sampler.hpp"

namespace sgmix {

struct GewekeResult {
    double z = 0.0;
    double frac_a = 0.1;
    double frac_b = 0.5;
    bool passed = false;  // |z| < 1.96
};

// Geweke Z-statistic: standardized difference of the mean over the first
// frac_a of the series and the mean over the last frac_b, with variances
// from the spectral density at frequency zero of each window.
GewekeResult geweke_z(std::span<const double> series, double frac_a = 0.1,
                      double frac_b = 0.5);

// Spectral density at frequency zero, estimated by overlapping batch means
// with batch length floor(sqrt(n)).
double spectral_density_zero(std::span<const double> window);

struct BurnInDecision {
    double discard_fraction = 0.0;  // one of {0, .1, .2, .3, .4}
    bool converged = false;
    std::vector<GewekeResult> stages;
};

// Applies geweke_z after discarding 0%, 10%, 20%, 30%, 40% of the series,
// returning the first passing fraction; converged=false when all fail.
BurnInDecision burn_in_protocol(std::span<const double> loglik);

// Effective sample size n / (1 + 2 sum rho_k), autocorrelations summed by
// the initial-positive-sequence rule, clamped to (0, n].
double ess(std::span<const double> series);

struct ConvergenceConfig {
    double target_ess = 1000.0;
    long initial_iterations = 10000;  // measured block after adaptation
    long extension_block = 5000;
    long max_iterations = 200000;  // per attempt, counting from init
    int max_restarts = 5;

    void validate() const;
};

struct ConvergenceReport {
    BurnInDecision burn_in;
    double ess_value = 0.0;
    bool ess_reached = false;
    int restarts_used = 0;
    long total_iterations = 0;
    bool converged = false;
};

struct ConvergedRun {
    ChainTrace trace;
    ConvergenceReport report;
    // Records before this index belong to adaptation or discarded burn-in.
    std::size_t kept_from = 0;
};

// Burn-in failure after exhausting restarts.
class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& msg, std::vector<ChainTrace> partial)
        : Error(msg), partial_traces(std::move(partial)) {}
    std::vector<ChainTrace> partial_traces;
};

// Runs chains until the burn-in protocol accepts and ESS of the
// log-likelihood reaches the target (or the iteration cap); restarts from a
// fresh prior initialization on burn-in failure, up to max_restarts.
ConvergedRun run_until_converged(const SamplerConfig& sampler_config,
                                 const ObservationModel& model, const KernelFamily& family,
                                 const ConvergenceConfig& convergence, Rng master);

}  // namespace sgmix
