#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sgmix/models.hpp"

namespace sgmix {

struct GammaPrior {
    double shape = 1.0;
    double rate = 1.0;
};

struct InverseGammaPrior {
    double shape = 2.0;
    double scale = 1.0;
};

struct SamplerPriors {
    GammaPrior alpha_prior{2.0, 0.5};  // expectation 4
    GammaPrior t_prior{5.0, 10.0};     // expectation 0.5
    // Conjugate posterior mean is (scale + SSR/2)/(shape + n/2 - 1); a small
    // scale keeps the prior from flooring the noise estimate on low-noise
    // data while the likelihood still dominates when SSR is large.
    InverseGammaPrior sigma2_prior{2.0, 0.01};
    std::array<double, 2> scale_dirichlet{1.0, 1.0};
    FamilyPriors family;
};

struct SamplerConfig {
    int p = 150;       // particle count
    int kappa0 = 3;    // auxiliary components per allocation move
    long n_iterations = 10000;
    int thinning = 1;
    long adapt_iterations = 2000;  // adaptation window at the start of a run
    int adapt_window = 50;         // sweeps between step-size updates
    double target_acceptance = 0.3;
    SamplerPriors priors;
    std::uint64_t seed = 1;
    bool update_sigma2 = true;
    bool update_alpha = true;
    bool update_scale_weights = true;
    // Joint (T, J) -> (c^2 T, J/c) move along the likelihood-invariant ridge.
    bool rescale_move = true;
    int location_passes = 1;  // step-2 sweeps per Gibbs cycle
    int jump_passes = 1;      // step-3 sweeps per Gibbs cycle
    double init_step_locations = 0.25;
    double init_step_mass = 0.5;
    bool record_curves = false;           // fitted values per kept iteration
    bool record_state_snapshots = false;  // (C, X*, J, T) per kept iteration

    void validate() const;
};

struct TraceRecord {
    long iter = 0;
    double loglik = 0.0;
    double T = 0.0;
    double sigma2 = 0.0;
    double alpha = 0.0;
    int n_clusters = 0;
    double acc_locations = 0.0;
    double acc_jumps = 0.0;
    double acc_mass = 0.0;
    bool underflow = false;
};

struct StateSnapshot {
    std::vector<int> C;
    std::vector<Atom> Xstar;
    std::vector<double> J;
    double T = 0.0;
};

struct ChainTrace {
    std::vector<TraceRecord> records;
    std::vector<std::vector<double>> curves;  // fitted values at design sites
    std::vector<StateSnapshot> snapshots;

    long long accepts_locations = 0, proposals_locations = 0;
    long long accepts_jumps = 0, proposals_jumps = 0;
    long long accepts_mass = 0, proposals_mass = 0;
    long long underflow_events = 0;

    std::vector<double> loglik_series() const;
    std::vector<double> series(const std::string& column) const;
};

// Full sampler state over (C, X*, J, T, sigma2, alpha, mixture weights).
struct ChainState {
    std::vector<int> C;                    // particle -> cluster
    std::vector<Atom> Xstar;               // unique atoms
    std::vector<int> counts;               // occupancy per cluster
    std::vector<double> cluster_jump_sum;  // sum of J_i within each cluster
    std::vector<double> J;
    double T = 1.0;
    double sigma2 = 1.0;
    double alpha = 1.0;
    std::vector<double> mix_weights;  // scale-mixture weights (empty if unused)
    FittedValuesCache cache;
    double step_locations = 0.25;
    double step_mass = 0.5;

    int n_clusters() const { return static_cast<int>(Xstar.size()); }
    // Throws if the clustering bookkeeping is inconsistent.
    void check_invariants(int p) const;
};

// Pure Metropolis-Hastings ratio assemblies (unit-testable against
// hand-built values).
double log_ratio_total_mass(double t_old, double t_new, double ll_old, double ll_new,
                            const GammaPrior& prior);
double log_ratio_location(double ll_old, double ll_new, double log_base_old,
                          double log_base_new, double log_jac_old, double log_jac_new);

// Robbins-Monro step-size control: multiply by exp(gain * (rate - target))
// with gain 1/sqrt(window_index); the window index is 1-based.
double adapted_step_size(double step, double rate, double target, long window_index);

// Escobar-West auxiliary-variable Gibbs update for the Dirichlet mass alpha.
double sample_alpha_west(double alpha_old, int kappa, int p, const GammaPrior& prior,
                         Rng& rng);
// Unnormalized log full conditional of alpha given kappa occupied clusters.
double log_alpha_conditional(double alpha, int kappa, int p, const GammaPrior& prior);

// Indicator/weight Gibbs block for the bimodal scale prior; exposed for
// testing. scales: the mixture-factor value of each unique atom.
struct MixtureWeightsUpdate {
    std::vector<int> indicators;
    std::vector<double> weights;
};
MixtureWeightsUpdate update_scale_mixture(const std::vector<double>& scales,
                                          const std::vector<int>& indicators_in,
                                          const ScalarPrior& mixture_factor,
                                          std::span<const double> weights_in,
                                          std::span<const double> concentration, Rng& rng);

class GibbsSampler {
public:
    GibbsSampler(SamplerConfig config, const ObservationModel& model,
                 const KernelFamily& family, Rng rng);

    // Draws the initial state from the prior; retries up to 100 times if the
    // log-likelihood is non-finite.
    void init_from_prior();

    void sweep(bool adapt);
    void run(long iterations, bool adapt);
    void record();

    const ChainState& state() const { return state_; }
    ChainState& state() { return state_; }
    ChainTrace& trace() { return trace_; }
    const SamplerConfig& config() const { return config_; }
    long iteration() const { return iter_; }
    double current_loglik() const;

    // Individual Gibbs blocks (public for direct testing).
    void step_allocations();
    void step_locations();
    void step_jumps();
    void step_total_mass();
    void step_rescale();
    void step_sigma2();
    void step_alpha();
    void step_scale_mixture_weights();
    void adapt_step_sizes();

    // One allocation move for particle i (inner operation of step 1).
    void allocate_particle(int i);

private:
    void remove_cluster(int k);
    void refresh_cluster_sums();
    double weight_coef() const;

    SamplerConfig config_;
    const ObservationModel* model_;
    const KernelFamily* family_;
    Rng rng_;
    ChainState state_;
    ChainTrace trace_;
    long iter_ = 0;

    // Per-sweep and per-adaptation-window acceptance counters.
    long sweep_acc_loc_ = 0, sweep_prop_loc_ = 0;
    long sweep_acc_jump_ = 0, sweep_prop_jump_ = 0;
    long sweep_acc_mass_ = 0, sweep_prop_mass_ = 0;
    bool sweep_underflow_ = false;
    long win_acc_loc_ = 0, win_prop_loc_ = 0;
    long win_acc_mass_ = 0, win_prop_mass_ = 0;
    long adapt_windows_done_ = 0;
    int sweeps_in_window_ = 0;

    std::vector<double> scratch_row_;
};

// Runs a complete chain: prior initialization, n_iterations sweeps with
// adaptation during the first adapt_iterations, records every `thinning`
// sweeps (plus the initial state). Deterministic given the seed.
ChainTrace run_chain(const SamplerConfig& config, const ObservationModel& model,
                     const KernelFamily& family, Rng rng);

}  // namespace sgmix
