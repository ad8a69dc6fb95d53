#include "sgmix/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "sgmix/errors.hpp"

namespace sgmix {

void SamplerConfig::validate() const {
    if (p < 1) throw ParameterError("SamplerConfig: p must be >= 1");
    if (kappa0 < 1) throw ParameterError("SamplerConfig: kappa0 must be >= 1");
    if (n_iterations < 0) throw ParameterError("SamplerConfig: n_iterations must be >= 0");
    if (thinning < 1) throw ParameterError("SamplerConfig: thinning must be >= 1");
    if (adapt_iterations < 0) throw ParameterError("SamplerConfig: adapt_iterations must be >= 0");
    if (adapt_window < 1) throw ParameterError("SamplerConfig: adapt_window must be >= 1");
    if (!(target_acceptance > 0.0) || !(target_acceptance < 1.0)) {
        throw ParameterError("SamplerConfig: target_acceptance must lie in (0,1)");
    }
    if (!(priors.alpha_prior.shape > 0.0) || !(priors.alpha_prior.rate > 0.0) ||
        !(priors.t_prior.shape > 0.0) || !(priors.t_prior.rate > 0.0) ||
        !(priors.sigma2_prior.shape > 0.0) || !(priors.sigma2_prior.scale > 0.0)) {
        throw ParameterError("SamplerConfig: prior parameters must be positive");
    }
    if (!(init_step_locations > 0.0) || !(init_step_mass > 0.0)) {
        throw ParameterError("SamplerConfig: initial step sizes must be positive");
    }
}

std::vector<double> ChainTrace::loglik_series() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const TraceRecord& r : records) out.push_back(r.loglik);
    return out;
}

std::vector<double> ChainTrace::series(const std::string& column) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const TraceRecord& r : records) {
        if (column == "loglik") out.push_back(r.loglik);
        else if (column == "T") out.push_back(r.T);
        else if (column == "sigma2") out.push_back(r.sigma2);
        else if (column == "alpha") out.push_back(r.alpha);
        else if (column == "n_clusters") out.push_back(r.n_clusters);
        else throw ParameterError("ChainTrace::series: unknown column " + column);
    }
    return out;
}

void ChainState::check_invariants(int p) const {
    if (static_cast<int>(C.size()) != p || static_cast<int>(J.size()) != p) {
        throw Error("ChainState: C/J size mismatch");
    }
    int kappa = n_clusters();
    if (static_cast<int>(counts.size()) != kappa ||
        static_cast<int>(cluster_jump_sum.size()) != kappa || cache.slot_count() != kappa) {
        throw Error("ChainState: cluster bookkeeping size mismatch");
    }
    std::vector<int> hist(kappa, 0);
    std::vector<double> sums(kappa, 0.0);
    for (int i = 0; i < p; ++i) {
        if (C[i] < 0 || C[i] >= kappa) throw Error("ChainState: C index out of range");
        hist[C[i]]++;
        sums[C[i]] += J[i];
    }
    for (int k = 0; k < kappa; ++k) {
        if (hist[k] != counts[k]) throw Error("ChainState: counts mismatch");
        if (hist[k] < 1) throw Error("ChainState: empty cluster");
        if (std::abs(sums[k] - cluster_jump_sum[k]) > 1e-9 * (1.0 + std::abs(sums[k]))) {
            throw Error("ChainState: cluster jump sums stale");
        }
    }
    if (!mix_weights.empty()) {
        double total = 0.0;
        for (double w : mix_weights) total += w;
        if (std::abs(total - 1.0) > 1e-9) throw Error("ChainState: mixture weights not a simplex");
    }
}

double log_ratio_total_mass(double t_old, double t_new, double ll_old, double ll_new,
                            const GammaPrior& prior) {
    // Prior (shape-1) log-term plus the log-scale proposal Jacobian log(T'/T).
    return (ll_new - ll_old) + prior.shape * (std::log(t_new) - std::log(t_old)) -
           prior.rate * (t_new - t_old);
}

double log_ratio_location(double ll_old, double ll_new, double log_base_old,
                          double log_base_new, double log_jac_old, double log_jac_new) {
    return (ll_new - ll_old) + (log_base_new - log_base_old) + (log_jac_new - log_jac_old);
}

double adapted_step_size(double step, double rate, double target, long window_index) {
    double gain = 1.0 / std::sqrt(static_cast<double>(window_index));
    double next = step * std::exp(gain * (rate - target));
    return std::clamp(next, 1e-6, 1e3);
}

double sample_alpha_west(double alpha_old, int kappa, int p, const GammaPrior& prior,
                         Rng& rng) {
    double x = sample_beta(alpha_old + 1.0, static_cast<double>(p), rng);
    double rate = prior.rate - std::log(x);
    double shape_hi = prior.shape + kappa;
    double shape_lo = shape_hi - 1.0;
    if (shape_lo <= 0.0) return sample_gamma(shape_hi, rate, rng);
    double odds = shape_lo / (static_cast<double>(p) * rate);
    double pi = odds / (1.0 + odds);
    if (rng.uniform() < pi) return sample_gamma(shape_hi, rate, rng);
    return sample_gamma(shape_lo, rate, rng);
}

double log_alpha_conditional(double alpha, int kappa, int p, const GammaPrior& prior) {
    if (alpha <= 0.0) return -std::numeric_limits<double>::infinity();
    return log_gamma_density(alpha, prior.shape, prior.rate) + kappa * std::log(alpha) +
           std::lgamma(alpha) - std::lgamma(alpha + p);
}

MixtureWeightsUpdate update_scale_mixture(const std::vector<double>& scales,
                                          const std::vector<int>& indicators_in,
                                          const ScalarPrior& mixture_factor,
                                          std::span<const double> weights_in,
                                          std::span<const double> concentration, Rng& rng) {
    MixtureWeightsUpdate out;
    out.indicators.resize(scales.size());
    std::array<double, 2> counts{0.0, 0.0};
    for (std::size_t k = 0; k < scales.size(); ++k) {
        double l0 = std::log(weights_in[0]) + mixture_factor.log_component_density(scales[k], 0);
        double l1 = std::log(weights_in[1]) + mixture_factor.log_component_density(scales[k], 1);
        double p0 = 1.0 / (1.0 + std::exp(l1 - l0));
        int z = (rng.uniform() < p0) ? 0 : 1;
        out.indicators[k] = z;
        counts[z] += 1.0;
    }
    (void)indicators_in;
    std::array<double, 2> post{concentration[0] + counts[0], concentration[1] + counts[1]};
    out.weights = sample_dirichlet(post, rng);
    return out;
}

GibbsSampler::GibbsSampler(SamplerConfig config, const ObservationModel& model,
                           const KernelFamily& family, Rng rng)
    : config_(std::move(config)), model_(&model), family_(&family), rng_(rng) {
    config_.validate();
    scratch_row_.resize(model_->size());
}

double GibbsSampler::weight_coef() const {
    return std::sqrt(state_.T / static_cast<double>(config_.p));
}

double GibbsSampler::current_loglik() const {
    return model_->log_likelihood(state_.cache.fitted(), NoiseState{state_.sigma2});
}

void GibbsSampler::init_from_prior() {
    const int p = config_.p;
    for (int attempt = 0; attempt < 100; ++attempt) {
        ChainState st;
        st.step_locations = config_.init_step_locations;
        st.step_mass = config_.init_step_mass;
        st.alpha = sample_gamma(config_.priors.alpha_prior.shape,
                                config_.priors.alpha_prior.rate, rng_);
        if (family_->base().mixture_factor() >= 0) {
            st.mix_weights = sample_dirichlet(config_.priors.scale_dirichlet, rng_);
        }
        BaseMeasure urn_base = family_->base();
        urn_base.alpha = st.alpha;
        PolyaUrnDraw draw = sample_polya_urn(urn_base, p, rng_, st.mix_weights);
        st.C = std::move(draw.labels);
        st.Xstar = std::move(draw.state.unique_values);
        st.counts = std::move(draw.state.counts);
        st.J.resize(p);
        SGaParams unit{1.0, 1.0};
        for (int i = 0; i < p; ++i) st.J[i] = sample_sga(unit, rng_);
        st.T = sample_gamma(config_.priors.t_prior.shape, config_.priors.t_prior.rate, rng_);
        if (model_->supports_sigma2_gibbs()) {
            st.sigma2 = sample_inverse_gamma(config_.priors.sigma2_prior.shape,
                                             config_.priors.sigma2_prior.scale, rng_);
        } else {
            auto* radon = dynamic_cast<const RadonModel*>(model_);
            st.sigma2 = radon ? radon->data().sigma2 : 1.0;
        }
        st.cluster_jump_sum.assign(st.Xstar.size(), 0.0);
        for (int i = 0; i < p; ++i) st.cluster_jump_sum[st.C[i]] += st.J[i];

        st.cache = FittedValuesCache(model_->size());
        double wc = std::sqrt(st.T / p);
        bool ok = true;
        for (std::size_t k = 0; k < st.Xstar.size(); ++k) {
            std::vector<double> row(model_->size());
            try {
                family_->validate_atom(st.Xstar[k]);
                model_->atom_row(*family_, st.Xstar[k], row);
            } catch (const Error&) {
                ok = false;
                break;
            }
            st.cache.add_slot(std::move(row), wc * st.cluster_jump_sum[k]);
        }
        if (!ok) continue;
        double ll = model_->log_likelihood(st.cache.fitted(), NoiseState{st.sigma2});
        if (!std::isfinite(ll)) continue;
        state_ = std::move(st);
        iter_ = 0;
        return;
    }
    throw Error("GibbsSampler: failed to draw a finite-likelihood initial state in 100 attempts");
}

void GibbsSampler::remove_cluster(int k) {
    int last = state_.n_clusters() - 1;
    state_.cache.remove_slot(k);
    if (k != last) {
        state_.Xstar[k] = state_.Xstar[last];
        state_.counts[k] = state_.counts[last];
        state_.cluster_jump_sum[k] = state_.cluster_jump_sum[last];
        for (int& c : state_.C) {
            if (c == last) c = k;
        }
    }
    state_.Xstar.pop_back();
    state_.counts.pop_back();
    state_.cluster_jump_sum.pop_back();
}

void GibbsSampler::refresh_cluster_sums() {
    std::fill(state_.cluster_jump_sum.begin(), state_.cluster_jump_sum.end(), 0.0);
    for (std::size_t i = 0; i < state_.C.size(); ++i) {
        state_.cluster_jump_sum[state_.C[i]] += state_.J[i];
    }
    double wc = weight_coef();
    for (int k = 0; k < state_.n_clusters(); ++k) {
        state_.cache.set_weight(k, wc * state_.cluster_jump_sum[k]);
    }
}

void GibbsSampler::allocate_particle(int i) {
    const int n = model_->size();
    const double wc = weight_coef();
    const double ji = state_.J[i];
    const double w = wc * ji;
    const int kappa0 = config_.kappa0;

    // Detach particle i from its cluster.
    int k_old = state_.C[i];
    state_.counts[k_old]--;
    state_.cluster_jump_sum[k_old] -= ji;
    Atom freed_atom;
    bool have_freed = false;
    if (state_.counts[k_old] == 0) {
        freed_atom = state_.Xstar[k_old];
        have_freed = true;
        remove_cluster(k_old);
    } else {
        state_.cache.set_weight(k_old, wc * state_.cluster_jump_sum[k_old]);
    }
    state_.C[i] = -1;

    const int kappa = state_.n_clusters();
    std::span<const double> y = model_->observations();
    std::span<const double> fitted = state_.cache.fitted();

    // Residuals with particle i removed.
    static thread_local std::vector<double> resid;
    resid.resize(n);
    double ssr_base = 0.0;
    for (int j = 0; j < n; ++j) {
        resid[j] = y[j] - fitted[j];
        ssr_base += resid[j] * resid[j];
    }
    const double inv2s = 0.5 / state_.sigma2;

    // Candidate log-weights: occupied clusters then kappa0 auxiliaries.
    static thread_local std::vector<double> logw;
    logw.assign(kappa + kappa0, 0.0);
    for (int k = 0; k < kappa; ++k) {
        const std::vector<double>& row = state_.cache.row(k);
        auto [lo, hi] = state_.cache.row_span(k);
        double dot = 0.0;
        for (int j = lo; j < hi; ++j) dot += resid[j] * row[j];
        double ssr = ssr_base - 2.0 * w * dot + w * w * state_.cache.row_sumsq(k);
        logw[k] = std::log(static_cast<double>(state_.counts[k])) - ssr * inv2s;
    }
    static thread_local std::vector<Atom> aux_atoms;
    static thread_local std::vector<std::vector<double>> aux_rows;
    aux_atoms.resize(kappa0);
    aux_rows.resize(kappa0);
    double log_alpha_share = std::log(state_.alpha / kappa0);
    for (int a = 0; a < kappa0; ++a) {
        aux_atoms[a] = (a == 0 && have_freed) ? freed_atom
                                              : family_->sample_atom(rng_, state_.mix_weights);
        aux_rows[a].resize(n);
        auto [lo, hi] = model_->atom_row(*family_, aux_atoms[a], aux_rows[a]);
        double dot = 0.0, sq = 0.0;
        for (int j = lo; j < hi; ++j) {
            dot += resid[j] * aux_rows[a][j];
            sq += aux_rows[a][j] * aux_rows[a][j];
        }
        double ssr = ssr_base - 2.0 * w * dot + w * w * sq;
        logw[kappa + a] = log_alpha_share - ssr * inv2s;
    }

    // Categorical draw via normalized exponentials of shifted log-weights.
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logw) mx = std::max(mx, v);
    int chosen = -1;
    if (!std::isfinite(mx)) {
        // Every candidate underflowed: fall back to the prior-weight-only
        // categorical and flag the sweep.
        sweep_underflow_ = true;
        trace_.underflow_events++;
        double total = 0.0;
        for (int k = 0; k < kappa; ++k) total += state_.counts[k];
        total += state_.alpha;
        double u = rng_.uniform() * total;
        double cum = 0.0;
        for (int k = 0; k < kappa && chosen < 0; ++k) {
            cum += state_.counts[k];
            if (u < cum) chosen = k;
        }
        if (chosen < 0) {
            int a = static_cast<int>(rng_.below(static_cast<std::uint64_t>(kappa0)));
            chosen = kappa + a;
        }
    } else {
        double total = 0.0;
        for (double& v : logw) {
            v = std::exp(v - mx);
            total += v;
        }
        double u = rng_.uniform() * total;
        double cum = 0.0;
        chosen = static_cast<int>(logw.size()) - 1;
        for (std::size_t c = 0; c < logw.size(); ++c) {
            cum += logw[c];
            if (u < cum) {
                chosen = static_cast<int>(c);
                break;
            }
        }
    }

    if (chosen < kappa) {
        state_.C[i] = chosen;
        state_.counts[chosen]++;
        state_.cluster_jump_sum[chosen] += ji;
        state_.cache.set_weight(chosen, wc * state_.cluster_jump_sum[chosen]);
    } else {
        int a = chosen - kappa;
        state_.Xstar.push_back(aux_atoms[a]);
        state_.counts.push_back(1);
        state_.cluster_jump_sum.push_back(ji);
        state_.cache.add_slot(aux_rows[a], w);
        state_.C[i] = state_.n_clusters() - 1;
    }
}

void GibbsSampler::step_allocations() {
    for (int i = 0; i < config_.p; ++i) allocate_particle(i);
}

void GibbsSampler::step_locations() {
    const int n = model_->size();
    std::span<const double> y = model_->observations();
    const double inv2s = 0.5 / state_.sigma2;
    const double wc = weight_coef();
    const int arity = family_->arity();
    double u[4];
    for (int k = 0; k < state_.n_clusters(); ++k) {
        // One random-walk move per coordinate, scaled by the factor's prior
        // spread in the unconstrained domain.
        for (int d = 0; d < arity; ++d) {
            sweep_prop_loc_++;
            win_prop_loc_++;
            trace_.proposals_locations++;
            const Atom& atom = state_.Xstar[k];
            family_->to_unconstrained(atom, u);
            double factor_scale = family_->base().factors[d].unconstrained_scale();
            u[d] += state_.step_locations * factor_scale * rng_.normal();
            Atom prop = family_->from_unconstrained(u, atom.component);
            try {
                family_->validate_atom(prop);
            } catch (const Error&) {
                continue;  // zero prior mass under the guard: reject
            }
            scratch_row_.resize(n);
            auto [plo, phi] = model_->atom_row(*family_, prop, scratch_row_);
            const std::vector<double>& row = state_.cache.row(k);
            auto [clo, chi] = state_.cache.row_span(k);
            int lo = std::min(plo, clo), hi = std::max(phi, chi);
            std::span<const double> fitted = state_.cache.fitted();
            double wk = wc * state_.cluster_jump_sum[k];
            // SSR terms outside the union of supports cancel in the ratio.
            double ssr_cur = 0.0, ssr_new = 0.0;
            for (int j = lo; j < hi; ++j) {
                double r = y[j] - fitted[j];
                double rn = r - wk * (scratch_row_[j] - row[j]);
                ssr_cur += r * r;
                ssr_new += rn * rn;
            }
            double dll = -(ssr_new - ssr_cur) * inv2s;
            double log_ratio = log_ratio_location(
                0.0, dll, family_->log_base_density(atom, state_.mix_weights),
                family_->log_base_density(prop, state_.mix_weights),
                family_->log_jacobian(atom), family_->log_jacobian(prop));
            if (std::log(rng_.uniform() + 1e-300) < log_ratio) {
                state_.Xstar[k] = prop;
                state_.cache.set_row(k, scratch_row_);
                sweep_acc_loc_++;
                win_acc_loc_++;
                trace_.accepts_locations++;
            }
        }
    }
}

void GibbsSampler::step_jumps() {
    const int n = model_->size();
    std::span<const double> y = model_->observations();
    const double inv2s = 0.5 / state_.sigma2;
    const double wc = weight_coef();
    SGaParams unit{1.0, 1.0};
    for (int i = 0; i < config_.p; ++i) {
        sweep_prop_jump_++;
        trace_.proposals_jumps++;
        double jnew = sample_sga(unit, rng_);
        int k = state_.C[i];
        double dw = wc * (jnew - state_.J[i]);
        const std::vector<double>& row = state_.cache.row(k);
        auto [lo, hi] = state_.cache.row_span(k);
        std::span<const double> fitted = state_.cache.fitted();
        double dot = 0.0;
        for (int j = lo; j < hi; ++j) dot += (y[j] - fitted[j]) * row[j];
        // SSR' - SSR = -2 dw <resid, row> + dw^2 <row, row>
        double dssr = -2.0 * dw * dot + dw * dw * state_.cache.row_sumsq(k);
        if (std::log(rng_.uniform() + 1e-300) < -dssr * inv2s) {
            state_.cluster_jump_sum[k] += jnew - state_.J[i];
            state_.J[i] = jnew;
            state_.cache.set_weight(k, wc * state_.cluster_jump_sum[k]);
            sweep_acc_jump_++;
            trace_.accepts_jumps++;
        }
    }
}

void GibbsSampler::step_total_mass() {
    sweep_prop_mass_++;
    win_prop_mass_++;
    trace_.proposals_mass++;
    const int n = model_->size();
    std::span<const double> y = model_->observations();
    double t_new = state_.T * std::exp(state_.step_mass * rng_.normal());
    double gamma = std::sqrt(t_new / state_.T);
    std::span<const double> fitted = state_.cache.fitted();
    double ssr_cur = 0.0, ssr_new = 0.0;
    for (int j = 0; j < n; ++j) {
        double r = y[j] - fitted[j];
        double rn = y[j] - gamma * fitted[j];
        ssr_cur += r * r;
        ssr_new += rn * rn;
    }
    double dll = -(ssr_new - ssr_cur) * 0.5 / state_.sigma2;
    double log_ratio = log_ratio_total_mass(state_.T, t_new, 0.0, dll, config_.priors.t_prior);
    if (std::log(rng_.uniform() + 1e-300) < log_ratio) {
        state_.T = t_new;
        state_.cache.scale_weights(gamma);
        sweep_acc_mass_++;
        win_acc_mass_++;
        trace_.accepts_mass++;
    }
}

void GibbsSampler::step_rescale() {
    // T' = c^2 T, J' = J / c leaves sqrt(T/p) * J and hence the fit exactly
    // unchanged; the acceptance ratio is prior-only. The SGa(1,1) jump prior
    // has Laplace density exp(-|j|)/2. The proposal-and-map Jacobian
    // contributes c^{2-p}.
    const int p = config_.p;
    double step = 2.0 / std::sqrt(static_cast<double>(p));
    double c = std::exp(step * rng_.normal());
    double t_new = state_.T * c * c;
    double sum_abs_j = 0.0;
    for (double j : state_.J) sum_abs_j += std::abs(j);
    double log_ratio = log_gamma_density(t_new, config_.priors.t_prior.shape,
                                         config_.priors.t_prior.rate) -
                       log_gamma_density(state_.T, config_.priors.t_prior.shape,
                                         config_.priors.t_prior.rate) +
                       sum_abs_j * (1.0 - 1.0 / c) +
                       (2.0 - static_cast<double>(p)) * std::log(c);
    if (std::log(rng_.uniform() + 1e-300) < log_ratio) {
        state_.T = t_new;
        for (double& j : state_.J) j /= c;
        for (double& s : state_.cluster_jump_sum) s /= c;
        // sqrt(T'/p) * S' == sqrt(T/p) * S: cache weights are unchanged.
    }
}

void GibbsSampler::step_sigma2() {
    if (!model_->supports_sigma2_gibbs()) {
        throw UnsupportedOperationError("step_sigma2: model has no conjugate noise update");
    }
    const int n = model_->size();
    std::span<const double> y = model_->observations();
    std::span<const double> fitted = state_.cache.fitted();
    double ssr = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = y[j] - fitted[j];
        ssr += d * d;
    }
    state_.sigma2 = sample_inverse_gamma(config_.priors.sigma2_prior.shape + 0.5 * n,
                                         config_.priors.sigma2_prior.scale + 0.5 * ssr, rng_);
}

void GibbsSampler::step_alpha() {
    state_.alpha = sample_alpha_west(state_.alpha, state_.n_clusters(), config_.p,
                                     config_.priors.alpha_prior, rng_);
}

void GibbsSampler::step_scale_mixture_weights() {
    int mf = family_->base().mixture_factor();
    if (mf < 0) return;
    std::vector<double> scales(state_.Xstar.size());
    std::vector<int> indicators(state_.Xstar.size());
    for (std::size_t k = 0; k < state_.Xstar.size(); ++k) {
        scales[k] = state_.Xstar[k].v[mf];
        indicators[k] = state_.Xstar[k].component;
    }
    MixtureWeightsUpdate upd = update_scale_mixture(
        scales, indicators, family_->base().factors[mf], state_.mix_weights,
        config_.priors.scale_dirichlet, rng_);
    for (std::size_t k = 0; k < state_.Xstar.size(); ++k) {
        state_.Xstar[k].component = static_cast<std::int8_t>(upd.indicators[k]);
    }
    state_.mix_weights = std::move(upd.weights);
}

void GibbsSampler::adapt_step_sizes() {
    adapt_windows_done_++;
    if (win_prop_loc_ > 0) {
        double rate = static_cast<double>(win_acc_loc_) / win_prop_loc_;
        state_.step_locations = adapted_step_size(state_.step_locations, rate,
                                                  config_.target_acceptance,
                                                  adapt_windows_done_);
    }
    if (win_prop_mass_ > 0) {
        double rate = static_cast<double>(win_acc_mass_) / win_prop_mass_;
        state_.step_mass = adapted_step_size(state_.step_mass, rate,
                                             config_.target_acceptance, adapt_windows_done_);
    }
    win_acc_loc_ = win_prop_loc_ = 0;
    win_acc_mass_ = win_prop_mass_ = 0;
}

void GibbsSampler::sweep(bool adapt) {
    sweep_acc_loc_ = sweep_prop_loc_ = 0;
    sweep_acc_jump_ = sweep_prop_jump_ = 0;
    sweep_acc_mass_ = sweep_prop_mass_ = 0;
    sweep_underflow_ = false;

    step_allocations();
    for (int pass = 0; pass < config_.location_passes; ++pass) step_locations();
    for (int pass = 0; pass < config_.jump_passes; ++pass) step_jumps();
    step_total_mass();
    if (config_.rescale_move) step_rescale();
    if (config_.update_sigma2 && model_->supports_sigma2_gibbs()) step_sigma2();
    if (config_.update_alpha) step_alpha();
    if (config_.update_scale_weights) step_scale_mixture_weights();

    // Re-anchor incremental sums once per sweep to bound float drift.
    refresh_cluster_sums();
    iter_++;

    if (adapt) {
        sweeps_in_window_++;
        if (sweeps_in_window_ >= config_.adapt_window) {
            adapt_step_sizes();
            sweeps_in_window_ = 0;
        }
    }
}

void GibbsSampler::record() {
    TraceRecord rec;
    rec.iter = iter_;
    rec.loglik = current_loglik();
    rec.T = state_.T;
    rec.sigma2 = state_.sigma2;
    rec.alpha = state_.alpha;
    rec.n_clusters = state_.n_clusters();
    rec.acc_locations = sweep_prop_loc_ ? static_cast<double>(sweep_acc_loc_) / sweep_prop_loc_
                                        : 0.0;
    rec.acc_jumps = sweep_prop_jump_ ? static_cast<double>(sweep_acc_jump_) / sweep_prop_jump_
                                     : 0.0;
    rec.acc_mass = sweep_prop_mass_ ? static_cast<double>(sweep_acc_mass_) / sweep_prop_mass_
                                    : 0.0;
    rec.underflow = sweep_underflow_;
    trace_.records.push_back(rec);
    if (config_.record_curves) {
        trace_.curves.emplace_back(state_.cache.fitted().begin(), state_.cache.fitted().end());
    }
    if (config_.record_state_snapshots) {
        trace_.snapshots.push_back(StateSnapshot{state_.C, state_.Xstar, state_.J, state_.T});
    }
}

void GibbsSampler::run(long iterations, bool adapt) {
    for (long t = 0; t < iterations; ++t) {
        bool adapting = adapt && iter_ < config_.adapt_iterations;
        sweep(adapting);
        if (iter_ % config_.thinning == 0) record();
    }
}

ChainTrace run_chain(const SamplerConfig& config, const ObservationModel& model,
                     const KernelFamily& family, Rng rng) {
    GibbsSampler sampler(config, model, family, rng);
    sampler.init_from_prior();
    sampler.record();
    sampler.run(config.n_iterations, true);
    return std::move(sampler.trace());
}

}  // namespace sgmix
