#include "sgmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sgmix/errors.hpp"

namespace sgmix {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double spectral_density_zero(std::span<const double> window) {
    std::size_t n = window.size();
    std::size_t b = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    b = std::max<std::size_t>(b, 1);
    double xbar = mean_of(window);
    // Overlapping batch means m_j over length-b batches.
    double acc = 0.0;
    double batch_sum = 0.0;
    for (std::size_t j = 0; j < b; ++j) batch_sum += window[j];
    std::size_t nb = n - b + 1;
    for (std::size_t j = 0;; ++j) {
        double m = batch_sum / static_cast<double>(b);
        acc += (m - xbar) * (m - xbar);
        if (j + 1 >= nb) break;
        batch_sum += window[j + b] - window[j];
    }
    return static_cast<double>(b) * acc / static_cast<double>(nb);
}

GewekeResult geweke_z(std::span<const double> series, double frac_a, double frac_b) {
    if (series.size() < 100) {
        throw ParameterError("geweke_z: series must have at least 100 entries");
    }
    if (!(frac_a > 0.0) || !(frac_b > 0.0) || frac_a + frac_b > 1.0 + 1e-12) {
        throw ParameterError("geweke_z: window fractions invalid");
    }
    std::size_t n = series.size();
    auto na = static_cast<std::size_t>(std::floor(frac_a * static_cast<double>(n)));
    auto nb = static_cast<std::size_t>(std::floor(frac_b * static_cast<double>(n)));
    na = std::max<std::size_t>(na, 2);
    nb = std::max<std::size_t>(nb, 2);
    std::span<const double> wa = series.subspan(0, na);
    std::span<const double> wb = series.subspan(n - nb, nb);
    double sa = spectral_density_zero(wa);
    double sb = spectral_density_zero(wb);
    double denom2 = sa / static_cast<double>(na) + sb / static_cast<double>(nb);
    double ma = mean_of(wa);
    double mb = mean_of(wb);
    GewekeResult out;
    out.frac_a = frac_a;
    out.frac_b = frac_b;
    if (denom2 <= 0.0) {
        if (ma == mb) {
            out.z = 0.0;
            out.passed = true;
            return out;
        }
        throw DegenerateSeriesError("geweke_z: zero spectral variance in a window");
    }
    out.z = (ma - mb) / std::sqrt(denom2);
    out.passed = std::abs(out.z) < 1.96;
    return out;
}

BurnInDecision burn_in_protocol(std::span<const double> loglik) {
    if (loglik.size() < 1000) {
        throw ParameterError("burn_in_protocol: series must have at least 1000 entries");
    }
    BurnInDecision decision;
    const double fractions[] = {0.0, 0.1, 0.2, 0.3, 0.4};
    for (double f : fractions) {
        auto start = static_cast<std::size_t>(std::floor(f * static_cast<double>(loglik.size())));
        GewekeResult g = geweke_z(loglik.subspan(start));
        decision.stages.push_back(g);
        if (g.passed) {
            decision.discard_fraction = f;
            decision.converged = true;
            return decision;
        }
    }
    decision.converged = false;
    decision.discard_fraction = 0.4;
    return decision;
}

double ess(std::span<const double> series) {
    std::size_t n = series.size();
    if (n < 10) throw ParameterError("ess: series must have at least 10 entries");
    double xbar = mean_of(series);
    double c0 = 0.0;
    for (double x : series) c0 += (x - xbar) * (x - xbar);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) throw DegenerateSeriesError("ess: series has zero variance");

    auto rho = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) {
            acc += (series[t] - xbar) * (series[t + lag] - xbar);
        }
        return acc / (static_cast<double>(n) * c0);
    };

    // Geyer initial positive sequence on pair sums Gamma_m = rho_{2m}+rho_{2m+1}.
    double gamma_sum = 0.0;
    for (std::size_t m = 0;; ++m) {
        std::size_t l1 = 2 * m, l2 = 2 * m + 1;
        if (l1 >= n - 1) break;
        double g = rho(l1) + (l2 < n - 1 ? rho(l2) : 0.0);
        if (g <= 0.0) break;
        gamma_sum += g;
    }
    double tau = std::max(2.0 * gamma_sum - 1.0, 1e-12);
    double value = static_cast<double>(n) / tau;
    return std::clamp(value, 1e-12, static_cast<double>(n));
}

void ConvergenceConfig::validate() const {
    if (target_ess < 0.0) throw ParameterError("ConvergenceConfig: target_ess must be >= 0");
    if (initial_iterations < 0 || extension_block < 1 || max_iterations < 0) {
        throw ParameterError("ConvergenceConfig: iteration counts invalid");
    }
    if (max_restarts < 0) throw ParameterError("ConvergenceConfig: max_restarts must be >= 0");
}

ConvergedRun run_until_converged(const SamplerConfig& sampler_config,
                                 const ObservationModel& model, const KernelFamily& family,
                                 const ConvergenceConfig& convergence, Rng master) {
    sampler_config.validate();
    convergence.validate();
    if (convergence.max_iterations <
        sampler_config.adapt_iterations + convergence.initial_iterations) {
        throw ConvergenceFailure("run_until_converged: iteration cap below burn-in length", {});
    }

    std::vector<ChainTrace> partials;
    for (int attempt = 0; attempt <= convergence.max_restarts; ++attempt) {
        GibbsSampler sampler(sampler_config, model, family, master.split(attempt));
        sampler.init_from_prior();
        sampler.run(sampler_config.adapt_iterations, true);
        std::size_t measure_start = sampler.trace().records.size();
        sampler.run(convergence.initial_iterations, false);

        auto measured = [&]() {
            std::vector<double> ll;
            const auto& recs = sampler.trace().records;
            ll.reserve(recs.size() - measure_start);
            for (std::size_t i = measure_start; i < recs.size(); ++i) {
                ll.push_back(recs[i].loglik);
            }
            return ll;
        };

        std::vector<double> loglik = measured();
        BurnInDecision decision = burn_in_protocol(loglik);
        if (!decision.converged) {
            partials.push_back(std::move(sampler.trace()));
            continue;
        }

        std::size_t kept_from =
            measure_start + static_cast<std::size_t>(
                                std::floor(decision.discard_fraction *
                                           static_cast<double>(loglik.size())));
        ConvergedRun run;
        run.report.burn_in = decision;
        run.report.restarts_used = attempt;

        double current_ess = 0.0;
        while (true) {
            const auto& recs = sampler.trace().records;
            std::vector<double> kept;
            kept.reserve(recs.size() - kept_from);
            for (std::size_t i = kept_from; i < recs.size(); ++i) kept.push_back(recs[i].loglik);
            current_ess = kept.size() >= 10 ? ess(kept) : 0.0;
            if (convergence.target_ess <= 0.0 || current_ess >= convergence.target_ess) {
                run.report.ess_reached = true;
                break;
            }
            if (sampler.iteration() + convergence.extension_block > convergence.max_iterations) {
                run.report.ess_reached = false;
                break;
            }
            sampler.run(convergence.extension_block, false);
        }

        run.report.ess_value = current_ess;
        run.report.total_iterations = sampler.iteration();
        run.report.converged = true;
        run.kept_from = kept_from;
        run.trace = std::move(sampler.trace());
        return run;
    }
    throw ConvergenceFailure(
        "run_until_converged: burn-in failed after " +
            std::to_string(convergence.max_restarts + 1) + " initializations",
        std::move(partials));
}

}  // namespace sgmix
