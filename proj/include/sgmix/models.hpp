#pragma once

#include <span>
#include <string>
#include <vector>

#include "sgmix/kernels.hpp"

namespace sgmix {

struct NoiseState {
    double sigma2 = 1.0;
    void validate() const;
};

// Fixed-design Gaussian regression data on [-S, S]^d (d = 1 here).
struct RegressionDataset {
    std::vector<double> x;
    std::vector<double> y;
    double half_width = 1.0;  // S

    int size() const { return static_cast<int>(y.size()); }
    void validate() const;
};

// Radon-domain observations Y[i*m + j] ~ N(R_f(r_i, theta_j), sigma2).
struct RadonDataset {
    std::vector<double> r;      // n values in [-sqrt2, sqrt2]
    std::vector<double> theta;  // m values in [0, pi)
    std::vector<double> y;      // n*m, r-major
    double sigma2 = 0.1;

    int size() const { return static_cast<int>(y.size()); }
    void validate() const;
};

// Gaussian log-likelihood -(n/2) log(2 pi sigma2) - SSR / (2 sigma2).
double gaussian_log_likelihood(std::span<const double> y, std::span<const double> fitted,
                               const NoiseState& noise);

// Observation model consumed by the sampler: observations plus the response
// of a single kernel atom at every observation site.
class ObservationModel {
public:
    virtual ~ObservationModel() = default;

    virtual int size() const = 0;
    virtual std::span<const double> observations() const = 0;
    // out[j] = response of K(atom; .) at observation j; returns the
    // half-open index range outside of which the row is exactly zero.
    virtual std::pair<int, int> atom_row(const KernelFamily& family, const Atom& atom,
                                         std::span<double> out) const = 0;
    // Whether the conjugate Gibbs update of sigma2 applies.
    virtual bool supports_sigma2_gibbs() const = 0;

    double log_likelihood(std::span<const double> fitted, const NoiseState& noise) const {
        return gaussian_log_likelihood(observations(), fitted, noise);
    }
};

class GaussianRegressionModel final : public ObservationModel {
public:
    explicit GaussianRegressionModel(RegressionDataset data);

    int size() const override { return data_.size(); }
    std::span<const double> observations() const override { return data_.y; }
    std::pair<int, int> atom_row(const KernelFamily& family, const Atom& atom,
                                 std::span<double> out) const override;
    bool supports_sigma2_gibbs() const override { return true; }

    const RegressionDataset& data() const { return data_; }

private:
    RegressionDataset data_;
    bool sorted_design_ = false;
};

// Flat likelihood: zero observations; every configuration scores zero. Used
// for prior-invariance checks.
GaussianRegressionModel make_flat_model();

class RadonModel final : public ObservationModel {
public:
    explicit RadonModel(RadonDataset data);

    int size() const override { return data_.size(); }
    std::span<const double> observations() const override { return data_.y; }
    std::pair<int, int> atom_row(const KernelFamily& family, const Atom& atom,
                                 std::span<double> out) const override;
    bool supports_sigma2_gibbs() const override { return false; }

    const RadonDataset& data() const { return data_; }

private:
    RadonDataset data_;
};

// Fitted-values ledger: fitted = sum_s weight[s] * row[s]. Incremental
// updates are O(n); a full recomputation runs automatically every
// kRebuildInterval updates to bound float drift.
class FittedValuesCache {
public:
    static constexpr long long kRebuildInterval = 1000;

    FittedValuesCache() = default;
    explicit FittedValuesCache(int n) : fitted_(n, 0.0) {}

    int size() const { return static_cast<int>(fitted_.size()); }
    int slot_count() const { return static_cast<int>(rows_.size()); }

    int add_slot(std::vector<double> row, double weight);
    // Swap-with-last removal; returns the slot that got renumbered to `s`
    // (== slot_count() after removal when s was last).
    int remove_slot(int s);
    void set_weight(int s, double weight);
    void set_row(int s, std::vector<double> row);
    void update_slot(int s, std::vector<double> row, double weight);
    // Multiplies every weight (and fitted values) by `factor`.
    void scale_weights(double factor);

    std::span<const double> fitted() const { return fitted_; }
    const std::vector<double>& row(int s) const { return rows_[s]; }
    double weight(int s) const { return weights_[s]; }
    double row_sumsq(int s) const { return row_sumsq_[s]; }
    // Half-open index range outside of which the row is exactly zero.
    std::pair<int, int> row_span(int s) const { return spans_[s]; }

    long long updates_since_rebuild() const { return updates_; }
    void rebuild();

private:
    void bump();
    void check_slot(int s) const;

    std::vector<double> fitted_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> weights_;
    std::vector<double> row_sumsq_;
    std::vector<std::pair<int, int>> spans_;
    long long updates_ = 0;
};

// Spec-facing alias for the single-slot cache delta.
inline void apply_atom_delta(FittedValuesCache& cache, int slot, std::vector<double> new_row,
                             double new_weight) {
    cache.update_slot(slot, std::move(new_row), new_weight);
}

// CSV ingestion: d design columns then one response column, header required.
RegressionDataset read_regression_csv(const std::string& path);
// CSV triplets (r, theta, y), header required.
RadonDataset read_radon_csv(const std::string& path, double sigma2);

}  // namespace sgmix
