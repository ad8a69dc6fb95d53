#include "sgmix/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sgmix/csv.hpp"
#include "sgmix/errors.hpp"
#include "sgmix/radon.hpp"

namespace sgmix {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void NoiseState::validate() const {
    if (!(sigma2 > 0.0)) throw ParameterError("NoiseState: sigma2 must be positive");
}

void RegressionDataset::validate() const {
    if (y.empty() || x.size() != y.size()) {
        if (!y.empty() || !x.empty()) {
            throw ParameterError("RegressionDataset: design/response size mismatch");
        }
    }
    if (!(half_width > 0.0)) throw ParameterError("RegressionDataset: S must be positive");
    for (double v : x) {
        if (std::abs(v) > half_width) {
            throw ParameterError("RegressionDataset: design point outside [-S, S]");
        }
    }
}

void RadonDataset::validate() const {
    if (r.empty() || theta.empty()) throw ParameterError("RadonDataset: empty grid");
    if (y.size() != r.size() * theta.size()) {
        throw ParameterError("RadonDataset: y size does not match r x theta grid");
    }
    for (double v : r) {
        if (std::abs(v) > kSqrt2 + 1e-12) {
            throw ParameterError("RadonDataset: r outside [-sqrt2, sqrt2]");
        }
    }
    for (double v : theta) {
        if (v < 0.0 || v > kPi + 1e-12) throw ParameterError("RadonDataset: theta outside [0, pi]");
    }
    if (!(sigma2 > 0.0)) throw ParameterError("RadonDataset: sigma2 must be positive");
}

double gaussian_log_likelihood(std::span<const double> y, std::span<const double> fitted,
                               const NoiseState& noise) {
    noise.validate();
    if (y.size() != fitted.size()) {
        throw ParameterError("log_likelihood: fitted length does not match data");
    }
    double ssr = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double d = y[i] - fitted[i];
        ssr += d * d;
    }
    double n = static_cast<double>(y.size());
    return -0.5 * n * (kLog2Pi + std::log(noise.sigma2)) - 0.5 * ssr / noise.sigma2;
}

GaussianRegressionModel::GaussianRegressionModel(RegressionDataset data)
    : data_(std::move(data)) {
    data_.validate();
    sorted_design_ = std::is_sorted(data_.x.begin(), data_.x.end());
}

std::pair<int, int> GaussianRegressionModel::atom_row(const KernelFamily& family,
                                                      const Atom& atom,
                                                      std::span<double> out) const {
    if (family.space_dim() != 1) {
        throw ParameterError("GaussianRegressionModel: requires a 1-D kernel family");
    }
    double radius = family.support_radius(atom);
    if (sorted_design_ && std::isfinite(radius)) {
        // Evaluate only where the kernel is not identically zero.
        double c = family.center(atom);
        auto lo = std::lower_bound(data_.x.begin(), data_.x.end(), c - radius);
        auto hi = std::upper_bound(lo, data_.x.end(), c + radius);
        std::fill(out.begin(), out.end(), 0.0);
        for (auto it = lo; it != hi; ++it) {
            std::size_t j = static_cast<std::size_t>(it - data_.x.begin());
            out[j] = family.eval(atom, &data_.x[j]);
        }
        return {static_cast<int>(lo - data_.x.begin()), static_cast<int>(hi - data_.x.begin())};
    }
    for (std::size_t j = 0; j < data_.x.size(); ++j) {
        out[j] = family.eval(atom, &data_.x[j]);
    }
    return {0, static_cast<int>(data_.x.size())};
}

GaussianRegressionModel make_flat_model() {
    return GaussianRegressionModel(RegressionDataset{{}, {}, 1.0});
}

RadonModel::RadonModel(RadonDataset data) : data_(std::move(data)) { data_.validate(); }

std::pair<int, int> RadonModel::atom_row(const KernelFamily& family, const Atom& atom,
                                         std::span<double> out) const {
    if (family.id() != KernelFamily::Id::gauss_shearlet) {
        throw ParameterError("RadonModel: requires the gauss-shearlet family");
    }
    ShearletMatrix m{atom.v[0], atom.v[1]};
    Mat2 A = m.matrix();
    Vec2 mu{atom.v[2], atom.v[3]};
    std::size_t cols = data_.theta.size();
    for (std::size_t i = 0; i < data_.r.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            out[i * cols + j] = radon_gaussian(A, mu, data_.r[i], data_.theta[j]);
        }
    }
    return {0, static_cast<int>(out.size())};
}

namespace {

std::pair<int, int> nonzero_span(const std::vector<double>& row) {
    int lo = 0, hi = static_cast<int>(row.size());
    while (lo < hi && row[lo] == 0.0) ++lo;
    while (hi > lo && row[hi - 1] == 0.0) --hi;
    return {lo, hi};
}

}  // namespace

int FittedValuesCache::add_slot(std::vector<double> row, double weight) {
    if (static_cast<int>(row.size()) != size()) {
        throw ParameterError("FittedValuesCache: row length mismatch");
    }
    auto span = nonzero_span(row);
    double sq = 0.0;
    for (int j = span.first; j < span.second; ++j) {
        fitted_[j] += weight * row[j];
        sq += row[j] * row[j];
    }
    rows_.push_back(std::move(row));
    weights_.push_back(weight);
    row_sumsq_.push_back(sq);
    spans_.push_back(span);
    bump();
    return slot_count() - 1;
}

int FittedValuesCache::remove_slot(int s) {
    check_slot(s);
    const std::vector<double>& row = rows_[s];
    double w = weights_[s];
    for (int j = spans_[s].first; j < spans_[s].second; ++j) fitted_[j] -= w * row[j];
    int last = slot_count() - 1;
    if (s != last) {
        rows_[s] = std::move(rows_[last]);
        weights_[s] = weights_[last];
        row_sumsq_[s] = row_sumsq_[last];
        spans_[s] = spans_[last];
    }
    rows_.pop_back();
    weights_.pop_back();
    row_sumsq_.pop_back();
    spans_.pop_back();
    bump();
    return last;
}

void FittedValuesCache::set_weight(int s, double weight) {
    check_slot(s);
    double dw = weight - weights_[s];
    const std::vector<double>& row = rows_[s];
    for (int j = spans_[s].first; j < spans_[s].second; ++j) fitted_[j] += dw * row[j];
    weights_[s] = weight;
    bump();
}

void FittedValuesCache::set_row(int s, std::vector<double> row) {
    check_slot(s);
    if (static_cast<int>(row.size()) != size()) {
        throw ParameterError("FittedValuesCache: row length mismatch");
    }
    double w = weights_[s];
    auto span = nonzero_span(row);
    int lo = std::min(span.first, spans_[s].first);
    int hi = std::max(span.second, spans_[s].second);
    double sq = 0.0;
    for (int j = lo; j < hi; ++j) fitted_[j] += w * (row[j] - rows_[s][j]);
    for (int j = span.first; j < span.second; ++j) sq += row[j] * row[j];
    rows_[s] = std::move(row);
    row_sumsq_[s] = sq;
    spans_[s] = span;
    bump();
}

void FittedValuesCache::update_slot(int s, std::vector<double> row, double weight) {
    check_slot(s);
    if (static_cast<int>(row.size()) != size()) {
        throw ParameterError("FittedValuesCache: row length mismatch");
    }
    double w_old = weights_[s];
    auto span = nonzero_span(row);
    int lo = std::min(span.first, spans_[s].first);
    int hi = std::max(span.second, spans_[s].second);
    double sq = 0.0;
    for (int j = lo; j < hi; ++j) fitted_[j] += weight * row[j] - w_old * rows_[s][j];
    for (int j = span.first; j < span.second; ++j) sq += row[j] * row[j];
    rows_[s] = std::move(row);
    weights_[s] = weight;
    row_sumsq_[s] = sq;
    spans_[s] = span;
    bump();
}

void FittedValuesCache::scale_weights(double factor) {
    for (double& w : weights_) w *= factor;
    for (double& f : fitted_) f *= factor;
    bump();
}

void FittedValuesCache::rebuild() {
    std::fill(fitted_.begin(), fitted_.end(), 0.0);
    for (int s = 0; s < slot_count(); ++s) {
        const std::vector<double>& row = rows_[s];
        double w = weights_[s];
        for (int j = spans_[s].first; j < spans_[s].second; ++j) fitted_[j] += w * row[j];
    }
    updates_ = 0;
}

void FittedValuesCache::bump() {
    if (++updates_ >= kRebuildInterval) rebuild();
}

void FittedValuesCache::check_slot(int s) const {
    if (s < 0 || s >= slot_count()) {
        throw ParameterError("FittedValuesCache: slot index out of range");
    }
}

RegressionDataset read_regression_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    if (table.columns() < 2) {
        throw DataError(path + ": regression CSV needs at least 2 columns (design..., response)");
    }
    if (table.columns() > 2) {
        throw DataError(path + ": only 1-D designs are supported (expected 2 columns)");
    }
    RegressionDataset data;
    data.x.reserve(table.rows());
    data.y.reserve(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        data.x.push_back(table.cell(i, 0));
        data.y.push_back(table.cell(i, 1));
    }
    double lo = 0.0, hi = 0.0;
    for (double v : data.x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    data.half_width = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    data.validate();
    return data;
}

RadonDataset read_radon_csv(const std::string& path, double sigma2) {
    CsvTable table = read_csv(path);
    if (table.columns() != 3) {
        throw DataError(path + ": Radon CSV needs 3 columns (r, theta, y)");
    }
    // Collect the distinct grids in order of first appearance.
    std::vector<double> rs, thetas;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        double r = table.cell(i, 0);
        double t = table.cell(i, 1);
        bool found = false;
        for (double v : rs) {
            if (v == r) { found = true; break; }
        }
        if (!found) rs.push_back(r);
        found = false;
        for (double v : thetas) {
            if (v == t) { found = true; break; }
        }
        if (!found) thetas.push_back(t);
    }
    RadonDataset data;
    data.r = rs;
    data.theta = thetas;
    data.sigma2 = sigma2;
    data.y.assign(rs.size() * thetas.size(), 0.0);
    if (table.rows() != data.y.size()) {
        throw DataError(path + ": rows do not form a complete (r, theta) grid");
    }
    for (std::size_t i = 0; i < table.rows(); ++i) {
        double r = table.cell(i, 0);
        double t = table.cell(i, 1);
        std::size_t ri = 0, ti = 0;
        while (rs[ri] != r) ++ri;
        while (thetas[ti] != t) ++ti;
        data.y[ri * thetas.size() + ti] = table.cell(i, 2);
    }
    data.validate();
    return data;
}

}  // namespace sgmix
