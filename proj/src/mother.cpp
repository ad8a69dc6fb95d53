#include "sgmix/mother.hpp"

#include <algorithm>
#include <cmath>

#include "sgmix/errors.hpp"

namespace sgmix {

namespace {

// Symmlet-8 scaling filter (least-asymmetric Daubechies, 8 vanishing
// moments, length 16), normalized so the taps sum to sqrt(2).
constexpr int kFilterLen = 16;
constexpr double kSym8[kFilterLen] = {
    -0.0033824159510050028, -0.0005421323318000107, 0.03169508781152599,
    0.007607487324976609,   -0.14329423835127267,   -0.061273359067811076,
    0.4813596512590534,     0.777185751699628,      0.36444189483617895,
    -0.0519458381078818,    -0.027219029917103486,  0.04913717967373029,
    0.0038087520138944896,  -0.014952258337062199,  -0.0003029205147241331,
    0.001889950332767689};

constexpr int kCascadeLevels = 10;  // grid step 2^-10

// Cascade refinement: phi^{(j+1)}[m] = sqrt(2) sum_k h_k phi^{(j)}[m - k*2^j],
// starting from a unit impulse. After J levels the samples approximate the
// scaling function on [0, L-1] with step 2^-J.
std::vector<double> cascade_phi() {
    std::vector<double> a{1.0};
    const double r2 = std::sqrt(2.0);
    for (int j = 0; j < kCascadeLevels; ++j) {
        int shift = 1 << j;
        std::vector<double> next(a.size() + (kFilterLen - 1) * shift, 0.0);
        for (int k = 0; k < kFilterLen; ++k) {
            double c = r2 * kSym8[k];
            int base = k * shift;
            for (std::size_t i = 0; i < a.size(); ++i) next[base + i] += c * a[i];
        }
        a = std::move(next);
    }
    return a;
}

// psi[m] = sqrt(2) sum_k g_k phi[2m - k*2^J], g_k = (-1)^k h_{L-1-k}.
std::vector<double> cascade_psi(const std::vector<double>& phi) {
    const int stride = 1 << kCascadeLevels;
    const int n = (kFilterLen - 1) * stride + 1;
    const double r2 = std::sqrt(2.0);
    std::vector<double> psi(n, 0.0);
    for (int k = 0; k < kFilterLen; ++k) {
        double g = ((k % 2 == 0) ? 1.0 : -1.0) * kSym8[kFilterLen - 1 - k];
        int base = k * stride;
        for (int m = 0; m < n; ++m) {
            int idx = 2 * m - base;
            if (idx >= 0 && idx < static_cast<int>(phi.size())) {
                psi[m] += r2 * g * phi[idx];
            }
        }
    }
    return psi;
}

}  // namespace

MotherFunction::MotherFunction(Kind kind) : kind_(kind) {
    if (kind_ == Kind::gaussian) {
        sup_norm_ = 1.0;
        support_ = {-38.0, 38.0};  // exp(-x^2/2) underflows beyond this
        return;
    }
    std::vector<double> phi = cascade_phi();
    table_ = cascade_psi(phi);
    step_ = std::ldexp(1.0, -kCascadeLevels);
    // Table covers [0, L-1]; center the support at zero.
    double half = (kFilterLen - 1) / 2.0;
    support_ = {-half, half};
    sup_norm_ = 0.0;
    for (double v : table_) sup_norm_ = std::max(sup_norm_, std::abs(v));
}

const MotherFunction& MotherFunction::gaussian() {
    static const MotherFunction g(Kind::gaussian);
    return g;
}

const MotherFunction& MotherFunction::symmlet8() {
    static const MotherFunction s(Kind::symmlet8);
    return s;
}

double MotherFunction::operator()(double x) const {
    if (kind_ == Kind::gaussian) return std::exp(-0.5 * x * x);
    double pos = (x - support_.first) / step_;
    if (pos <= 0.0 || pos >= static_cast<double>(table_.size() - 1)) return 0.0;
    auto i = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
}

double MotherFunction::radial2(double x, double y) const {
    if (kind_ != Kind::gaussian) {
        throw UnsupportedOperationError("radial2: only the Gaussian mother is multivariate");
    }
    return std::exp(-0.5 * (x * x + y * y));
}

double eval_symmlet8(double x) { return MotherFunction::symmlet8()(x); }

}  // namespace sgmix
