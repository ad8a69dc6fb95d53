#pragma once

#include <utility>
#include <vector>

namespace sgmix {

// Mother function g for kernel construction. The Gaussian is evaluated in
// closed form; the Symmlet-8 wavelet (least-asymmetric Daubechies with 8
// vanishing moments) is evaluated from a cascade-refined lookup table with
// linear interpolation, zero outside its compact support.
class MotherFunction {
public:
    enum class Kind { gaussian, symmlet8 };

    static const MotherFunction& gaussian();
    static const MotherFunction& symmlet8();

    Kind kind() const { return kind_; }

    // 1-D evaluation g(x).
    double operator()(double x) const;

    // Isotropic d-dimensional Gaussian exp(-|z|^2/2); throws for symmlet8.
    double radial2(double x, double y) const;

    double sup_norm() const { return sup_norm_; }
    // Support bounds; the Gaussian reports a numerically effective range.
    std::pair<double, double> support() const { return support_; }

    // Table access for quadrature checks (symmlet8 only).
    const std::vector<double>& table() const { return table_; }
    double table_step() const { return step_; }

private:
    explicit MotherFunction(Kind kind);

    Kind kind_;
    std::vector<double> table_;  // symmlet8 samples, x = support.first + i*step
    double step_ = 0.0;
    double sup_norm_ = 1.0;
    std::pair<double, double> support_{0.0, 0.0};
};

// Pointwise Symmlet-8 mother wavelet evaluation; 0 outside support.
double eval_symmlet8(double x);

}  // namespace sgmix
