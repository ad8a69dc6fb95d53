#pragma once

#include <utility>
#include <vector>

#include "sgmix/kernels.hpp"

namespace sgmix {

// Exact line integral of the anisotropic Gaussian g(A^{-1}(x - mu)) along
// the line x(t) = (r cos theta - t sin theta, r sin theta + t cos theta):
// with B = A^{-1}, u = (-sin theta, cos theta), w = B((r cos theta, r sin
// theta) - mu), the value is sqrt(2 pi)/|Bu| * exp(-(|w|^2 - (w.Bu/|Bu|)^2)/2).
double radon_gaussian(const Mat2& A, Vec2 mu, double r, double theta);
double radon_gaussian(const ShearletMatrix& A, Vec2 mu, double r, double theta);

// n equally spaced r in [-sqrt2, sqrt2] (endpoints included) and m angles
// theta_j = j*pi/m (half-open, matching the transform's symmetry).
std::pair<std::vector<double>, std::vector<double>> radon_grid(int n, int m);

// Standard 10-ellipse Shepp-Logan phantom rasterized on [-1,1]^2 at pixel
// centers, row-major with row 0 at y = +1; values in [0, 2].
std::vector<double> shepp_logan(int resolution);

// Phantom/image helpers shared by the CT pipeline.
double image_value_at(const std::vector<double>& img, int resolution, double x, double y);

}  // namespace sgmix
