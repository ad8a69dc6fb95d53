#include "sgmix/radon.hpp"

#include <cmath>

#include "sgmix/errors.hpp"

namespace sgmix {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

double radon_gaussian(const Mat2& A, Vec2 mu, double r, double theta) {
    if (A.cond() > kSingularCondThreshold) {
        throw NumericError("radon_gaussian: dilation matrix numerically singular");
    }
    Mat2 B = A.inverse();
    double ct = std::cos(theta);
    double st = std::sin(theta);
    Vec2 u{-st, ct};
    Vec2 c{r * ct, r * st};
    Vec2 w = B.apply({c.x - mu.x, c.y - mu.y});
    Vec2 v = B.apply(u);
    double vnorm2 = v.x * v.x + v.y * v.y;
    if (!(vnorm2 > 0.0)) throw NumericError("radon_gaussian: degenerate direction");
    double wnorm2 = w.x * w.x + w.y * w.y;
    double proj = (w.x * v.x + w.y * v.y);
    double expo = wnorm2 - proj * proj / vnorm2;
    return std::sqrt(2.0 * kPi / vnorm2) * std::exp(-0.5 * expo);
}

double radon_gaussian(const ShearletMatrix& A, Vec2 mu, double r, double theta) {
    return radon_gaussian(A.matrix(), mu, r, theta);
}

std::pair<std::vector<double>, std::vector<double>> radon_grid(int n, int m) {
    if (n < 1 || m < 1) throw ParameterError("radon_grid: n and m must be >= 1");
    std::vector<double> r(n), theta(m);
    if (n == 1) {
        r[0] = -kSqrt2;
    } else {
        for (int i = 0; i < n; ++i) {
            r[i] = -kSqrt2 + 2.0 * kSqrt2 * static_cast<double>(i) / (n - 1);
        }
    }
    for (int j = 0; j < m; ++j) theta[j] = kPi * static_cast<double>(j) / m;
    return {std::move(r), std::move(theta)};
}

namespace {

// Original Shepp-Logan ellipse table: intensity, semi-axes, center, rotation
// (degrees). Cumulative values lie in [0, 2].
struct Ellipse {
    double value, a, b, x0, y0, phi_deg;
};

constexpr Ellipse kSheppLogan[10] = {
    {2.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.98, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.02, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.02, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.01, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.01, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.01, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.01, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.01, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.01, 0.023, 0.046, 0.06, -0.605, 0.0},
};

double phantom_value(double x, double y) {
    double total = 0.0;
    for (const Ellipse& e : kSheppLogan) {
        double phi = e.phi_deg * kPi / 180.0;
        double cp = std::cos(phi);
        double sp = std::sin(phi);
        double dx = x - e.x0;
        double dy = y - e.y0;
        double xr = dx * cp + dy * sp;
        double yr = -dx * sp + dy * cp;
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) total += e.value;
    }
    return total;
}

}  // namespace

std::vector<double> shepp_logan(int resolution) {
    if (resolution < 8) throw ParameterError("shepp_logan: resolution must be >= 8");
    std::vector<double> img(static_cast<std::size_t>(resolution) * resolution, 0.0);
    for (int row = 0; row < resolution; ++row) {
        double y = 1.0 - (row + 0.5) * 2.0 / resolution;
        for (int col = 0; col < resolution; ++col) {
            double x = -1.0 + (col + 0.5) * 2.0 / resolution;
            img[static_cast<std::size_t>(row) * resolution + col] = phantom_value(x, y);
        }
    }
    return img;
}

double image_value_at(const std::vector<double>& img, int resolution, double x, double y) {
    int col = static_cast<int>((x + 1.0) * resolution / 2.0);
    int row = static_cast<int>((1.0 - y) * resolution / 2.0);
    if (col < 0 || col >= resolution || row < 0 || row >= resolution) return 0.0;
    return img[static_cast<std::size_t>(row) * resolution + col];
}

}  // namespace sgmix
