#include <doctest.h>

#include <cmath>

#include "sgmix/errors.hpp"
#include "sgmix/kernels.hpp"
#include "support/test_stats.hpp"

using namespace sgmix;

namespace {

Mat2 rotation_scale(double angle, double l1, double l2) {
    double c = std::cos(angle), s = std::sin(angle);
    // R diag(l1,l2) R^T
    return {c * c * l1 + s * s * l2, c * s * (l1 - l2),
            c * s * (l1 - l2), s * s * l1 + c * c * l2};
}

Mat2 mul(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

}  // namespace

TEST_CASE("location-scale evaluation basics") {
    const MotherFunction& g = MotherFunction::gaussian();
    CHECK(eval_location_scale(g, 1.0, 0.0, 0.0) == 1.0);
    // A = 2 (d=1), x = 2: g(x/2) = exp(-1/2)
    CHECK(eval_location_scale(g, 2.0, 0.0, 2.0) == doctest::Approx(std::exp(-0.5)));
    for (double m : {-3.0, 0.25, 11.0}) {
        CHECK(eval_location_scale(g, 1.0, m, m) == 1.0);  // translation invariance
    }
    Mat2 eye;
    CHECK(eval_location_scale(g, eye, {0.0, 0.0}, {0.0, 0.0}) == 1.0);
}

TEST_CASE("singular dilation matrices are refused") {
    const MotherFunction& g = MotherFunction::gaussian();
    Mat2 nearly_singular{1.0, 0.0, 0.0, 1e-14};
    CHECK_THROWS_AS(eval_location_scale(g, nearly_singular, {0, 0}, {1, 1}), NumericError);
    CHECK_THROWS_AS(eval_location_scale(g, 0.0, 0.0, 1.0), NumericError);
    CHECK_THROWS_AS(eval_location_scale(g, 1e14, 0.0, 1.0), NumericError);
}

TEST_CASE("location-modulation evaluation basics") {
    const MotherFunction& g = MotherFunction::gaussian();
    // xi=0, phi=0 reduces to g(x - mu)
    CHECK(eval_location_modulation(g, 0.0, 0.3, 0.0, 1.1) == doctest::Approx(g(0.8)));
    // phi = pi/2 kills the kernel
    CHECK(eval_location_modulation(g, 0.0, 0.0, 1.5707963267948966, 0.7) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // d=1, xi=pi, mu=0, x=1: exp(-1/2) cos(pi)
    CHECK(eval_location_modulation(g, 3.14159265358979323846, 0.0, 0.0, 1.0) ==
          doctest::Approx(-std::exp(-0.5)));
}

TEST_CASE("shearlet matrix composes shear and anisotropic dilation") {
    ShearletMatrix m{4.0, 0.5};
    Mat2 a = m.matrix();
    CHECK(a.a == doctest::Approx(4.0));
    CHECK(a.b == doctest::Approx(0.5 * 2.0));
    CHECK(a.c == 0.0);
    CHECK(a.d == doctest::Approx(2.0));
    CHECK_THROWS_AS((ShearletMatrix{-1.0, 0.0}.matrix()), ParameterError);
}

TEST_CASE("mixture_eval matches a brute-force oracle") {
    FamilyPriors priors;
    auto family = make_family(KernelFamily::Id::gauss_ls, priors);

    ParticleMeasure q;
    q.total_mass = 0.8;
    q.jumps = {1.5, -0.7, 0.2};
    Atom a1, a2, a3;
    a1.arity = a2.arity = a3.arity = 2;
    a1.v = {12.0, 0.3, 0, 0};
    a2.v = {40.0, 0.5, 0, 0};
    a3.v = {5.0, 0.75, 0, 0};
    q.atoms = {a1, a2, a3};

    const double grid[5] = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> got = mixture_eval_grid(q, *family, grid);
    for (int j = 0; j < 5; ++j) {
        // Independent re-summation in extended precision.
        long double acc = 0.0L;
        for (int i = 0; i < 3; ++i) {
            long double z = static_cast<long double>(q.atoms[i].v[0]) * (grid[j] - q.atoms[i].v[1]);
            acc += static_cast<long double>(q.jumps[i]) * std::exp(-0.5L * z * z);
        }
        acc *= std::sqrt(static_cast<long double>(q.total_mass) / 3.0L);
        CHECK(got[j] == doctest::Approx(static_cast<double>(acc)).epsilon(1e-12));
        CHECK(mixture_eval(q, *family, &grid[j]) == doctest::Approx(got[j]));
    }

    // T = 0 gives the zero function.
    ParticleMeasure zero = q;
    zero.total_mass = 0.0;
    for (int j = 0; j < 5; ++j) CHECK(mixture_eval(zero, *family, &grid[j]) == 0.0);

    // p=1 with J=1, T=1 is exactly the kernel.
    ParticleMeasure single;
    single.total_mass = 1.0;
    single.jumps = {1.0};
    single.atoms = {a1};
    double x = 0.4;
    CHECK(mixture_eval(single, *family, &x) == doctest::Approx(family->eval(a1, &x)));
}

TEST_CASE("jump linearity is exact for power-of-two factors") {
    FamilyPriors priors;
    auto family = make_family(KernelFamily::Id::gauss_ls, priors);
    ParticleMeasure q;
    q.total_mass = 1.3;
    q.jumps = {0.4, -1.1, 2.2, 0.05};
    q.atoms.resize(4);
    Rng rng(31);
    for (auto& atom : q.atoms) atom = family->sample_atom(rng, std::vector<double>{0.5, 0.5});
    ParticleMeasure scaled = q;
    for (double& j : scaled.jumps) j *= 2.0;
    for (double x : {0.1, 0.42, 0.77}) {
        CHECK(mixture_eval(scaled, *family, &x) == 2.0 * mixture_eval(q, *family, &x));
    }
}

TEST_CASE("boundedness guard refuses invalid atoms") {
    FamilyPriors priors;
    auto family = make_family(KernelFamily::Id::gauss_ls, priors);
    Atom bad;
    bad.arity = 2;
    bad.v = {-1.0, 0.5, 0, 0};
    CHECK_THROWS_AS(family->validate_atom(bad), ParameterError);
    ParticleMeasure q;
    q.total_mass = 1.0;
    q.jumps = {1.0};
    q.atoms = {bad};
    double x = 0.5;
    CHECK_THROWS_AS(mixture_eval(q, *family, &x), ParameterError);

    Atom good;
    good.arity = 2;
    good.v = {10.0, 0.5, 0, 0};
    CHECK(family->sup_norm_bound(good) == 1.0);
    auto sym = make_family(KernelFamily::Id::symmlet8_ls, priors);
    CHECK(sym->sup_norm_bound(good) > 1.0);
    CHECK(std::isfinite(sym->sup_norm_bound(good)));
}

TEST_CASE("location-scale Lipschitz stability over random perturbations") {
    // |K_{A1}(x-mu1) - K_{A2}(x-mu2)| <= C (||I - A1^{-1}A2|| + ||A1^{-1}|| |mu1-mu2|)
    const double C = 10.0;
    const MotherFunction& g = MotherFunction::gaussian();
    Rng rng(2024);
    for (int trial = 0; trial < 10000; ++trial) {
        double angle = rng.uniform(0.0, 3.14159);
        double l1 = rng.uniform(0.3, 3.0);
        double l2 = rng.uniform(0.3, 3.0);
        Mat2 a1 = rotation_scale(angle, l1, l2);
        // A2 = A1 (I - E) with ||E|| <= 0.1
        double e11 = rng.uniform(-0.05, 0.05), e22 = rng.uniform(-0.05, 0.05);
        double e12 = rng.uniform(-0.05, 0.05);
        Mat2 eye_minus_e{1.0 - e11, -e12, -e12, 1.0 - e22};
        Mat2 a2 = mul(a1, eye_minus_e);
        Mat2 diff{e11, e12, e12, e22};  // I - A1^{-1} A2 = E
        double enorm = diff.spectral_norm();
        if (enorm > 0.1) continue;

        Vec2 mu1{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        Vec2 mu2{mu1.x + rng.uniform(-0.2, 0.2), mu1.y + rng.uniform(-0.2, 0.2)};
        Vec2 x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};

        double k1 = eval_location_scale(g, a1, mu1, x);
        double k2 = eval_location_scale(g, a2, mu2, x);
        double dmu = std::hypot(mu1.x - mu2.x, mu1.y - mu2.y);
        double bound = C * (enorm + a1.inverse().spectral_norm() * dmu);
        REQUIRE(std::abs(k1 - k2) <= bound);
    }
}

TEST_CASE("location-modulation Lipschitz stability over random perturbations") {
    const double C = 10.0;
    const MotherFunction& g = MotherFunction::gaussian();
    Rng rng(2025);
    for (int trial = 0; trial < 10000; ++trial) {
        double xi1 = rng.uniform(-5.0, 5.0);
        double xi2 = xi1 + rng.uniform(-0.5, 0.5);
        double mu1 = rng.uniform(-1.0, 1.0);
        double mu2 = mu1 + rng.uniform(-0.3, 0.3);
        double phi1 = rng.uniform(0.0, 1.5707963267948966);
        double phi2 = std::clamp(phi1 + rng.uniform(-0.3, 0.3), 0.0, 1.5707963267948966);
        double x = rng.uniform(-3.0, 3.0);
        double k1 = eval_location_modulation(g, xi1, mu1, phi1, x);
        double k2 = eval_location_modulation(g, xi2, mu2, phi2, x);
        double bound =
            C * (std::abs(xi1 - xi2) + std::abs(mu1 - mu2) + std::abs(phi1 - phi2));
        REQUIRE(std::abs(k1 - k2) <= bound);
    }
}
