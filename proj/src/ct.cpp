#include "sgmix/ct.hpp"

#include <cmath>

#include "sgmix/bench.hpp"
#include "sgmix/errors.hpp"
#include "sgmix/radon.hpp"

namespace sgmix {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Ellipse {
    double value, a, b, x0, y0, phi_deg;
};

// Same table as the rasterizer in radon.cpp.
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

}  // namespace

double shepp_logan_radon(double r, double theta) {
    // Chord length of each ellipse along the (r, theta) line.
    double total = 0.0;
    for (const Ellipse& e : kSheppLogan) {
        double phi = e.phi_deg * kPi / 180.0;
        double t = theta - phi;
        double ct = std::cos(t);
        double st = std::sin(t);
        double w2 = e.a * e.a * ct * ct + e.b * e.b * st * st;
        double s = r - e.x0 * std::cos(theta) - e.y0 * std::sin(theta);
        if (s * s < w2) {
            total += 2.0 * e.value * e.a * e.b * std::sqrt(w2 - s * s) / w2;
        }
    }
    return total;
}

void CtConfig::validate() const {
    if (resolution < 8) throw ParameterError("CtConfig: resolution must be >= 8");
    if (n_r < 1 || m_theta < 1) throw ParameterError("CtConfig: grid sizes must be >= 1");
    if (!(sigma2 > 0.0)) throw ParameterError("CtConfig: sigma2 must be positive");
    if (!(discard_fraction >= 0.0) || !(discard_fraction < 1.0)) {
        throw ParameterError("CtConfig: discard_fraction must lie in [0,1)");
    }
    sampler.validate();
}

CtResult run_ct(const CtConfig& config) {
    config.validate();
    CtResult result;
    result.resolution = config.resolution;
    result.phantom = shepp_logan(config.resolution);

    auto [r_grid, theta_grid] = radon_grid(config.n_r, config.m_theta);
    result.sinogram_clean.resize(static_cast<std::size_t>(config.n_r) * config.m_theta);
    for (int i = 0; i < config.n_r; ++i) {
        for (int j = 0; j < config.m_theta; ++j) {
            result.sinogram_clean[static_cast<std::size_t>(i) * config.m_theta + j] =
                shepp_logan_radon(r_grid[i], theta_grid[j]);
        }
    }

    Rng rng(config.seed);
    Rng noise_rng = rng.split(1);
    double sigma = std::sqrt(config.sigma2);
    result.sinogram_noisy = result.sinogram_clean;
    for (double& v : result.sinogram_noisy) v += sigma * noise_rng.normal();

    RadonDataset data;
    data.r = r_grid;
    data.theta = theta_grid;
    data.y = result.sinogram_noisy;
    data.sigma2 = config.sigma2;
    RadonModel model(std::move(data));

    SamplerConfig cfg = config.sampler;
    cfg.update_sigma2 = false;  // sigma2 fixed for the Radon model
    cfg.update_scale_weights = false;
    cfg.record_state_snapshots = true;
    cfg.record_curves = false;
    auto family = make_family(KernelFamily::Id::gauss_shearlet, cfg.priors.family);

    GibbsSampler sampler(cfg, model, *family, rng.split(2));
    sampler.init_from_prior();
    sampler.record();
    sampler.run(cfg.n_iterations, true);
    result.trace = std::move(sampler.trace());

    // Posterior-mean image over the kept tail of the chain.
    const auto& snaps = result.trace.snapshots;
    std::size_t keep_from = static_cast<std::size_t>(
        std::floor(config.discard_fraction * static_cast<double>(snaps.size())));
    if (keep_from >= snaps.size()) keep_from = snaps.size() - 1;

    int res = config.resolution;
    result.reconstruction.assign(static_cast<std::size_t>(res) * res, 0.0);
    std::size_t used = 0;
    const MotherFunction& g = MotherFunction::gaussian();
    for (std::size_t s = keep_from; s < snaps.size(); ++s) {
        const StateSnapshot& snap = snaps[s];
        int p = static_cast<int>(snap.J.size());
        std::vector<double> cluster_sum(snap.Xstar.size(), 0.0);
        for (int i = 0; i < p; ++i) cluster_sum[snap.C[i]] += snap.J[i];
        double wc = std::sqrt(snap.T / p);
        for (std::size_t k = 0; k < snap.Xstar.size(); ++k) {
            const Atom& atom = snap.Xstar[k];
            double w = wc * cluster_sum[k];
            if (w == 0.0) continue;
            ShearletMatrix m{atom.v[0], atom.v[1]};
            Mat2 inv = m.matrix().inverse();
            for (int row = 0; row < res; ++row) {
                double y = 1.0 - (row + 0.5) * 2.0 / res;
                for (int col = 0; col < res; ++col) {
                    double x = -1.0 + (col + 0.5) * 2.0 / res;
                    Vec2 z = inv.apply({x - atom.v[2], y - atom.v[3]});
                    result.reconstruction[static_cast<std::size_t>(row) * res + col] +=
                        w * g.radial2(z.x, z.y);
                }
            }
        }
        ++used;
    }
    if (used > 0) {
        for (double& v : result.reconstruction) v /= static_cast<double>(used);
    }

    result.rmse_reconstruction = rmse(result.reconstruction, result.phantom);
    std::vector<double> zero(result.phantom.size(), 0.0);
    result.rmse_zero_baseline = rmse(zero, result.phantom);
    return result;
}

}  // namespace sgmix
