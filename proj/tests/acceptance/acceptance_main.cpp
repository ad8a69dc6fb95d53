// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "sgmix/bench.hpp"
#include "sgmix/cli.hpp"
#include "sgmix/csv.hpp"
#include "sgmix/ct.hpp"
#include "sgmix/diagnostics.hpp"
#include "sgmix/radon.hpp"
#include "support/test_stats.hpp"

using namespace sgmix;
namespace ts = testsupport;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, double seconds,
            const std::string& detail) {
    std::printf("[%s] C%-2d %-34s (%6.1fs)  %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void run_criterion(int index, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        auto [o, d] = body();
        ok = o;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(index, name, ok, secs, detail);
}

// ---- C1: SGa moment oracle ------------------------------------------------

std::pair<bool, std::string> c1_sga_moments() {
    const std::pair<double, double> params[] = {{0.5, 1.0}, {1.0, 1.0}, {2.0, 0.5}};
    const int n = 1000000;
    std::vector<double> draws(n);
    double worst = 0.0;
    for (auto [a, b] : params) {
        Rng rng(static_cast<std::uint64_t>(1000 * a + b));
        SGaParams p{a, b};
        for (double& d : draws) d = sample_sga(p, rng);
        for (int order = 1; order <= 6; ++order) {
            double expected = sga_moment(p, order);
            double got = ts::raw_moment(draws, order);
            double se = ts::moment_stderr(draws, order);
            double zscore = std::abs(got - expected) / se;
            worst = std::max(worst, zscore);
            if (zscore >= 4.0) {
                return {false, "a=" + std::to_string(a) + " order=" + std::to_string(order) +
                                   " z=" + std::to_string(zscore)};
            }
        }
    }
    return {true, "max |z| = " + std::to_string(worst)};
}

// ---- C2: Theorem 2 empirical variance ------------------------------------

std::pair<bool, std::string> c2_variance_convergence() {
    const double alpha = 1.0, eta = 1.0, fA = 0.3;
    const double target = 2.0 * alpha * fA / eta;
    BaseMeasure base;
    base.alpha = alpha;
    base.factors = {ScalarPrior::uniform(0.0, 1.0)};
    std::string detail;
    for (int p : {1, 10, 100, 1000}) {
        Rng rng(4000 + p);
        const int reps = 100000;
        std::vector<double> q(reps);
        for (int r = 0; r < reps; ++r) {
            ParticleMeasure pm = build_particle_measure(alpha, eta, base, p, rng);
            double coef = std::sqrt(pm.total_mass / p);
            double acc = 0.0;
            for (int i = 0; i < p; ++i) {
                if (pm.atoms[i].v[0] <= fA) acc += pm.jumps[i];
            }
            q[r] = coef * acc;
        }
        double m = ts::mean(q);
        std::vector<double> c2(reps);
        for (int r = 0; r < reps; ++r) c2[r] = (q[r] - m) * (q[r] - m);
        double var = ts::mean(c2);
        double se = ts::mc_stderr(c2);
        detail += "p" + std::to_string(p) + "=" + std::to_string(var) + " ";
        if (p == 1000 && std::abs(var - target) >= 3.0 * se) {
            return {false, detail + "(target 0.6, 3se=" + std::to_string(3.0 * se) + ")"};
        }
    }
    return {true, detail + "-> 0.6"};
}

// ---- C3: prior-invariance battery -----------------------------------------

std::pair<bool, std::string> c3_prior_invariance() {
    GaussianRegressionModel model = make_flat_model();
    FamilyPriors fp;
    auto family = make_family(KernelFamily::Id::gauss_ls, fp);
    SamplerConfig cfg;
    cfg.p = 50;
    cfg.n_iterations = 100000;
    cfg.adapt_iterations = 2000;
    cfg.seed = 314159;
    ChainTrace trace = run_chain(cfg, model, *family, Rng(cfg.seed));

    // Discard the adaptation prefix; thin by the estimated autocorrelation.
    auto thinned = [&](const std::string& col) {
        std::vector<double> full = trace.series(col);
        std::vector<double> post(full.begin() + 5000, full.end());
        double e = ess(post);
        std::size_t stride = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(post.size() / std::max(e, 10.0))));
        return ts::thin(post, stride);
    };

    std::vector<double> t_series = thinned("T");
    if (!ts::ks_pass_1pct(t_series, [](double x) { return ts::gamma_cdf(x, 5.0, 10.0); })) {
        return {false, "T marginal failed KS vs Ga(5,10)"};
    }
    if (std::abs(ts::mean(t_series) - 0.5) > 4.0 * ts::mc_stderr(t_series)) {
        return {false, "T mean deviates from 0.5"};
    }

    std::vector<double> a_series = thinned("alpha");
    if (!ts::ks_pass_1pct(a_series, [](double x) { return ts::gamma_cdf(x, 2.0, 0.5); })) {
        return {false, "alpha marginal failed KS vs Ga(2,0.5)"};
    }
    if (std::abs(ts::mean(a_series) - 4.0) > 4.0 * ts::mc_stderr(a_series)) {
        return {false, "alpha mean deviates from 4"};
    }

    std::vector<double> s_series = thinned("sigma2");
    double s2_shape = cfg.priors.sigma2_prior.shape;
    double s2_scale = cfg.priors.sigma2_prior.scale;
    if (!ts::ks_pass_1pct(s_series, [&](double x) {
            return ts::inverse_gamma_cdf(x, s2_shape, s2_scale);
        })) {
        return {false, "sigma2 marginal failed KS vs its InverseGamma prior"};
    }

    // J marginals via a fresh short run with snapshots.
    SamplerConfig cfg2 = cfg;
    cfg2.n_iterations = 20000;
    cfg2.record_state_snapshots = true;
    cfg2.thinning = 10;
    ChainTrace trace2 = run_chain(cfg2, model, *family, Rng(777));
    std::vector<double> pooled;
    for (std::size_t s = 200; s < trace2.snapshots.size(); ++s) {
        for (double j : trace2.snapshots[s].J) pooled.push_back(j);
    }
    SGaParams unit{1.0, 1.0};
    double z2 = std::abs(ts::raw_moment(pooled, 2) - sga_moment(unit, 2)) /
                ts::moment_stderr(pooled, 2);
    double z4 = std::abs(ts::raw_moment(pooled, 4) - sga_moment(unit, 4)) /
                ts::moment_stderr(pooled, 4);
    if (z2 > 4.0 || z4 > 4.0) {
        return {false, "J moment z-scores " + std::to_string(z2) + ", " + std::to_string(z4)};
    }
    return {true, "T, J, alpha, sigma2 all at the 1% level"};
}

// ---- C4: Radon closed form ------------------------------------------------

std::pair<bool, std::string> c4_radon_closed_form() {
    Rng rng(5150);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ShearletMatrix m{std::exp(rng.uniform(-1.2, 1.2)), rng.uniform(-1.5, 1.5)};
        Vec2 mu{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        double r = rng.uniform(-1.4, 1.4);
        double theta = rng.uniform(0.0, 3.14159265358979323846);
        double exact = radon_gaussian(m, mu, r, theta);
        Mat2 B = m.matrix().inverse();
        double ct = std::cos(theta), st = std::sin(theta);
        // Quadrature window centered on the integrand peak (complete the
        // square; does not use the closed-form value).
        Vec2 w = B.apply({r * ct - mu.x, r * st - mu.y});
        Vec2 v = B.apply({-st, ct});
        double v2 = v.x * v.x + v.y * v.y;
        double tstar = -(w.x * v.x + w.y * v.y) / v2;
        double halfwidth = 42.0 / std::sqrt(v2);
        auto integrand = [&](double t) {
            Vec2 x{r * ct - t * st, r * st + t * ct};
            Vec2 z = B.apply({x.x - mu.x, x.y - mu.y});
            return std::exp(-0.5 * (z.x * z.x + z.y * z.y));
        };
        double quad = ts::composite_simpson(integrand, tstar - halfwidth,
                                            tstar + halfwidth, 12000);
        if (quad > 1e-13) {
            worst = std::max(worst, std::abs(exact - quad) / quad);
        }
    }
    return {worst < 1e-8, "max relative error " + std::to_string(worst)};
}

// ---- C5: diagnostics null/power -------------------------------------------

std::pair<bool, std::string> c5_diagnostics() {
    int pass = 0, power = 0;
    const int seeds = 200, n = 10000;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(9000 + s);
        std::vector<double> iid(n), trend(n);
        for (int i = 0; i < n; ++i) {
            iid[i] = rng.normal();
            trend[i] = 3.0 * static_cast<double>(i) / n + rng.normal();
        }
        if (geweke_z(iid).passed) ++pass;
        if (!geweke_z(trend).passed) ++power;
    }
    if (pass < 180) return {false, "null pass rate " + std::to_string(pass) + "/200"};
    if (power < 190) return {false, "trend fail rate " + std::to_string(power) + "/200"};

    Rng rng(424242);
    const int m = 100000;
    std::vector<double> ar(m);
    double prev = 0.0;
    for (int i = 0; i < m; ++i) {
        prev = 0.9 * prev + rng.normal();
        ar[i] = prev;
    }
    double ratio = ess(ar) / m;
    double analytic = (1.0 - 0.9) / (1.0 + 0.9);
    bool ok = ratio > 0.8 * analytic && ratio < 1.2 * analytic;
    return {ok, "null " + std::to_string(pass) + "/200, power " + std::to_string(power) +
                    "/200, ESS ratio " + std::to_string(ratio)};
}

// ---- C6 + C7: desk-scale Table 1 + credible bands --------------------------

struct BenchOutcome {
    BenchmarkReport report;
};

BenchmarkReport bench_run(const std::string& function, int n, int reps,
                          std::uint64_t seed, double target_ess) {
    BenchmarkSpec spec;
    spec.function = function;
    spec.n = n;
    spec.rsnr = 3.0;
    spec.replications = reps;
    spec.kernel = KernelFamily::Id::gauss_ls;
    spec.sampler.p = 150;
    spec.sampler.adapt_iterations = 2000;
    spec.sampler.thinning = n >= 512 ? 5 : 2;
    spec.sampler.location_passes = 2;
    spec.sampler.jump_passes = 2;
    spec.convergence.target_ess = target_ess;
    spec.convergence.initial_iterations = 10000;
    spec.convergence.extension_block = 10000;
    spec.convergence.max_iterations = 200000;
    spec.convergence.max_restarts = 3;
    spec.master_seed = seed;
    spec.threads = std::max(2u, std::thread::hardware_concurrency());
    return run_benchmark(spec);
}

BenchmarkReport g_blip128;

std::pair<bool, std::string> c6_table1() {
    g_blip128 = bench_run("blip", 128, 10, 101, 1000.0);
    BenchmarkReport spikes128 = bench_run("spikes", 128, 10, 202, 1000.0);
    auto ess_ok = [](const BenchmarkReport& r) {
        int k = 0;
        for (const auto& rep : r.replications) k += rep.converged && rep.ess_reached;
        return k;
    };
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "blip %.4f (paper 0.0301, ess-ok %d/10), spikes %.4f (paper 0.0178, "
                  "ess-ok %d/10)",
                  g_blip128.mean_rmse, ess_ok(g_blip128), spikes128.mean_rmse,
                  ess_ok(spikes128));
    std::string detail(buf);
    if (!(g_blip128.mean_rmse <= 2.0 * 0.0301 && g_blip128.mean_rmse >= 0.5 * 0.0301)) {
        return {false, detail + " -- blip outside 2x"};
    }
    if (!(spikes128.mean_rmse <= 2.0 * 0.0178 && spikes128.mean_rmse >= 0.5 * 0.0178)) {
        return {false, detail + " -- spikes outside 2x"};
    }

    // Direction checks: RMSE decreases from n=128 to n=1024 (desk scale:
    // 3 replications, ESS target 500 before the iteration cap).
    BenchmarkReport blip1024 = bench_run("blip", 1024, 3, 303, 500.0);
    BenchmarkReport spikes1024 = bench_run("spikes", 1024, 3, 404, 500.0);
    std::snprintf(buf, sizeof(buf), "; n=1024: blip %.4f, spikes %.4f", blip1024.mean_rmse,
                  spikes1024.mean_rmse);
    detail += buf;
    if (!(blip1024.mean_rmse < g_blip128.mean_rmse)) {
        return {false, detail + " -- blip direction"};
    }
    if (!(spikes1024.mean_rmse < spikes128.mean_rmse)) {
        return {false, detail + " -- spikes direction"};
    }
    return {true, detail};
}

std::pair<bool, std::string> c7_credible_bands() {
    if (g_blip128.replications.empty()) return {false, "blip benchmark did not run"};
    int good = 0, usable = 0;
    for (const ReplicationResult& r : g_blip128.replications) {
        if (!r.converged) continue;
        ++usable;
        if (r.band_coverage >= 0.9) ++good;
    }
    std::string detail = std::to_string(good) + "/" + std::to_string(usable) +
                         " replications with >= 90% pointwise coverage";
    return {good >= 8, detail};
}

// ---- C8: CT smoke -----------------------------------------------------------

std::pair<bool, std::string> c8_ct_smoke() {
    CtConfig config;
    config.resolution = 32;
    config.n_r = 32;
    config.m_theta = 16;
    config.sigma2 = 0.1;
    config.sampler.p = 64;
    config.sampler.n_iterations = 4000;
    config.sampler.adapt_iterations = 1500;
    config.sampler.thinning = 10;
    config.discard_fraction = 0.5;
    config.seed = 11;
    CtResult result = run_ct(config);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "reconstruction RMSE %.4f vs zero baseline %.4f",
                  result.rmse_reconstruction, result.rmse_zero_baseline);
    return {result.rmse_reconstruction < result.rmse_zero_baseline, buf};
}

// ---- C9: determinism ---------------------------------------------------------

std::pair<bool, std::string> c9_determinism() {
    fs::path root = fs::temp_directory_path() / "sgmix_acceptance" / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);

    // fit
    std::string data_path = (root / "data.csv").string();
    std::string body = "x,y\n";
    for (int i = 0; i < 32; ++i) {
        double x = (i + 0.5) / 32.0;
        body += format_double(x) + "," +
                format_double(eval_test_function("blip", x) + 0.01 * std::sin(31.0 * i)) + "\n";
    }
    write_text_file(data_path, body);
    write_text_file((root / "fit.json").string(),
                    R"({"p": 12, "adapt_iterations": 300, "initial_iterations": 1500,
                        "max_iterations": 9000, "target_ess": 100, "seed": 21})");
    for (const char* sub : {"fit_a", "fit_b"}) {
        if (run_cli({"fit", data_path, "--config", (root / "fit.json").string(), "--out",
                     (root / sub).string()}) != 0) {
            return {false, "fit command failed"};
        }
    }
    for (const char* name :
         {"posterior_mean.csv", "credible_bands.csv", "trace.csv", "manifest.json"}) {
        if (read_text_file((root / "fit_a" / name).string()) !=
            read_text_file((root / "fit_b" / name).string())) {
            return {false, std::string("fit artifact differs: ") + name};
        }
    }

    // benchmark
    write_text_file((root / "bench.json").string(),
                    R"({"function": "blip", "n": 16, "replications": 2, "p": 8,
                        "adapt_iterations": 200, "initial_iterations": 1200,
                        "max_iterations": 4000, "target_ess": 0, "seed": 22})");
    for (const char* sub : {"bench_a", "bench_b"}) {
        if (run_cli({"benchmark", "--config", (root / "bench.json").string(), "--out",
                     (root / sub).string(), "--threads", "2"}) != 0) {
            return {false, "benchmark command failed"};
        }
    }
    for (const char* name : {"report.csv", "summary.json", "manifest.json"}) {
        if (read_text_file((root / "bench_a" / name).string()) !=
            read_text_file((root / "bench_b" / name).string())) {
            return {false, std::string("benchmark artifact differs: ") + name};
        }
    }

    // ct
    write_text_file((root / "ct.json").string(),
                    R"({"resolution": 16, "n": 12, "m": 8, "iterations": 250, "p": 10,
                        "adapt_iterations": 100, "seed": 23})");
    for (const char* sub : {"ct_a", "ct_b"}) {
        if (run_cli({"ct", "--config", (root / "ct.json").string(), "--out",
                     (root / sub).string()}) != 0) {
            return {false, "ct command failed"};
        }
    }
    for (const char* name : {"phantom.pgm", "reconstruction.pgm", "reconstruction.csv",
                             "manifest.json"}) {
        if (read_text_file((root / "ct_a" / name).string()) !=
            read_text_file((root / "ct_b" / name).string())) {
            return {false, std::string("ct artifact differs: ") + name};
        }
    }

    // diagnose
    for (const char* sub : {"diag_a", "diag_b"}) {
        if (run_cli({"diagnose", (root / "fit_a" / "trace.csv").string(), "--out",
                     (root / sub).string()}) != 0) {
            return {false, "diagnose command failed"};
        }
    }
    if (read_text_file((root / "diag_a" / "diagnostics.json").string()) !=
        read_text_file((root / "diag_b" / "diagnostics.json").string())) {
        return {false, "diagnose artifact differs"};
    }
    return {true, "fit, benchmark, ct, diagnose byte-identical across reruns"};
}

// ---- C10: kernel Lipschitz suites -------------------------------------------

std::pair<bool, std::string> c10_lipschitz() {
    const double C = 10.0;
    const MotherFunction& g = MotherFunction::gaussian();
    Rng rng(606060);
    int done = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        double angle = rng.uniform(0.0, 3.14159);
        double l1 = rng.uniform(0.3, 3.0);
        double l2 = rng.uniform(0.3, 3.0);
        double c = std::cos(angle), s = std::sin(angle);
        Mat2 a1{c * c * l1 + s * s * l2, c * s * (l1 - l2), c * s * (l1 - l2),
                s * s * l1 + c * c * l2};
        double e11 = rng.uniform(-0.05, 0.05), e22 = rng.uniform(-0.05, 0.05);
        double e12 = rng.uniform(-0.05, 0.05);
        Mat2 eye_minus_e{1.0 - e11, -e12, -e12, 1.0 - e22};
        Mat2 a2{a1.a * eye_minus_e.a + a1.b * eye_minus_e.c,
                a1.a * eye_minus_e.b + a1.b * eye_minus_e.d,
                a1.c * eye_minus_e.a + a1.d * eye_minus_e.c,
                a1.c * eye_minus_e.b + a1.d * eye_minus_e.d};
        Mat2 diff{e11, e12, e12, e22};
        double enorm = diff.spectral_norm();
        if (enorm > 0.1) continue;
        ++done;
        Vec2 mu1{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec2 mu2{mu1.x + rng.uniform(-0.2, 0.2), mu1.y + rng.uniform(-0.2, 0.2)};
        Vec2 x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        double k1 = eval_location_scale(g, a1, mu1, x);
        double k2 = eval_location_scale(g, a2, mu2, x);
        double dmu = std::hypot(mu1.x - mu2.x, mu1.y - mu2.y);
        double bound = C * (enorm + a1.inverse().spectral_norm() * dmu);
        if (std::abs(k1 - k2) > bound) {
            return {false, "location-scale bound violated at trial " + std::to_string(trial)};
        }
    }

    for (int trial = 0; trial < 10000; ++trial) {
        double xi1 = rng.uniform(-5, 5);
        double xi2 = xi1 + rng.uniform(-0.5, 0.5);
        double mu1 = rng.uniform(-1, 1);
        double mu2 = mu1 + rng.uniform(-0.3, 0.3);
        double phi1 = rng.uniform(0.0, 1.5707963267948966);
        double phi2 = std::clamp(phi1 + rng.uniform(-0.3, 0.3), 0.0, 1.5707963267948966);
        double x = rng.uniform(-3, 3);
        double k1 = eval_location_modulation(g, xi1, mu1, phi1, x);
        double k2 = eval_location_modulation(g, xi2, mu2, phi2, x);
        double bound = C * (std::abs(xi1 - xi2) + std::abs(mu1 - mu2) + std::abs(phi1 - phi2));
        if (std::abs(k1 - k2) > bound) {
            return {false, "location-modulation bound violated at trial " +
                               std::to_string(trial)};
        }
    }
    return {true, std::to_string(done) + " + 10000 randomized trials within C=10"};
}

}  // namespace

int main() {
    std::printf("acceptance suite: symmetric Gamma process mixture regression\n");
    run_criterion(1, "SGa moment oracle", c1_sga_moments);
    run_criterion(2, "particle-measure variance limit", c2_variance_convergence);
    run_criterion(3, "prior-invariance battery", c3_prior_invariance);
    run_criterion(4, "Radon closed form vs quadrature", c4_radon_closed_form);
    run_criterion(5, "Geweke null/power + ESS", c5_diagnostics);
    run_criterion(6, "desk-scale benchmark targets", c6_table1);
    run_criterion(7, "credible-band coverage", c7_credible_bands);
    run_criterion(8, "CT reconstruction smoke", c8_ct_smoke);
    run_criterion(9, "command determinism", c9_determinism);
    run_criterion(10, "kernel Lipschitz suites", c10_lipschitz);
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
