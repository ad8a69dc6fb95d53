#include "sgmix/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgmix/bench.hpp"
#include "sgmix/csv.hpp"
#include "sgmix/ct.hpp"
#include "sgmix/diagnostics.hpp"
#include "sgmix/errors.hpp"

namespace sgmix {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw ParameterError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const std::string& k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ParameterError(where + ": unknown key '" + it.key() + "'");
    }
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config parse error: ") + e.what());
    }
    return j;
}

double jget(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

long jgetl(const json& j, const std::string& key, long fallback) {
    return j.contains(key) ? j.at(key).get<long>() : fallback;
}

int jgeti(const json& j, const std::string& key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}

const std::vector<std::string> kSamplerKeys = {
    "kernel", "p", "kappa0", "thinning", "adapt_iterations", "adapt_window",
    "target_acceptance", "priors", "seed", "initial_iterations", "extension_block",
    "max_iterations", "target_ess", "max_restarts"};

const std::vector<std::string> kPriorKeys = {
    "alpha", "T", "sigma2", "translation", "scale_mixture", "scale_dirichlet",
    "frequency_sd", "tau", "sigma_a", "sigma_s"};

void apply_priors(const json& j, SamplerPriors& priors) {
    check_keys(j, kPriorKeys, "priors");
    if (j.contains("alpha")) {
        priors.alpha_prior = {j.at("alpha").at(0).get<double>(),
                              j.at("alpha").at(1).get<double>()};
    }
    if (j.contains("T")) {
        priors.t_prior = {j.at("T").at(0).get<double>(), j.at("T").at(1).get<double>()};
    }
    if (j.contains("sigma2")) {
        priors.sigma2_prior = {j.at("sigma2").at(0).get<double>(),
                               j.at("sigma2").at(1).get<double>()};
    }
    if (j.contains("translation")) {
        priors.family.translation_mean = j.at("translation").at(0).get<double>();
        priors.family.translation_sd = j.at("translation").at(1).get<double>();
    }
    if (j.contains("scale_mixture")) {
        const json& m = j.at("scale_mixture");
        priors.family.scale_shape1 = m.at(0).at(0).get<double>();
        priors.family.scale_rate1 = m.at(0).at(1).get<double>();
        priors.family.scale_shape2 = m.at(1).at(0).get<double>();
        priors.family.scale_rate2 = m.at(1).at(1).get<double>();
    }
    if (j.contains("scale_dirichlet")) {
        priors.scale_dirichlet = {j.at("scale_dirichlet").at(0).get<double>(),
                                  j.at("scale_dirichlet").at(1).get<double>()};
    }
    if (j.contains("frequency_sd")) priors.family.frequency_sd = j.at("frequency_sd").get<double>();
    if (j.contains("tau")) priors.family.ct_tau = j.at("tau").get<double>();
    if (j.contains("sigma_a")) priors.family.ct_sigma_a = j.at("sigma_a").get<double>();
    if (j.contains("sigma_s")) priors.family.ct_sigma_s = j.at("sigma_s").get<double>();
}

struct RunSetup {
    SamplerConfig sampler;
    ConvergenceConfig convergence;
    KernelFamily::Id kernel = KernelFamily::Id::gauss_ls;
};

RunSetup parse_run_setup(const json& j) {
    RunSetup setup;
    if (j.contains("kernel")) setup.kernel = family_id_from_name(j.at("kernel").get<std::string>());
    setup.sampler.p = jgeti(j, "p", setup.sampler.p);
    setup.sampler.kappa0 = jgeti(j, "kappa0", setup.sampler.kappa0);
    setup.sampler.thinning = jgeti(j, "thinning", setup.sampler.thinning);
    setup.sampler.adapt_iterations = jgetl(j, "adapt_iterations", setup.sampler.adapt_iterations);
    setup.sampler.adapt_window = jgeti(j, "adapt_window", setup.sampler.adapt_window);
    setup.sampler.target_acceptance =
        jget(j, "target_acceptance", setup.sampler.target_acceptance);
    setup.sampler.seed = static_cast<std::uint64_t>(jgetl(j, "seed", 1));
    if (j.contains("priors")) apply_priors(j.at("priors"), setup.sampler.priors);
    setup.convergence.initial_iterations =
        jgetl(j, "initial_iterations", setup.convergence.initial_iterations);
    setup.convergence.extension_block =
        jgetl(j, "extension_block", setup.convergence.extension_block);
    setup.convergence.max_iterations = jgetl(j, "max_iterations", setup.convergence.max_iterations);
    setup.convergence.target_ess = jget(j, "target_ess", setup.convergence.target_ess);
    setup.convergence.max_restarts = jgeti(j, "max_restarts", setup.convergence.max_restarts);
    return setup;
}

json echo_setup(const RunSetup& setup) {
    json p;
    p["alpha"] = {setup.sampler.priors.alpha_prior.shape, setup.sampler.priors.alpha_prior.rate};
    p["T"] = {setup.sampler.priors.t_prior.shape, setup.sampler.priors.t_prior.rate};
    p["sigma2"] = {setup.sampler.priors.sigma2_prior.shape,
                   setup.sampler.priors.sigma2_prior.scale};
    p["translation"] = {setup.sampler.priors.family.translation_mean,
                        setup.sampler.priors.family.translation_sd};
    p["scale_mixture"] = {{setup.sampler.priors.family.scale_shape1,
                           setup.sampler.priors.family.scale_rate1},
                          {setup.sampler.priors.family.scale_shape2,
                           setup.sampler.priors.family.scale_rate2}};
    p["scale_dirichlet"] = {setup.sampler.priors.scale_dirichlet[0],
                            setup.sampler.priors.scale_dirichlet[1]};
    p["frequency_sd"] = setup.sampler.priors.family.frequency_sd;
    p["tau"] = setup.sampler.priors.family.ct_tau;
    p["sigma_a"] = setup.sampler.priors.family.ct_sigma_a;
    p["sigma_s"] = setup.sampler.priors.family.ct_sigma_s;

    json c;
    c["kernel"] = family_name(setup.kernel);
    c["p"] = setup.sampler.p;
    c["kappa0"] = setup.sampler.kappa0;
    c["thinning"] = setup.sampler.thinning;
    c["adapt_iterations"] = setup.sampler.adapt_iterations;
    c["adapt_window"] = setup.sampler.adapt_window;
    c["target_acceptance"] = setup.sampler.target_acceptance;
    c["seed"] = setup.sampler.seed;
    c["initial_iterations"] = setup.convergence.initial_iterations;
    c["extension_block"] = setup.convergence.extension_block;
    c["max_iterations"] = setup.convergence.max_iterations;
    c["target_ess"] = setup.convergence.target_ess;
    c["max_restarts"] = setup.convergence.max_restarts;
    c["priors"] = p;
    return c;
}

json diagnostics_json(const ConvergenceReport& report) {
    json stages = json::array();
    for (const GewekeResult& g : report.burn_in.stages) {
        stages.push_back({{"z", g.z}, {"passed", g.passed}});
    }
    return {{"geweke_stages", stages},
            {"discard_fraction", report.burn_in.discard_fraction},
            {"burn_in_converged", report.burn_in.converged},
            {"ess", report.ess_value},
            {"ess_reached", report.ess_reached},
            {"restarts", report.restarts_used},
            {"total_iterations", report.total_iterations}};
}

std::string output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SGMIX_OUTPUT_DIR")) return env;
    return ".";
}

void write_manifest(const std::string& dir, json manifest, bool timings, double seconds) {
    if (timings) manifest["timings"] = {{"wall_seconds", seconds}};
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

void write_trace_csv(const std::string& path, const ChainTrace& trace) {
    std::vector<std::vector<double>> rows;
    rows.reserve(trace.records.size());
    for (const TraceRecord& r : trace.records) {
        rows.push_back({static_cast<double>(r.iter), r.loglik, r.T, r.sigma2, r.alpha,
                        static_cast<double>(r.n_clusters), r.acc_locations, r.acc_jumps,
                        r.acc_mass});
    }
    write_csv(path, {"iter", "loglik", "T", "sigma2", "alpha", "n_clusters", "acc_locations",
                     "acc_jumps", "acc_mass"},
              rows);
}

int cmd_fit(const std::string& config_path, const std::string& data_path,
            const std::string& out_flag, long seed_flag, bool timings) {
    auto t0 = std::chrono::steady_clock::now();
    json doc = load_config(config_path);
    check_keys(doc, kSamplerKeys, "fit config");
    RunSetup setup = parse_run_setup(doc);
    if (seed_flag >= 0) setup.sampler.seed = static_cast<std::uint64_t>(seed_flag);
    setup.sampler.validate();
    setup.convergence.validate();
    if (!fs::exists(data_path)) {
        throw ParameterError("dataset not found: " + data_path);
    }
    RegressionDataset data = read_regression_csv(data_path);

    std::string dir = output_dir(out_flag);
    fs::create_directories(dir);

    FitResult fit = fit_regression(data, setup.kernel, setup.sampler, setup.convergence,
                                   Rng(setup.sampler.seed));

    std::vector<std::vector<double>> mean_rows, band_rows;
    for (std::size_t i = 0; i < fit.design.size(); ++i) {
        mean_rows.push_back({fit.design[i], fit.posterior_mean[i]});
        band_rows.push_back({fit.design[i], fit.bands.lower[i], fit.bands.upper[i]});
    }
    write_csv(dir + "/posterior_mean.csv", {"x", "mean"}, mean_rows);
    write_csv(dir + "/credible_bands.csv", {"x", "lower", "upper"}, band_rows);
    write_trace_csv(dir + "/trace.csv", fit.trace);

    json manifest;
    manifest["command"] = "fit";
    manifest["dataset"] = data_path;
    manifest["config"] = echo_setup(setup);
    manifest["seed"] = setup.sampler.seed;
    manifest["diagnostics"] = diagnostics_json(fit.report);
    manifest["artifacts"] = {"posterior_mean.csv", "credible_bands.csv", "trace.csv"};
    write_manifest(dir, manifest, timings,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_flag, long seed_flag,
                  int threads_flag, bool timings) {
    auto t0 = std::chrono::steady_clock::now();
    json doc = load_config(config_path);
    std::vector<std::string> keys = kSamplerKeys;
    for (const char* k : {"function", "functions", "n", "rsnr", "replications",
                          "sigma_override", "dump_curves"}) {
        keys.push_back(k);
    }
    check_keys(doc, keys, "benchmark config");
    RunSetup setup = parse_run_setup(doc);
    if (seed_flag >= 0) setup.sampler.seed = static_cast<std::uint64_t>(seed_flag);

    std::vector<std::string> functions;
    if (doc.contains("functions")) {
        for (const auto& f : doc.at("functions")) functions.push_back(f.get<std::string>());
    } else {
        functions.push_back(doc.contains("function") ? doc.at("function").get<std::string>()
                                                     : "blip");
    }

    std::string dir = output_dir(out_flag);
    fs::create_directories(dir);

    std::vector<std::vector<double>> report_rows;
    json summary;
    summary["command"] = "benchmark";
    summary["config"] = echo_setup(setup);
    summary["functions"] = json::array();

    for (const std::string& fn : functions) {
        BenchmarkSpec spec;
        spec.function = fn;
        spec.n = jgeti(doc, "n", 128);
        spec.rsnr = jget(doc, "rsnr", 3.0);
        spec.sigma_override = jget(doc, "sigma_override", -1.0);
        spec.replications = jgeti(doc, "replications", 10);
        spec.kernel = setup.kernel;
        spec.sampler = setup.sampler;
        spec.convergence = setup.convergence;
        spec.master_seed = setup.sampler.seed;
        spec.threads = threads_flag;
        spec.keep_curves = doc.contains("dump_curves") && doc.at("dump_curves").get<bool>();
        BenchmarkReport report = run_benchmark(spec);

        if (spec.keep_curves) {
            for (const ReplicationResult& r : report.replications) {
                if (r.posterior_mean.empty()) continue;
                std::vector<std::vector<double>> rows;
                for (std::size_t j = 0; j < report.design.size(); ++j) {
                    rows.push_back({report.design[j], r.posterior_mean[j], r.band_lower[j],
                                    r.band_upper[j]});
                }
                write_csv(dir + "/curves_" + fn + "_rep" + std::to_string(r.index) + ".csv",
                          {"x", "mean", "lower", "upper"}, rows);
            }
        }

        for (const ReplicationResult& r : report.replications) {
            report_rows.push_back({static_cast<double>(report_rows.size()),
                                   static_cast<double>(r.index), r.rmse,
                                   r.converged && r.ess_reached ? 1.0 : 0.0, r.ess_value,
                                   static_cast<double>(r.iterations),
                                   static_cast<double>(r.restarts), r.jump_acceptance,
                                   r.band_coverage});
        }
        summary["functions"].push_back({{"function", fn},
                                        {"n", report.n},
                                        {"sigma", report.sigma},
                                        {"mean_rmse", report.mean_rmse},
                                        {"rmse_stderr", report.rmse_stderr},
                                        {"failures", report.failures}});
    }
    write_csv(dir + "/report.csv",
              {"row", "replication", "rmse", "converged", "ess", "iterations", "restarts",
               "jump_acceptance", "band_coverage"},
              report_rows);
    write_manifest(dir, summary, timings,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    // summary.json duplicates the manifest for tooling that expects that name
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_ct(const std::string& config_path, const std::string& out_flag, long seed_flag,
           bool timings) {
    auto t0 = std::chrono::steady_clock::now();
    json doc = load_config(config_path);
    std::vector<std::string> keys = kSamplerKeys;
    for (const char* k : {"resolution", "n", "m", "sigma2_noise", "iterations",
                          "discard_fraction"}) {
        keys.push_back(k);
    }
    check_keys(doc, keys, "ct config");
    RunSetup setup = parse_run_setup(doc);
    if (seed_flag >= 0) setup.sampler.seed = static_cast<std::uint64_t>(seed_flag);

    CtConfig config;
    config.resolution = jgeti(doc, "resolution", 32);
    config.n_r = jgeti(doc, "n", 32);
    config.m_theta = jgeti(doc, "m", 16);
    config.sigma2 = jget(doc, "sigma2_noise", 0.1);
    config.sampler = setup.sampler;
    config.sampler.n_iterations = jgetl(doc, "iterations", 4000);
    config.discard_fraction = jget(doc, "discard_fraction", 0.5);
    config.seed = setup.sampler.seed;

    CtResult result = run_ct(config);

    std::string dir = output_dir(out_flag);
    fs::create_directories(dir);
    int res = config.resolution;
    write_pgm16(dir + "/phantom.pgm", result.phantom, res, res, 2.0);
    write_matrix_csv(dir + "/phantom.csv", result.phantom, res, res);
    write_pgm16(dir + "/reconstruction.pgm", result.reconstruction, res, res, 2.0);
    write_matrix_csv(dir + "/reconstruction.csv", result.reconstruction, res, res);
    write_trace_csv(dir + "/trace.csv", result.trace);

    json manifest;
    manifest["command"] = "ct";
    manifest["config"] = echo_setup(setup);
    manifest["resolution"] = config.resolution;
    manifest["n"] = config.n_r;
    manifest["m"] = config.m_theta;
    manifest["observations"] = config.n_r * config.m_theta;
    manifest["sigma2_noise"] = config.sigma2;
    manifest["iterations"] = config.sampler.n_iterations;
    manifest["discard_fraction"] = config.discard_fraction;
    manifest["seed"] = config.seed;
    manifest["rmse_reconstruction"] = result.rmse_reconstruction;
    manifest["rmse_zero_baseline"] = result.rmse_zero_baseline;
    manifest["artifacts"] = {"phantom.pgm", "phantom.csv", "reconstruction.pgm",
                             "reconstruction.csv", "trace.csv"};
    write_manifest(dir, manifest, timings,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

int cmd_diagnose(const std::string& trace_path, const std::string& out_flag, bool timings) {
    auto t0 = std::chrono::steady_clock::now();
    if (!fs::exists(trace_path)) throw ParameterError("trace not found: " + trace_path);
    CsvTable table = read_csv(trace_path);
    int col = table.column_index("loglik");
    if (col < 0) throw DataError(trace_path + ": no 'loglik' column");
    std::vector<double> loglik;
    loglik.reserve(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        loglik.push_back(table.cell(i, static_cast<std::size_t>(col)));
    }

    BurnInDecision decision = burn_in_protocol(loglik);
    std::size_t from = static_cast<std::size_t>(
        std::floor(decision.discard_fraction * static_cast<double>(loglik.size())));
    std::vector<double> kept(loglik.begin() + from, loglik.end());
    double e = decision.converged && kept.size() >= 10 ? ess(kept) : 0.0;

    json stages = json::array();
    for (const GewekeResult& g : decision.stages) {
        stages.push_back({{"z", g.z}, {"passed", g.passed}});
    }
    json out = {{"command", "diagnose"},
                {"trace", fs::path(trace_path).filename().string()},
                {"geweke_stages", stages},
                {"discard_fraction", decision.discard_fraction},
                {"converged", decision.converged},
                {"ess", e}};

    std::string dir = output_dir(out_flag);
    fs::create_directories(dir);
    if (timings) {
        out["timings"] = {{"wall_seconds", std::chrono::duration<double>(
                                               std::chrono::steady_clock::now() - t0)
                                               .count()}};
    }
    write_text_file(dir + "/diagnostics.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << std::endl;
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Symmetric Gamma process mixture regression"};
    app.require_subcommand(1);

    std::string config_path, data_path, trace_path, out_dir;
    long seed_flag = -1;
    int threads_flag = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool timings = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory (default $SGMIX_OUTPUT_DIR or .)");
        sub->add_option("--seed", seed_flag, "master seed (overrides config)");
        sub->add_flag("--timings", timings, "include wall-clock timings in the manifest");
    };

    CLI::App* fit = app.add_subcommand("fit", "fit a regression dataset");
    fit->add_option("data", data_path, "CSV dataset (design column, response column)")
        ->required();
    add_common(fit);

    CLI::App* bench = app.add_subcommand("benchmark", "test-function benchmark harness");
    add_common(bench);
    bench->add_option("--threads", threads_flag, "worker threads for replications");

    CLI::App* ct = app.add_subcommand("ct", "Radon-transform reconstruction experiment");
    add_common(ct);

    CLI::App* diag = app.add_subcommand("diagnose", "convergence diagnostics for a stored trace");
    diag->add_option("trace", trace_path, "trace CSV with a loglik column")->required();
    add_common(diag);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << std::endl;
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }

    try {
        if (app.got_subcommand(fit)) {
            return cmd_fit(config_path, data_path, out_dir, seed_flag, timings);
        }
        if (app.got_subcommand(bench)) {
            return cmd_benchmark(config_path, out_dir, seed_flag, threads_flag, timings);
        }
        if (app.got_subcommand(ct)) {
            return cmd_ct(config_path, out_dir, seed_flag, timings);
        }
        if (app.got_subcommand(diag)) {
            return cmd_diagnose(trace_path, out_dir, timings);
        }
    } catch (const ConvergenceFailure& e) {
        std::cerr << "convergence failure: " << e.what() << std::endl;
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << std::endl;
        return 3;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 2;
}

}  // namespace sgmix
