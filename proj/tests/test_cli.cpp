#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sgmix/cli.hpp"
#include "sgmix/csv.hpp"
#include "sgmix/errors.hpp"

using namespace sgmix;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "sgmix_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_tiny_dataset(const fs::path& path, int n = 32) {
    std::string body = "x,y\n";
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) / n;
        double y = 0.5 + 0.25 * std::sin(6.28318 * x);
        body += format_double(x) + "," + format_double(y) + "\n";
    }
    write_text_file(path.string(), body);
}

std::string fast_fit_config() {
    return R"({
      "p": 10, "adapt_iterations": 300, "initial_iterations": 1500,
      "extension_block": 1000, "max_iterations": 8000, "target_ess": 50,
      "seed": 3
    })";
}

}  // namespace

TEST_CASE("fit: missing dataset exits 2 and names the path") {
    fs::path dir = fresh_dir("fit_missing");
    int code = run_cli({"fit", (dir / "nope.csv").string(), "--out", dir.string()});
    CHECK(code == 2);
}

TEST_CASE("fit: tiny synthetic dataset emits all four artifacts") {
    fs::path dir = fresh_dir("fit_smoke");
    write_tiny_dataset(dir / "data.csv");
    write_text_file((dir / "cfg.json").string(), fast_fit_config());
    int code = run_cli({"fit", (dir / "data.csv").string(), "--config",
                        (dir / "cfg.json").string(), "--out", (dir / "out").string()});
    REQUIRE(code == 0);
    CHECK(fs::exists(dir / "out" / "posterior_mean.csv"));
    CHECK(fs::exists(dir / "out" / "credible_bands.csv"));
    CHECK(fs::exists(dir / "out" / "trace.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("fit: identical config and seed give byte-identical artifacts") {
    fs::path dir = fresh_dir("fit_determinism");
    write_tiny_dataset(dir / "data.csv");
    write_text_file((dir / "cfg.json").string(), fast_fit_config());
    for (const char* sub : {"a", "b"}) {
        int code = run_cli({"fit", (dir / "data.csv").string(), "--config",
                            (dir / "cfg.json").string(), "--out", (dir / sub).string()});
        REQUIRE(code == 0);
    }
    for (const char* name :
         {"posterior_mean.csv", "credible_bands.csv", "trace.csv", "manifest.json"}) {
        std::string a = read_text_file((dir / "a" / name).string());
        std::string b = read_text_file((dir / "b" / name).string());
        CHECK(a == b);
    }
}

TEST_CASE("benchmark: single-replication smoke produces a one-row report") {
    fs::path dir = fresh_dir("bench_smoke");
    write_text_file((dir / "cfg.json").string(), R"({
      "function": "blip", "n": 16, "replications": 1,
      "p": 8, "adapt_iterations": 200, "initial_iterations": 1200,
      "max_iterations": 4000, "target_ess": 0, "seed": 4
    })");
    int code = run_cli({"benchmark", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "out").string(), "--threads", "1"});
    REQUIRE(code == 0);
    CsvTable report = read_csv((dir / "out" / "report.csv").string());
    CHECK(report.rows() == 1);
    CHECK(fs::exists(dir / "out" / "summary.json"));
}

TEST_CASE("benchmark: invalid function name exits 2 and lists valid names") {
    fs::path dir = fresh_dir("bench_badfn");
    write_text_file((dir / "cfg.json").string(), R"({"function": "zigzag"})");
    int code = run_cli({"benchmark", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "out").string()});
    CHECK(code == 2);
}

TEST_CASE("config validation rejects unknown keys and invalid values") {
    fs::path dir = fresh_dir("cfg_validation");
    write_tiny_dataset(dir / "data.csv");

    write_text_file((dir / "unknown.json").string(), R"({"particles": 10})");
    CHECK(run_cli({"fit", (dir / "data.csv").string(), "--config",
                   (dir / "unknown.json").string(), "--out", dir.string()}) == 2);

    write_text_file((dir / "badp.json").string(), R"({"p": 0})");
    CHECK(run_cli({"fit", (dir / "data.csv").string(), "--config",
                   (dir / "badp.json").string(), "--out", dir.string()}) == 2);

    write_text_file((dir / "badtarget.json").string(), R"({"target_acceptance": 1.5})");
    CHECK(run_cli({"fit", (dir / "data.csv").string(), "--config",
                   (dir / "badtarget.json").string(), "--out", dir.string()}) == 2);
}

TEST_CASE("ct: small smoke produces phantom and reconstruction artifacts") {
    fs::path dir = fresh_dir("ct_smoke");
    write_text_file((dir / "cfg.json").string(), R"({
      "resolution": 16, "n": 12, "m": 8, "iterations": 300,
      "p": 12, "adapt_iterations": 150, "seed": 5
    })");
    int code = run_cli({"ct", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "out").string()});
    REQUIRE(code == 0);
    for (const char* name : {"phantom.pgm", "phantom.csv", "reconstruction.pgm",
                             "reconstruction.csv", "manifest.json", "trace.csv"}) {
        CHECK(fs::exists(dir / "out" / name));
    }
    // sigma2 default honored in manifest
    std::string manifest = read_text_file((dir / "out" / "manifest.json").string());
    CHECK(manifest.find("\"sigma2_noise\": 0.1") != std::string::npos);
    CHECK(manifest.find("\"observations\": 96") != std::string::npos);
}

TEST_CASE("diagnose: fixture trace, iid trace, and parse failures") {
    fs::path dir = fresh_dir("diagnose");
    std::string fixture = std::string(SGMIX_TEST_DATA_DIR) + "/diagnose_fixture_trace.csv";
    int code = run_cli({"diagnose", fixture, "--out", (dir / "out").string()});
    REQUIRE(code == 0);
    CHECK(fs::exists(dir / "out" / "diagnostics.json"));

    // iid-noise trace converges at discard 0
    std::string iid_path = (dir / "iid.csv").string();
    std::string body = "iter,loglik\n";
    std::uint64_t state = 88172645463325252ULL;
    for (int i = 0; i < 2000; ++i) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        double u = static_cast<double>(state >> 11) / 9007199254740992.0;
        body += std::to_string(i) + "," + format_double(u - 0.5) + "\n";
    }
    write_text_file(iid_path, body);
    REQUIRE(run_cli({"diagnose", iid_path, "--out", (dir / "iid_out").string()}) == 0);
    std::string report = read_text_file((dir / "iid_out" / "diagnostics.json").string());
    CHECK(report.find("\"discard_fraction\": 0.0") != std::string::npos);
    CHECK(report.find("\"converged\": true") != std::string::npos);

    // truncated file: parse error naming the offending line, exit 3
    std::string broken_path = (dir / "broken.csv").string();
    write_text_file(broken_path, "iter,loglik\n1,-3.5\n2,-3.1\n3,");
    CHECK(run_cli({"diagnose", broken_path, "--out", (dir / "broken_out").string()}) == 3);

    // missing trace: exit 2
    CHECK(run_cli({"diagnose", (dir / "absent.csv").string(), "--out", dir.string()}) == 2);
}

TEST_CASE("help exits zero") {
    CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("benchmark: all 12 functions produce 12 report sections") {
    fs::path dir = fresh_dir("bench_all12");
    write_text_file((dir / "cfg.json").string(), R"({
      "functions": ["step","wave","blip","blocks","bumps","heavisine",
                    "doppler","angles","parabolas","tshsine","spikes","corner"],
      "n": 16, "replications": 1, "p": 6, "adapt_iterations": 100,
      "initial_iterations": 1100, "max_iterations": 2000, "target_ess": 0,
      "seed": 12
    })");
    int code = run_cli({"benchmark", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "out").string(), "--threads", "2"});
    REQUIRE(code == 0);
    CsvTable report = read_csv((dir / "out" / "report.csv").string());
    CHECK(report.rows() == 12);
    std::string summary = read_text_file((dir / "out" / "summary.json").string());
    for (const char* fn : {"step", "wave", "blip", "blocks", "bumps", "heavisine",
                           "doppler", "angles", "parabolas", "tshsine", "spikes",
                           "corner"}) {
        CHECK(summary.find(std::string("\"function\": \"") + fn + "\"") != std::string::npos);
    }
}

TEST_CASE("benchmark: dump_curves emits per-replication band curves") {
    fs::path dir = fresh_dir("bench_curves");
    write_text_file((dir / "cfg.json").string(), R"({
      "function": "blip", "n": 16, "replications": 2, "p": 6,
      "adapt_iterations": 100, "initial_iterations": 1100, "max_iterations": 2000,
      "target_ess": 0, "dump_curves": true, "seed": 13
    })");
    REQUIRE(run_cli({"benchmark", "--config", (dir / "cfg.json").string(), "--out",
                     (dir / "out").string(), "--threads", "1"}) == 0);
    for (int rep : {0, 1}) {
        CsvTable curves =
            read_csv((dir / "out" / ("curves_blip_rep" + std::to_string(rep) + ".csv")).string());
        CHECK(curves.rows() == 16);
        REQUIRE(curves.columns() == 4);
        for (std::size_t i = 0; i < curves.rows(); ++i) {
            CHECK(curves.cell(i, 2) <= curves.cell(i, 1));  // lower <= mean
            CHECK(curves.cell(i, 1) <= curves.cell(i, 3));  // mean <= upper
        }
    }
}

TEST_CASE("fit manifest config echo is sufficient to re-run the command") {
    fs::path dir = fresh_dir("fit_rerun");
    write_tiny_dataset(dir / "data.csv");
    write_text_file((dir / "cfg.json").string(), fast_fit_config());
    REQUIRE(run_cli({"fit", (dir / "data.csv").string(), "--config",
                     (dir / "cfg.json").string(), "--out", (dir / "a").string()}) == 0);

    // Extract the echoed config from the manifest and run with it.
    std::string manifest = read_text_file((dir / "a" / "manifest.json").string());
    auto pos = manifest.find("\"config\": {");
    REQUIRE(pos != std::string::npos);
    int depth = 0;
    std::size_t start = manifest.find('{', pos + 9);
    std::size_t end = start;
    for (std::size_t i = start; i < manifest.size(); ++i) {
        if (manifest[i] == '{') ++depth;
        if (manifest[i] == '}') {
            if (--depth == 0) {
                end = i;
                break;
            }
        }
    }
    write_text_file((dir / "echo.json").string(), manifest.substr(start, end - start + 1));
    REQUIRE(run_cli({"fit", (dir / "data.csv").string(), "--config",
                     (dir / "echo.json").string(), "--out", (dir / "b").string()}) == 0);
    CHECK(read_text_file((dir / "a" / "posterior_mean.csv").string()) ==
          read_text_file((dir / "b" / "posterior_mean.csv").string()));
    CHECK(read_text_file((dir / "a" / "trace.csv").string()) ==
          read_text_file((dir / "b" / "trace.csv").string()));
}
