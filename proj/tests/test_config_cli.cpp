#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "arealaw/cli.hpp"
#include "arealaw/config.hpp"
#include "arealaw/io.hpp"

using namespace arealaw;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "arealaw_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kTinyScan =
    "d = 1\n"
    "m = 0\n"
    "E_F = 1\n"
    "b = 0.5\n"
    "alpha = 1\n"
    "region = seg interval 0 1\n"
    "L_list = 6 8 10\n"
    "tolerance = 0.5\n";

}  // namespace

TEST_CASE("config parsing: values, defaults and field errors") {
    const RunConfig cfg = parse_config(
        "# a comment\n"
        "d = 1\n"
        "m = 0.5\n"
        "E_F = -2\n"
        "b = 1\n"
        "alpha = 0.5 1 2\n"
        "region = seg interval 0 1\n"
        "region = pair interval 2 3 4 5\n"
        "L_list = 10 20 40\n"
        "resolution = auto\n");
    CHECK(cfg.params.d == 1);
    CHECK(cfg.params.m == 0.5);
    CHECK(cfg.params.E_F == -2.0);
    CHECK(cfg.alphas.size() == 3);
    CHECK(cfg.regions.size() == 2);
    CHECK(cfg.regions[1].first == "pair");
    CHECK(cfg.resolution == 0.0);
    CHECK(cfg.mode == "single");

    CHECK_THROWS_AS(parse_config("bogus_key = 1\nregion = s interval 0 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("d = 1\nd = 2\nregion = s interval 0 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("d = 1.5\nregion = s interval 0 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("region = s interval 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("region = s disc 0 0 1\nd = 1\n"), ConfigError);  // dim mismatch
    CHECK_THROWS_AS(parse_config("d = 1\n"), ConfigError);                         // no region
    CHECK_THROWS_AS(parse_config("alpha = -1\nregion = s interval 0 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode = both\nregion = s interval 0 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("L_list = 10 10 20\nregion = s interval 0 1\n"), ConfigError);
}

TEST_CASE("config hashing is whitespace- and comment-insensitive") {
    const RunConfig a = parse_config("d = 1\nregion = s interval 0 1\n");
    const RunConfig b = parse_config("  d =  1   # mass shell\nregion =   s interval 0 1\n");
    const RunConfig c = parse_config("d = 2\nregion = s disc 0 0 1\n");
    CHECK(config_hash(a.canonical_text) == config_hash(b.canonical_text));
    CHECK(config_hash(a.canonical_text) != config_hash(c.canonical_text));
    CHECK(config_hash(a.canonical_text).size() == 16);
}

TEST_CASE("coefficient command writes a deterministic CSV") {
    const fs::path cfg = write_temp("coeff.cfg",
                                    "d = 1\n"
                                    "m = 0\n"
                                    "E_F = 1\n"
                                    "b = 1\n"
                                    "alpha = 1 2\n"
                                    "E_F_list = 1 0.3\n"
                                    "m_list = 0 1\n"
                                    "region = seg interval 0 1\n");
    CliOptions opt;
    opt.config_path = cfg.string();
    opt.out_dir = (fs::temp_directory_path() / "arealaw_tests" / "coeff_out").string();
    std::ostringstream log;
    REQUIRE(cmd_coeff(opt, log) == kExitOk);

    const std::string csv = slurp(fs::path(opt.out_dir) / "coeff.csv");
    CHECK(csv.rfind("# schema=1", 0) == 0);
    CHECK(csv.find("alpha,d,m,E_F,b,region_id,regime,p_F,Phi,W,V") != std::string::npos);
    CHECK(csv.find("gapped-area-law") != std::string::npos);  // E_F=0.3, m=1 row
    CHECK(csv.find("0.333333333333") != std::string::npos);   // W for alpha=1, E_F=1, m=0

    // byte-identical on re-run
    REQUIRE(cmd_coeff(opt, log) == kExitOk);
    CHECK(slurp(fs::path(opt.out_dir) / "coeff.csv") == csv);
}

TEST_CASE("scan command end-to-end with cache resume") {
    const fs::path cfg = write_temp("scan.cfg", kTinyScan);
    const fs::path out = fs::temp_directory_path() / "arealaw_tests" / "scan_out";
    fs::remove_all(out);
    CliOptions opt;
    opt.config_path = cfg.string();
    opt.out_dir = out.string();
    opt.threads = 2;
    std::ostringstream log;
    REQUIRE(cmd_scan(opt, log) == kExitOk);

    const std::string csv = slurp(out / "scan.csv");
    CHECK(csv.rfind("# schema=1", 0) == 0);
    CHECK(csv.find("L,raw_trace,volume_subtracted,wall_ms") != std::string::npos);
    CHECK(slurp(out / "fit.json").find("c_log") != std::string::npos);

    // resume: cached rows reproduce the file byte-identically
    opt.resume = true;
    REQUIRE(cmd_scan(opt, log) == kExitOk);
    CHECK(slurp(out / "scan.csv") == csv);
}

TEST_CASE("scan command rejects bad configs with exit code 2") {
    CliOptions opt;
    std::ostringstream log;
    opt.config_path = "/nonexistent/path.cfg";
    CHECK(cmd_scan(opt, log) == kExitConfig);

    const fs::path two = write_temp("two.cfg",
                                    "d = 1\nE_F = 1\nalpha = 1\n"
                                    "region = seg interval 0 1\nL_list = 6 8\n");
    opt.config_path = two.string();
    CHECK(cmd_scan(opt, log) == kExitConfig);  // insufficient points

    const fs::path three_domain = write_temp("threedomain.cfg", kTinyScan);
    opt.config_path = three_domain.string();
    opt.mode_override = "three-domain";
    CHECK(cmd_scan(opt, log) == kExitConfig);  // missing region_prime
    opt.mode_override.clear();

    // zero-coefficient regime without an explicit reference scale
    const fs::path gapped = write_temp("gapped.cfg",
                                       "d = 1\nm = 1\nE_F = 0.3\nb = 1\nalpha = 1\n"
                                       "region = seg interval 0 1\nL_list = 6 8 10\n");
    opt.config_path = gapped.string();
    CHECK(cmd_scan(opt, log) == kExitConfig);
}

TEST_CASE("scan exits with the numerical-failure code when too few scales survive") {
    // explicit resolution that undersamples every requested scale
    const fs::path cfg = write_temp("undersampled.cfg",
                                    "d = 1\n"
                                    "m = 0\n"
                                    "E_F = 1\n"
                                    "b = 0.5\n"
                                    "alpha = 1\n"
                                    "region = seg interval 0 1\n"
                                    "L_list = 40 60 80\n"
                                    "resolution = 5\n");
    const fs::path out = fs::temp_directory_path() / "arealaw_tests" / "undersampled_out";
    fs::remove_all(out);
    CliOptions opt;
    opt.config_path = cfg.string();
    opt.out_dir = out.string();
    std::ostringstream log;
    CHECK(cmd_scan(opt, log) == kExitNumerical);
    CHECK(log.str().find("failed") != std::string::npos);
}

TEST_CASE("strict scans signal verdict failures") {
    // tolerance so tight that the tiny-scale fit cannot match the prediction
    const fs::path cfg = write_temp("strict.cfg",
                                    "d = 1\n"
                                    "m = 0\n"
                                    "E_F = 1\n"
                                    "b = 0.5\n"
                                    "alpha = 1\n"
                                    "region = seg interval 0 1\n"
                                    "L_list = 6 8 10\n"
                                    "tolerance = 1e-9\n");
    const fs::path out = fs::temp_directory_path() / "arealaw_tests" / "strict_out";
    fs::remove_all(out);
    CliOptions opt;
    opt.config_path = cfg.string();
    opt.out_dir = out.string();
    opt.strict = true;
    std::ostringstream log;
    CHECK(cmd_scan(opt, log) == kExitVerdictFail);
    opt.strict = false;
    CHECK(cmd_scan(opt, log) == kExitOk);
}

TEST_CASE("selftest suite passes") {
    std::ostringstream out;
    CHECK(cmd_selftest(out) == kExitOk);
    CHECK(out.str().find("[FAIL]") == std::string::npos);
}
