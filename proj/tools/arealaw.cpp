// Batch front end: coefficient tables, L-scans with fit + verdict, and the
// built-in cross-check suite. See README.md for the config format.

#include <CLI11.hpp>
#include <thread>

#include "arealaw/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"relativistic Fermi-projection entanglement scaling toolkit"};
    app.require_subcommand(1);

    arealaw::CliOptions opt;
    opt.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    CLI::App* coeff = app.add_subcommand("coeff", "analytic coefficient table (CSV)");
    CLI::App* scan = app.add_subcommand("scan", "L-scan, fit and verdict (CSV + JSON)");
    CLI::App* selftest = app.add_subcommand("selftest", "run built-in cross-checks");

    for (CLI::App* sub : {coeff, scan}) {
        sub->add_option("--config", opt.config_path, "run configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--threads", opt.threads, "worker pool size");
    }
    scan->add_option("--mode", opt.mode_override, "single | three-domain")
        ->check(CLI::IsMember({"single", "three-domain"}));
    scan->add_flag("--resume", opt.resume, "reuse cached per-L traces");
    scan->add_flag("--strict", opt.strict, "exit 4 on verdict FAIL");

    CLI11_PARSE(app, argc, argv);

    if (coeff->parsed()) return arealaw::cmd_coeff(opt);
    if (scan->parsed()) return arealaw::cmd_scan(opt);
    if (selftest->parsed()) return arealaw::cmd_selftest();
    return arealaw::kExitConfig;
}
