#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "arealaw/coefficients.hpp"
#include "arealaw/common.hpp"
#include "arealaw/config.hpp"
#include "arealaw/entropy.hpp"
#include "arealaw/io.hpp"
#include "arealaw/kernel.hpp"
#include "arealaw/scaling.hpp"
#include "arealaw/spinor.hpp"

namespace arealaw {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitVerdictFail = 4,
};

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    std::string mode_override;  // empty: use config
    bool resume = false;
    bool strict = false;
};

/// Coefficient table: one row per (alpha, E_F, m, region) combination.
inline int cmd_coeff(const CliOptions& opt, std::ostream& log = std::cerr) {
    RunConfig cfg;
    try {
        cfg = load_config(opt.config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    const std::string hash = config_hash(cfg.canonical_text);
    const std::vector<double> efs = cfg.E_F_list.empty() ? std::vector<double>{cfg.params.E_F}
                                                         : cfg.E_F_list;
    const std::vector<double> ms = cfg.m_list.empty() ? std::vector<double>{cfg.params.m} : cfg.m_list;

    std::vector<CoeffRow> rows;
    try {
        for (double alpha : cfg.alphas) {
            const TestFunction h = renyi_entropy(alpha);
            for (double ef : efs) {
                for (double m : ms) {
                    for (const auto& [name, region] : cfg.regions) {
                        DiracParams p = cfg.params;
                        p.E_F = ef;
                        p.m = m;
                        p.d = region.dim();
                        CoeffRow row;
                        row.alpha = alpha;
                        row.d = p.d;
                        row.m = m;
                        row.E_F = ef;
                        row.b = p.b;
                        row.region_id = name;
                        row.report = coefficient_report(h, region, p);
                        rows.push_back(row);
                    }
                }
            }
        }
    } catch (const QuadratureError& e) {
        log << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }

    write_file(std::filesystem::path(opt.out_dir) / "coeff.csv", coeff_csv(rows, hash));
    return kExitOk;
}

/// L-scan with fit and verdict. Per-L traces are cached under the config
/// hash; `--resume` reuses cached rows byte-identically.
inline int cmd_scan(const CliOptions& opt, std::ostream& log = std::cerr) {
    RunConfig cfg;
    std::string mode;
    try {
        cfg = load_config(opt.config_path);
        mode = opt.mode_override.empty() ? cfg.mode : opt.mode_override;
        if (mode != "single" && mode != "three-domain")
            throw ConfigError("mode: expected `single` or `three-domain`");
        if (cfg.L_list.size() < 3)
            throw ConfigError("L_list: insufficient points (need >= 3 scales)");
        if (cfg.params.d > 2) throw ConfigError("scan: kernel quadrature implemented for d <= 2");
        if (mode == "three-domain" && !cfg.region_prime)
            throw ConfigError("three-domain mode requires `region_prime`");
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::string hash = config_hash(cfg.canonical_text);
    const std::filesystem::path out_dir(opt.out_dir);
    TestFunction h;
    CoefficientReport predicted;
    try {
        h = cfg.test_function();
        predicted = enhanced_coefficient(h, cfg.primary_region(), cfg.params.E_F, cfg.params.m);
        if (std::abs(predicted.W) <= 1e-12 && !(cfg.reference_W > 0.0))
            throw ConfigError(
                "reference_W: required in regimes with a vanishing log coefficient");
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        log << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    const Region& region = cfg.primary_region();

    ScanOptions scan_opt;
    scan_opt.resolution = cfg.resolution;  // 0 = auto, scaled per L inside the scan
    scan_opt.resolution_safety = cfg.resolution_safety;
    scan_opt.threads = opt.threads;
    // anchor the auto resolution at the full list's smallest scale so that
    // cache-resumed partial runs use identical grids
    double L_min = cfg.L_list.front();
    for (double L : cfg.L_list) L_min = std::min(L_min, L);
    scan_opt.anchor_L = L_min;

    // gather entries: cached ones first, the rest computed at the same resolution
    ScalingSeries series;
    series.d = cfg.params.d;
    std::vector<double> todo;
    std::vector<ScanEntry> cached;
    for (double L : cfg.L_list) {
        if (opt.resume) {
            if (auto e = load_cached_entry(out_dir, hash, mode, L)) {
                cached.push_back(*e);
                continue;
            }
        }
        todo.push_back(L);
    }

    ScalingSeries fresh;
    fresh.d = cfg.params.d;
    try {
        if (!todo.empty()) {
            fresh = (mode == "single")
                        ? single_domain_scan(region, cfg.params, h, todo, scan_opt)
                        : three_domain_scan(region, *cfg.region_prime, cfg.params, h, todo, scan_opt);
        }
    } catch (const GeometryError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        log << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    for (double L : cfg.L_list) {
        bool found = false;
        for (const auto& e : cached)
            if (e.L == L) {
                series.entries.push_back(e);
                found = true;
                break;
            }
        if (found) continue;
        for (const auto& e : fresh.entries)
            if (e.L == L) {
                series.entries.push_back(e);
                break;
            }
    }
    for (const auto& e : fresh.entries) store_cached_entry(out_dir, hash, mode, e);

    write_file(out_dir / "scan.csv", scan_csv(series, hash));
    for (const auto& e : series.entries) {
        if (!e.ok) log << "L=" << format_number(e.L) << " failed: " << e.error << "\n";
        if (e.ok && e.clip_excursion > 1e-3)
            log << "L=" << format_number(e.L)
                << ": spectrum exceeded [0,1] by " << format_number(e.clip_excursion)
                << " before clipping\n";
    }

    if (series.usable() < 3) {
        log << "numerical failure: fewer than 3 usable scales\n";
        return kExitNumerical;
    }

    FitResult fit;
    VerdictReport v;
    try {
        fit = fit_log_coefficient(series);
        v = verdict(fit, predicted.W, cfg.tolerance, cfg.reference_W);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    write_file(out_dir / "fit.json", fit_json(fit, v, hash).dump(2) + "\n");
    log << "c_log = " << format_number(fit.c_log) << ", predicted W = " << format_number(v.predicted)
        << " -> " << v.message << "\n";

    if (!v.pass && opt.strict) return kExitVerdictFail;
    return kExitOk;
}

/// Built-in cross-check suite: Clifford relations, spectral calculus against
/// an eigendecomposition oracle, entropy-integral closed forms, geometric
/// factor quadrature vs closed form, kernel quadrature vs the analytic sharp
/// kernel, and the dual-rule volume coefficient.
inline int cmd_selftest(std::ostream& out = std::cout) {
    int passed = 0, failed = 0;
    const auto check = [&](const std::string& name, bool ok) {
        out << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
        (ok ? passed : failed) += 1;
    };

    // Clifford relations, exact
    for (int d = 1; d <= 4; ++d) {
        const DiracMatrices g = dirac_matrices(d);
        const int n = 1 << ((d + 1) / 2);
        double defect = 0.0;
        const SpinorMatrix id = SpinorMatrix::Identity(n, n);
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                const SpinorMatrix anti = g.alpha[j] * g.alpha[k] + g.alpha[k] * g.alpha[j];
                defect = std::max(defect, (anti - (j == k ? 2.0 : 0.0) * id).cwiseAbs().maxCoeff());
            }
            defect = std::max(defect, (g.alpha[j] * g.beta + g.beta * g.alpha[j]).cwiseAbs().maxCoeff());
            defect = std::max(defect, (g.alpha[j] - g.alpha[j].adjoint()).cwiseAbs().maxCoeff());
        }
        defect = std::max(defect, (g.beta * g.beta - id).cwiseAbs().maxCoeff());
        check("clifford relations d=" + std::to_string(d), defect == 0.0);
    }

    // spectral calculus vs eigendecomposition oracle
    {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> uni(-3.0, 3.0);
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            DiracParams p;
            p.d = 1 + trial % 3;
            p.m = std::abs(uni(rng));
            Eigen::VectorXd xi(p.d);
            for (int k = 0; k < p.d; ++k) xi[k] = uni(rng);
            const auto a = [](double x) { return x * x + 0.5 * x; };
            const SpinorMatrix direct = apply_function(a, p, xi);
            Eigen::SelfAdjointEigenSolver<SpinorMatrix> es(symbol_eval(p, xi));
            SpinorMatrix oracle = es.eigenvectors() *
                                  es.eigenvalues().unaryExpr([&](double x) { return a(x); }).asDiagonal() *
                                  es.eigenvectors().adjoint();
            worst = std::max(worst, (direct - oracle).cwiseAbs().maxCoeff());
        }
        check("spectral calculus vs eigendecomposition (200 draws)", worst < 1e-12);
    }

    // entropy integral closed forms
    {
        double worst = 0.0;
        for (double alpha : {0.5, 1.0, 2.0, 3.0, 5.0}) {
            const double expected = std::numbers::pi * std::numbers::pi * (1.0 + alpha) / (6.0 * alpha);
            const double got = entropy_integral(renyi_entropy(alpha));
            worst = std::max(worst, std::abs(got - expected) / expected);
        }
        check("entropy integral vs closed form (Renyi family)", worst < 1e-8);
    }

    // geometric factor quadrature vs closed form
    {
        double worst = 0.0;
        for (double R : {0.5, 1.0, 2.0}) {
            for (double pf : {0.5, 1.0, 2.0}) {
                const Region disc = Region::disc(0.0, 0.0, R);
                const double quad = geometric_factor(disc, pf, 0.0);
                worst = std::max(worst, std::abs(quad - 4.0 * R * pf) / (4.0 * R * pf));
                const double closed = geometric_factor_closed_form(2, disc.boundary_measure(), pf);
                worst = std::max(worst, std::abs(quad - closed) / closed);
            }
        }
        check("geometric factor disc quadrature vs 4 R p_F", worst < 1e-6);
    }

    // kernel quadrature vs analytic sharp kernel (d=1, massless)
    {
        DiracParams p;
        p.d = 1;
        p.m = 0.0;
        p.E_F = 1.0;
        p.b = 1.0;
        const double L = 37.0;
        const KernelEvaluator eval(p, L, sharp_ball_profiles(1.0));
        double worst = 0.0;
        for (double r : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, -0.25, -2.0}) {
            Eigen::VectorXd rv(1);
            rv[0] = r;
            worst = std::max(worst, (eval(rv) - sharp_kernel_1d(1.0, L, r)).cwiseAbs().maxCoeff());
        }
        check("kernel quadrature vs analytic sharp kernel", worst < 1e-6);
    }

    // volume coefficient: two independent quadrature rules
    {
        const TestFunction h = renyi_entropy(1.0);
        const double a = volume_coefficient_zero(h, 1.0, false);
        const double b = volume_coefficient_zero(h, 1.0, true);
        check("volume coefficient dual-rule agreement", std::abs(a - b) < 1e-8);
    }

    out << "selftest: " << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? kExitOk : kExitNumerical;
}

}  // namespace arealaw
