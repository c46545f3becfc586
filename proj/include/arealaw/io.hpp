#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arealaw/coefficients.hpp"
#include "arealaw/common.hpp"
#include "arealaw/scaling.hpp"

namespace arealaw {

/// All floating-point output uses 12 significant digits.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

struct CoeffRow {
    double alpha = 0.0;
    int d = 1;
    double m = 0.0, E_F = 0.0, b = 0.0;
    std::string region_id;
    CoefficientReport report;
};

/// coeff CSV, schema 1:
///   alpha,d,m,E_F,b,region_id,regime,p_F,Phi,W,V
inline std::string coeff_csv(const std::vector<CoeffRow>& rows, const std::string& hash) {
    std::ostringstream out;
    out << "# schema=1\n";
    out << "# config=" << hash << "\n";
    out << "alpha,d,m,E_F,b,region_id,regime,p_F,Phi,W,V\n";
    for (const auto& r : rows) {
        out << format_number(r.alpha) << ',' << r.d << ',' << format_number(r.m) << ','
            << format_number(r.E_F) << ',' << format_number(r.b) << ',' << r.region_id << ','
            << regime_name(r.report.regime) << ',' << format_number(r.report.p_F) << ','
            << format_number(r.report.Phi) << ',' << format_number(r.report.W) << ','
            << format_number(r.report.V) << '\n';
    }
    return out.str();
}

/// scan CSV, schema 1:
///   L,raw_trace,volume_subtracted,wall_ms
/// Failed entries appear as an error comment instead of a data row.
inline std::string scan_csv(const ScalingSeries& series, const std::string& hash) {
    std::ostringstream out;
    out << "# schema=1\n";
    out << "# config=" << hash << "\n";
    out << "L,raw_trace,volume_subtracted,wall_ms\n";
    for (const auto& e : series.entries) {
        if (!e.ok) {
            out << "# L=" << format_number(e.L) << " failed: " << e.error << "\n";
            continue;
        }
        out << format_number(e.L) << ',' << format_number(e.raw) << ','
            << format_number(e.volume_subtracted) << ',' << format_number(e.wall_ms) << '\n';
    }
    return out.str();
}

inline nlohmann::json fit_json(const FitResult& fit, const VerdictReport& v,
                               const std::string& hash) {
    nlohmann::json j;
    j["c_log"] = fit.c_log;
    j["c_area"] = fit.c_area;
    j["residual"] = fit.residual_norm;
    j["residual_rel"] = fit.residual_rel;
    j["c_log_stderr"] = fit.c_log_stderr;
    j["window"] = {{"L_min", fit.window_min}, {"points", fit.points_used}};
    j["predicted_W"] = v.predicted;
    j["verdict"] = v.message;
    j["tolerance"] = v.tolerance;
    if (v.reference > 0.0) j["reference_scale"] = v.reference;
    j["config"] = hash;
    return j;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// Per-L trace cache, content-addressed by the config hash.

inline std::filesystem::path cache_entry_path(const std::filesystem::path& out_dir,
                                              const std::string& hash, const std::string& mode,
                                              double L) {
    return out_dir / "cache" / hash / (mode + "-L" + format_number(L) + ".json");
}

inline std::optional<ScanEntry> load_cached_entry(const std::filesystem::path& out_dir,
                                                  const std::string& hash, const std::string& mode,
                                                  double L) {
    const auto path = cache_entry_path(out_dir, hash, mode, L);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        nlohmann::json j;
        in >> j;
        ScanEntry e;
        e.L = j.at("L").get<double>();
        e.raw = j.at("raw").get<double>();
        e.volume_subtracted = j.at("volume_subtracted").get<double>();
        e.wall_ms = j.at("wall_ms").get<double>();
        e.clip_excursion = j.value("clip_excursion", 0.0);
        e.matrix_size = j.at("matrix_size").get<std::size_t>();
        e.ok = true;
        return e;
    } catch (const std::exception&) {
        return std::nullopt;  // stale or corrupt cache entry: recompute
    }
}

inline void store_cached_entry(const std::filesystem::path& out_dir, const std::string& hash,
                               const std::string& mode, const ScanEntry& e) {
    if (!e.ok) return;
    nlohmann::json j;
    j["L"] = e.L;
    j["raw"] = e.raw;
    j["volume_subtracted"] = e.volume_subtracted;
    j["wall_ms"] = e.wall_ms;
    j["clip_excursion"] = e.clip_excursion;
    j["matrix_size"] = e.matrix_size;
    const auto path = cache_entry_path(out_dir, hash, mode, e.L);
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

}  // namespace arealaw
