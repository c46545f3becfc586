#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/entropy.hpp"
#include "arealaw/region.hpp"
#include "arealaw/spinor.hpp"

namespace arealaw {

/// Parsed run configuration. The file format is flat `key = value` lines,
/// `#` comments; unknown or duplicate keys are rejected so that typos cannot
/// silently change physics parameters.
///
/// Keys:
///   d, m, E_F, b                 Dirac parameters
///   alpha                        Renyi index list (one entry for scans)
///   h_table, h_gamma             tabulated test function (optional)
///   region                       `<name> interval a b [c d ...]` |
///                                `<name> disc cx cy R` |
///                                `<name> polygon x1 y1 x2 y2 ...`   (repeatable)
///   region_prime                 enclosing domain for three-domain scans
///   L_list                       scan scales (>= 3)
///   resolution                   `auto` or nodes per unit length
///   resolution_safety            oversampling factor for auto resolution
///   tolerance                    relative verdict tolerance
///   reference_W                  reference scale for zero-coefficient regimes
///   mode                         `single` | `three-domain`
///   E_F_list, m_list             coefficient-table sweeps (optional)
struct RunConfig {
    DiracParams params;
    std::vector<double> alphas{1.0};
    std::optional<std::string> h_table;
    double h_gamma = 0.5;
    std::vector<std::pair<std::string, Region>> regions;
    std::optional<Region> region_prime;
    std::string region_prime_name;
    std::vector<double> L_list;
    double resolution = 0.0;  // 0 = auto
    double resolution_safety = 2.0;
    double tolerance = 0.12;
    double reference_W = 0.0;
    std::string mode = "single";
    std::vector<double> E_F_list, m_list;
    std::string canonical_text;

    const Region& primary_region() const {
        if (regions.empty()) throw ConfigError("config: no region defined");
        return regions.front().second;
    }

    /// Entropy function of the run (single-alpha scans / selftests).
    TestFunction test_function() const;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': expected a number, got '" + value + "'");
    }
}

inline std::vector<double> parse_numbers(const std::string& key, const std::vector<std::string>& toks) {
    if (toks.empty()) throw ConfigError("config field '" + key + "': expected at least one number");
    std::vector<double> out;
    for (const auto& t : toks) out.push_back(parse_number(key, t));
    return out;
}

inline Region parse_region(const std::string& key, const std::vector<std::string>& toks,
                           std::string& name) {
    if (toks.size() < 2) throw ConfigError("config field '" + key + "': expected `<name> <kind> ...`");
    name = toks[0];
    const std::string& kind = toks[1];
    std::vector<double> nums;
    for (std::size_t i = 2; i < toks.size(); ++i) nums.push_back(parse_number(key, toks[i]));
    try {
        if (kind == "interval") {
            if (nums.size() < 2 || nums.size() % 2 != 0)
                throw ConfigError("config field '" + key + "': interval needs endpoint pairs");
            std::vector<std::pair<double, double>> iv;
            for (std::size_t i = 0; i < nums.size(); i += 2) iv.emplace_back(nums[i], nums[i + 1]);
            return Region::intervals(iv);
        }
        if (kind == "disc") {
            if (nums.size() != 3)
                throw ConfigError("config field '" + key + "': disc needs `cx cy R`");
            return Region::disc(nums[0], nums[1], nums[2]);
        }
        if (kind == "polygon") {
            if (nums.size() < 8 || nums.size() % 2 != 0)
                throw ConfigError("config field '" + key + "': polygon needs >= 4 vertex pairs");
            std::vector<Eigen::Vector2d> vs;
            for (std::size_t i = 0; i < nums.size(); i += 2) vs.emplace_back(nums[i], nums[i + 1]);
            return Region::axis_polygon(vs);
        }
    } catch (const GeometryError& e) {
        throw ConfigError("config field '" + key + "': " + e.what());
    }
    throw ConfigError("config field '" + key + "': unknown region kind '" + kind + "'");
}

}  // namespace detail

inline TestFunction RunConfig::test_function() const {
    if (h_table) {
        std::ifstream in(*h_table);
        if (!in) throw ConfigError("config field 'h_table': cannot open '" + *h_table + "'");
        std::vector<std::pair<double, double>> samples;
        double t, v;
        while (in >> t >> v) samples.emplace_back(t, v);
        return tabulated_test_function(std::move(samples), h_gamma);
    }
    if (alphas.size() != 1)
        throw ConfigError("config field 'alpha': scans need exactly one entropy function");
    return renyi_entropy(alphas.front());
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> seen;
    std::ostringstream canonical;

    bool have_region = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        // re-join around '='
        std::string joined;
        for (const auto& t : toks) joined += t + " ";
        const std::size_t eq = joined.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected `key = value`");
        std::string key;
        for (char c : joined.substr(0, eq))
            if (!std::isspace(static_cast<unsigned char>(c))) key += c;
        const auto values = detail::tokenize(joined.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (values.empty())
            throw ConfigError("config field '" + key + "': missing value");

        canonical << key << " =";
        for (const auto& v : values) canonical << ' ' << v;
        canonical << '\n';

        const bool repeatable = (key == "region");
        if (!repeatable) {
            for (const auto& s : seen)
                if (s == key) throw ConfigError("config field '" + key + "': duplicate key");
            seen.push_back(key);
        }

        if (key == "d") {
            const double v = detail::parse_number(key, values[0]);
            cfg.params.d = static_cast<int>(v);
            if (cfg.params.d != v) throw ConfigError("config field 'd': must be an integer");
        } else if (key == "m") {
            cfg.params.m = detail::parse_number(key, values[0]);
        } else if (key == "E_F") {
            cfg.params.E_F = detail::parse_number(key, values[0]);
        } else if (key == "b") {
            cfg.params.b = detail::parse_number(key, values[0]);
        } else if (key == "alpha") {
            cfg.alphas = detail::parse_numbers(key, values);
            for (double a : cfg.alphas)
                if (!(a > 0.0)) throw ConfigError("config field 'alpha': entries must be positive");
        } else if (key == "h_table") {
            cfg.h_table = values[0];
        } else if (key == "h_gamma") {
            cfg.h_gamma = detail::parse_number(key, values[0]);
            if (!(cfg.h_gamma > 0.0) || cfg.h_gamma >= 1.0)
                throw ConfigError("config field 'h_gamma': must lie in (0, 1)");
        } else if (key == "region") {
            std::string name;
            Region r = detail::parse_region(key, values, name);
            cfg.regions.emplace_back(name, std::move(r));
            have_region = true;
        } else if (key == "region_prime") {
            std::string name;
            cfg.region_prime = detail::parse_region(key, values, name);
            cfg.region_prime_name = name;
        } else if (key == "L_list") {
            cfg.L_list = detail::parse_numbers(key, values);
            for (double L : cfg.L_list)
                if (!(L > 0.0)) throw ConfigError("config field 'L_list': scales must be positive");
            for (std::size_t i = 0; i < cfg.L_list.size(); ++i)
                for (std::size_t j = i + 1; j < cfg.L_list.size(); ++j)
                    if (cfg.L_list[i] == cfg.L_list[j])
                        throw ConfigError("config field 'L_list': scales must be distinct");
        } else if (key == "resolution") {
            if (values[0] == "auto")
                cfg.resolution = 0.0;
            else {
                cfg.resolution = detail::parse_number(key, values[0]);
                if (!(cfg.resolution > 0.0))
                    throw ConfigError("config field 'resolution': must be positive or `auto`");
            }
        } else if (key == "resolution_safety") {
            cfg.resolution_safety = detail::parse_number(key, values[0]);
            if (!(cfg.resolution_safety >= 1.0))
                throw ConfigError("config field 'resolution_safety': must be >= 1");
        } else if (key == "tolerance") {
            cfg.tolerance = detail::parse_number(key, values[0]);
            if (!(cfg.tolerance > 0.0)) throw ConfigError("config field 'tolerance': must be positive");
        } else if (key == "reference_W") {
            cfg.reference_W = detail::parse_number(key, values[0]);
        } else if (key == "mode") {
            if (values[0] != "single" && values[0] != "three-domain")
                throw ConfigError("config field 'mode': expected `single` or `three-domain`");
            cfg.mode = values[0];
        } else if (key == "E_F_list") {
            cfg.E_F_list = detail::parse_numbers(key, values);
        } else if (key == "m_list") {
            cfg.m_list = detail::parse_numbers(key, values);
        } else {
            throw ConfigError("config field '" + key + "': unknown key");
        }
    }

    try {
        cfg.params.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!have_region) throw ConfigError("config: at least one `region` entry is required");
    for (const auto& [name, region] : cfg.regions)
        if (region.dim() != cfg.params.d)
            throw ConfigError("config field 'region': region '" + name + "' dimension mismatch with d");
    if (cfg.region_prime && cfg.region_prime->dim() != cfg.params.d)
        throw ConfigError("config field 'region_prime': dimension mismatch with d");
    cfg.canonical_text = canonical.str();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

/// FNV-1a 64-bit over the canonicalized config text; hex-encoded. Every
/// output row carries this hash for provenance, and the per-L cache is
/// addressed by it.
inline std::string config_hash(const std::string& canonical_text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace arealaw
