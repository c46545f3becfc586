#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/quadrature.hpp"

namespace arealaw {

/// Entropy-like test function h with its Hoelder data: near each x in
/// singular_set the derivatives obey |d^k [h - h(x)]| <= C |t - x|^(gamma - k)
/// for k = 0, 1, 2. h must be continuous with h(0) = 0.
///
/// eval_near_one, when set, evaluates u -> h(1 - u) without forming 1 - u:
/// quadratures that probe the t = 1 endpoint lose the distance to 1 once
/// 1 - u rounds to 1, so a stable near-one form is needed for full accuracy
/// there (the Renyi family supplies it through its t <-> 1-t symmetry).
struct TestFunction {
    std::function<double(double)> eval;
    std::function<double(double)> eval_near_one;  // optional: u -> h(1 - u)
    double hoelder_exponent = 0.5;                // gamma in (0, 1)
    std::vector<double> singular_set;             // finite set X
    std::string label;

    double operator()(double t) const { return eval(t); }
    double at_one() const { return eval(1.0); }
    double at_one_minus(double u) const { return eval_near_one ? eval_near_one(u) : eval(1.0 - u); }
};

/// Renyi entropy function
///   h_alpha(t) = log(t^alpha + (1-t)^alpha) / (1 - alpha)   on [0, 1],
/// zero outside, with the alpha -> 1 von Neumann limit
///   h_1(t) = -t log t - (1-t) log(1-t)
/// dispatched for |alpha - 1| <= 1e-12 to avoid the 1/(1-alpha) cancellation.
inline double renyi_h(double alpha, double t) {
    if (alpha <= 0.0) throw Error("renyi_h: alpha must be positive");
    if (t <= 0.0 || t >= 1.0) return 0.0;
    if (std::abs(alpha - 1.0) <= 1e-12) {
        return -t * std::log(t) - (1.0 - t) * std::log(1.0 - t);  // 0 log 0 := 0 via the range guard
    }
    return std::log(std::pow(t, alpha) + std::pow(1.0 - t, alpha)) / (1.0 - alpha);
}

inline TestFunction renyi_entropy(double alpha) {
    if (alpha <= 0.0) throw Error("renyi_entropy: alpha must be positive");
    TestFunction h;
    h.eval = [alpha](double t) { return renyi_h(alpha, t); };
    h.eval_near_one = [alpha](double u) { return renyi_h(alpha, u); };  // h(1-u) = h(u)
    h.hoelder_exponent = std::min(alpha, 0.95);
    h.singular_set = {0.0, 1.0};
    h.label = (std::abs(alpha - 1.0) <= 1e-12) ? "vonNeumann" : ("renyi" + std::to_string(alpha));
    return h;
}

/// Piecewise-linear test function from (t, h) samples; zero outside the
/// sampled range. Intended for user-supplied tables.
inline TestFunction tabulated_test_function(std::vector<std::pair<double, double>> samples,
                                            double gamma = 0.5) {
    if (samples.size() < 2) throw Error("tabulated_test_function: need at least 2 samples");
    std::sort(samples.begin(), samples.end());
    TestFunction h;
    h.eval = [s = std::move(samples)](double t) -> double {
        if (t <= s.front().first || t >= s.back().first) {
            // exact hits on the range ends still count
            if (t == s.front().first) return s.front().second;
            if (t == s.back().first) return s.back().second;
            return 0.0;
        }
        auto it = std::upper_bound(s.begin(), s.end(), std::make_pair(t, 0.0));
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    };
    h.hoelder_exponent = gamma;
    h.singular_set = {0.0, 1.0};
    h.label = "table";
    return h;
}

/// The endpoint-singular entropy integral
///   I(h) = int_0^1 (h(t) - h(1) t) / (t (1-t)) dt.
/// Both endpoints are regularised by the substitutions t = s^2 and 1-t = s^2,
/// after which the integrand is Hoelder-regular and dyadic GL panels converge.
/// For the Renyi family, I(h_alpha) = pi^2 (1+alpha) / (6 alpha).
inline double entropy_integral(const TestFunction& h, double tol = 1e-10) {
    const double h1 = h.at_one();
    const double upper = 1.0 / std::sqrt(2.0);
    const auto left = [&](double s) {
        const double t = s * s;
        return 2.0 * (h(t) - h1 * t) / (s * (1.0 - t));
    };
    const auto right = [&](double s) {
        const double u = s * s;  // u = 1 - t, kept away from the rounding cliff at t = 1
        return 2.0 * (h.at_one_minus(u) - h1 * (1.0 - u)) / (s * (1.0 - u));
    };
    const double a = integrate_endpoint_singular(left, upper, 0.5 * tol);
    const double b = integrate_endpoint_singular(right, upper, 0.5 * tol);
    return a + b;
}

struct AssumptionEntry {
    double point = 0.0;          // singular point probed
    int derivative = 0;          // k in {0, 1, 2}
    double measured_exponent = 0.0;
    double constant = 0.0;       // best C over the probed scales
    bool ok = true;
};

struct AssumptionReport {
    std::vector<AssumptionEntry> entries;
    double radius = 0.0;  // largest probe distance used
    bool passed = true;
};

/// Numerical spot-check of the Hoelder bounds at the singular set: probes
/// geometric distances radius * 2^-i on both sides, estimates derivatives by
/// central differences and the decay exponent by a log-log fit over the
/// smallest probed scales (logarithmic factors fade there). Flags a violation
/// when the measured exponent falls below gamma - k by more than a small
/// slack. Diagnostic only; the choice of radius is reported, not canonical.
inline AssumptionReport assumption_check(const TestFunction& h, int samples = 16,
                                         double radius = 0.25) {
    AssumptionReport report;
    report.radius = radius;
    const double gamma = h.hoelder_exponent;
    constexpr double kSlack = 0.05;

    for (double x0 : h.singular_set) {
        const double base = h(x0);
        for (int k = 0; k <= 2; ++k) {
            std::vector<double> logd, logg;
            double constant = 0.0;
            for (int i = 0; i < samples; ++i) {
                const double delta = radius * std::pow(2.0, -i);
                double magnitude = 0.0;
                for (double side : {-1.0, 1.0}) {
                    const double x = x0 + side * delta;
                    double value = 0.0;
                    if (k == 0) {
                        value = h(x) - base;
                    } else {
                        const double e = delta / 16.0;
                        if (k == 1)
                            value = (h(x + e) - h(x - e)) / (2.0 * e);
                        else
                            value = (h(x + e) - 2.0 * h(x) + h(x - e)) / (e * e);
                    }
                    magnitude = std::max(magnitude, std::abs(value));
                }
                if (magnitude > 1e-13) {
                    logd.push_back(std::log(delta));
                    logg.push_back(std::log(magnitude));
                    constant = std::max(constant, magnitude / std::pow(delta, gamma - k));
                }
            }
            AssumptionEntry entry;
            entry.point = x0;
            entry.derivative = k;
            entry.constant = constant;
            if (logd.size() >= 3) {
                // least-squares slope of log|g| vs log(delta) on the deepest
                // half of the sweep
                const std::size_t first = logd.size() / 2;
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t i = first; i < logd.size(); ++i) {
                    sx += logd[i];
                    sy += logg[i];
                    sxx += logd[i] * logd[i];
                    sxy += logd[i] * logg[i];
                }
                const double n = static_cast<double>(logd.size() - first);
                entry.measured_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                entry.ok = entry.measured_exponent >= gamma - k - kSlack;
            } else {
                // function vanishes identically near the point
                entry.measured_exponent = std::numeric_limits<double>::infinity();
                entry.ok = true;
            }
            report.passed = report.passed && entry.ok;
            report.entries.push_back(entry);
        }
    }
    return report;
}

}  // namespace arealaw
