#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "arealaw/common.hpp"

namespace arealaw {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights via Newton iteration on P_n. Cached per order.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P'_n(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

template <class F>
double integrate_gl(const F& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

/// Integrates over consecutive panels given by sorted breakpoints.
template <class F>
double integrate_panels(const F& f, const std::vector<double>& breaks, int order) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
        if (breaks[k + 1] > breaks[k]) sum += integrate_gl(f, breaks[k], breaks[k + 1], order);
    return sum;
}

/// Adaptive bisection with an embedded GL16/GL32 error estimate.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double tol, int max_depth = 40) {
    struct Rec {
        const F& f;
        double tol;
        int max_depth;
        double run(double a, double b, double coarse, int depth) const {
            const double fine = integrate_gl(f, a, b, 32);
            if (std::abs(fine - coarse) <= tol || depth >= max_depth) {
                if (depth >= max_depth && std::abs(fine - coarse) > 100 * tol)
                    throw QuadratureError("adaptive quadrature: refinement limit reached");
                return fine;
            }
            const double mid = 0.5 * (a + b);
            return run(a, mid, integrate_gl(f, a, mid, 16), depth + 1) +
                   run(mid, b, integrate_gl(f, mid, b, 16), depth + 1);
        }
    };
    if (b <= a) return 0.0;
    return Rec{f, tol, max_depth}.run(a, b, integrate_gl(f, a, b, 16), 0);
}

/// Integrable endpoint singularity at x = 0: dyadic panels [B 2^-k-1, B 2^-k]
/// until the panel contribution drops below tol. Requires decaying contributions.
template <class F>
double integrate_endpoint_singular(const F& f, double upper, double tol, int max_levels = 64) {
    if (upper <= 0.0) return 0.0;
    double sum = 0.0;
    double hi = upper;
    for (int k = 0; k < max_levels; ++k) {
        const double lo = 0.5 * hi;
        const double part = integrate_gl(f, lo, hi, 24);
        sum += part;
        if (std::abs(part) < 0.25 * tol && k >= 8) return sum;
        hi = lo;
    }
    // Remaining mass below 2^-max_levels * upper must be negligible; probe it.
    const double tail = integrate_gl(f, 0.25 * hi, hi, 24);
    if (std::abs(tail) > tol)
        throw QuadratureError("endpoint-singular quadrature did not converge");
    return sum;
}

/// Panel list for \int f(x) e^{i omega x}-type oscillatory integrands:
/// base breakpoints plus subdivision to >= 20 quadrature points per oscillation
/// (16-point GL per panel, panel width <= 0.8 wavelengths).
inline std::vector<double> oscillatory_breaks(double a, double b, double omega,
                                              const std::vector<double>& kinks) {
    std::vector<double> base{a, b};
    for (double k : kinks)
        if (k > a && k < b) base.push_back(k);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               base.end());

    const double wavelength = (std::abs(omega) > 1e-12)
                                  ? 2.0 * std::numbers::pi / std::abs(omega)
                                  : std::numeric_limits<double>::infinity();
    const double max_width = std::isfinite(wavelength) ? 0.8 * wavelength : (b - a);

    std::vector<double> breaks;
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
        const double lo = base[i], hi = base[i + 1];
        // at least 4 panels per smooth segment: the cut-off transition is
        // C-infinity but steep, and a single high-order panel is not enough
        const int parts = std::max(4, static_cast<int>(std::ceil((hi - lo) / max_width)));
        for (int p = 0; p < parts; ++p) breaks.push_back(lo + (hi - lo) * p / parts);
    }
    breaks.push_back(b);
    return breaks;
}

}  // namespace arealaw
