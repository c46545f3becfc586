#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/spinor.hpp"

namespace arealaw {

/// Canonical C^infinity step: 0 for u <= 0, 1 for u >= 1,
/// psi(u) = f(u) / (f(u) + f(1-u)) with f(u) = exp(-1/u) in between.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double f0 = std::exp(-1.0 / u);
    const double f1 = std::exp(-1.0 / (1.0 - u));
    return f0 / (f0 + f1);
}

/// Monotone cut-off profile for Fermi energy E_F: equals 1 on [-|E_F|, inf)
/// and 0 on (-inf, -|E_F|-1], with the smooth_step transition in between.
/// The transition shape is a fixed artifact constant; only the plateau values
/// are prescribed.
inline double cutoff_phi(double y, double E_F) {
    return smooth_step(y + std::abs(E_F) + 1.0);
}

/// Smoothed Fermi projection profile
///   chi(x) = 1_{x < E_F} * phi(x + b),
/// bounded by [0, 1], compactly supported, sharp at E_F, smooth at the bottom
/// of the shifted Fermi sea.
inline double chi_fermi(double x, double E_F, double b) {
    if (x >= E_F) return 0.0;
    return cutoff_phi(x + b, E_F);
}

struct CutoffFunction {
    double E_F = 0.0;
    double b = 0.0;
    double phi(double y) const { return cutoff_phi(y, E_F); }
    double operator()(double x) const { return chi_fermi(x, E_F, b); }
};

/// Radial scalar data of a rotation-covariant matrix symbol a(D):
/// a(D(xi)) = f0(rho) 1 + g1(rho)/rho * (xi . alpha) + h0(rho) beta with
///   f0 = (a+ + a-)/2,  g1 = (a+ - a-)/2 * rho/E,  h0 = (a+ - a-)/2 * m/E,
/// where a+-(rho) = a(+-E(rho)) and rho = |xi|. Kinks lists the radii where
/// the profiles are non-smooth (jump radii and plateau edges).
struct SymbolProfiles {
    std::function<double(double)> plus;   // a+(rho)
    std::function<double(double)> minus;  // a-(rho)
    std::vector<double> kinks;
    double support_radius = 0.0;
};

/// Momentum support radius of the smoothed Fermi projection symbol:
/// chi(D(xi)) vanishes for E(xi) >= |E_F| + b + 1.
inline double momentum_support_radius(const DiracParams& p) {
    const double top = std::abs(p.E_F) + p.b + 1.0;
    return (top > p.m) ? std::sqrt(top * top - p.m * p.m) : 0.0;
}

/// Radial profiles of chi_{E_F}^{(b)}(D).
inline SymbolProfiles fermi_profiles(const DiracParams& p) {
    p.validate();
    SymbolProfiles s;
    const double E_F = p.E_F, b = p.b, m = p.m;
    s.plus = [=](double rho) { return chi_fermi(std::sqrt(m * m + rho * rho), E_F, b); };
    s.minus = [=](double rho) { return chi_fermi(-std::sqrt(m * m + rho * rho), E_F, b); };
    s.support_radius = momentum_support_radius(p);

    // jump of chi at x = E_F maps to the Fermi sphere when |E_F| > m
    if (std::abs(E_F) > m) s.kinks.push_back(std::sqrt(E_F * E_F - m * m));
    // plateau edge of phi: E = |E_F| + b
    const double plateau = std::abs(E_F) + b;
    if (plateau > m) s.kinks.push_back(std::sqrt(plateau * plateau - m * m));
    std::sort(s.kinks.begin(), s.kinks.end());
    return s;
}

}  // namespace arealaw
