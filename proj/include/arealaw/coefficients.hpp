#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "arealaw/common.hpp"
#include "arealaw/entropy.hpp"
#include "arealaw/fermi_projection.hpp"
#include "arealaw/quadrature.hpp"
#include "arealaw/region.hpp"
#include "arealaw/spinor.hpp"

namespace arealaw {

/// Mutually exclusive, total classification of (E_F, m, d):
///   Enhanced        |E_F| > m          -> L^{d-1} log L term with W != 0
///   GappedAreaLaw   |E_F| <= m != 0    -> W = 0, remainder O(L^{d-1})
///   MasslessZeroD1  E_F = m = 0, d = 1 -> enhanced with the |E_F|>m coefficient
///   MasslessZeroDge2  E_F = m = 0, d>=2 -> W = 0, remainder O(L^{d-1})
enum class Regime { Enhanced, GappedAreaLaw, MasslessZeroD1, MasslessZeroDge2 };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Enhanced: return "enhanced";
        case Regime::GappedAreaLaw: return "gapped-area-law";
        case Regime::MasslessZeroD1: return "massless-zero-d1";
        case Regime::MasslessZeroDge2: return "massless-zero-dge2";
    }
    return "?";
}

inline Regime classify_regime(int d, double E_F, double m) {
    if (std::abs(E_F) > m) return Regime::Enhanced;
    if (m != 0.0) return Regime::GappedAreaLaw;
    return d == 1 ? Regime::MasslessZeroD1 : Regime::MasslessZeroDge2;
}

/// Relativistic Fermi momentum p_F = sqrt(E_F^2 - m^2); defined for
/// |E_F| > m and, as 0, for E_F = m = 0. Undefined inside the spectral gap.
inline double fermi_momentum(double E_F, double m) {
    if (std::abs(E_F) > m) return std::sqrt(E_F * E_F - m * m);
    if (E_F == 0.0 && m == 0.0) return 0.0;
    throw RegimeError("fermi_momentum: |E_F| <= m != 0 has no Fermi surface");
}

/// Volume of the d-ball of given radius.
inline double ball_volume(int d, double radius) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(radius, d);
}

/// Closed form of the geometric factor:
///   Phi = 2 / Gamma((d+1)/2) * (p_F^2 / 4 pi)^{(d-1)/2} * |boundary|.
/// In d=1 the boundary measure is the number of boundary points and Phi is
/// momentum-independent.
inline double geometric_factor_closed_form(int d, double boundary_measure, double p_F) {
    return 2.0 / std::tgamma(0.5 * (d + 1)) *
           std::pow(p_F * p_F / (4.0 * std::numbers::pi), 0.5 * (d - 1)) * boundary_measure;
}

/// Surface-quadrature geometric factor for a d=2 region and a momentum circle
/// of given radius: the circle is integrated with Gauss-Legendre panels split
/// at the |cos| sign changes, the spatial boundary with the region's rule.
inline double geometric_factor_radius(const Region& region, double momentum_radius) {
    if (region.dim() == 1) return 2.0 * region.boundary_measure();
    if (momentum_radius == 0.0) return 0.0;
    double outer = 0.0;
    for (const auto& node : region.boundary_quadrature(256)) {
        const double theta = std::atan2(node.normal.y(), node.normal.x());
        const auto integrand = [&](double u) { return std::abs(std::cos(u - theta)) * momentum_radius; };
        const double inner =
            integrate_gl(integrand, theta - 0.5 * std::numbers::pi, theta + 0.5 * std::numbers::pi, 24) +
            integrate_gl(integrand, theta + 0.5 * std::numbers::pi, theta + 1.5 * std::numbers::pi, 24);
        outer += node.weight * inner;
    }
    return outer / (2.0 * std::numbers::pi);
}

/// Geometric factor of the enhanced area law,
///   Phi(Lambda, E_F, m) = 2 |dLambda|                          (d = 1)
///   Phi = (2 pi)^{1-d} int_{dLambda} int_{dB_{p_F}} |n.n'| dS dS'  (d = 2).
inline double geometric_factor(const Region& region, double E_F, double m) {
    if (region.dim() == 1) return 2.0 * region.boundary_measure();
    return geometric_factor_radius(region, fermi_momentum(E_F, m));  // propagates the gap error
}

struct CoefficientReport {
    Regime regime = Regime::Enhanced;
    double p_F = 0.0;
    double Phi = 0.0;
    double W = 0.0;
    double V = std::numeric_limits<double>::quiet_NaN();  // filled by coefficient_report
};

/// Coefficient of the L^{d-1} log L term,
///   W(h, Lambda, E_F, m) = Phi / (2 pi)^2 * int_0^1 (h(t) - h(1) t)/(t(1-t)) dt
/// in the enhanced regimes; identically zero in the gapped and massless d>=2
/// regimes. Independent of the cut-off b and of any enclosing domain.
inline CoefficientReport enhanced_coefficient(const TestFunction& h, const Region& region,
                                              double E_F, double m) {
    CoefficientReport rep;
    rep.regime = classify_regime(region.dim(), E_F, m);
    const double two_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    switch (rep.regime) {
        case Regime::Enhanced:
        case Regime::MasslessZeroD1:
            rep.p_F = fermi_momentum(E_F, m);
            rep.Phi = geometric_factor(region, E_F, m);
            rep.W = rep.Phi / two_pi_sq * entropy_integral(h);
            break;
        case Regime::GappedAreaLaw:
            rep.p_F = std::numeric_limits<double>::quiet_NaN();
            rep.Phi = std::numeric_limits<double>::quiet_NaN();
            rep.W = 0.0;
            break;
        case Regime::MasslessZeroDge2:
            rep.p_F = 0.0;
            rep.Phi = 0.0;
            rep.W = 0.0;
            break;
    }
    return rep;
}

namespace detail {

/// Radial integral (2 pi)^-d * omega_{d-1} * int f(rho) rho^{d-1} drho over
/// the symbol support, with panels split at the profile kinks.
inline double radial_symbol_integral(const std::function<double(double)>& f, const DiracParams& p,
                                     const SymbolProfiles& profiles, bool adaptive) {
    const double rho_max = profiles.support_radius;
    if (rho_max <= 0.0) return 0.0;
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * p.d) / std::tgamma(0.5 * p.d);
    const auto integrand = [&](double rho) { return f(rho) * std::pow(rho, p.d - 1); };
    std::vector<double> breaks{0.0};
    for (double k : profiles.kinks)
        if (k > 0.0 && k < rho_max) breaks.push_back(k);
    breaks.push_back(rho_max);

    double value = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (adaptive) {
            value += integrate_adaptive(integrand, breaks[i], breaks[i + 1], 1e-12);
        } else {
            value += integrate_gl(integrand, breaks[i], breaks[i + 1], 64);
        }
    }
    return value * sphere / std::pow(2.0 * std::numbers::pi, p.d);
}

}  // namespace detail

/// Volume (Szego leading-order) coefficient of the normalised trace,
///   V = (2 pi)^-d int [ h(chi+(xi)) + h(chi-(xi)) ] dxi,
/// which reduces to the regime-specific forms: for E_F < -m the integral of
/// h(chi-) over the Fermi-ball complement, for E_F > m that value plus
/// 2 |B_{p_F}| h(1) (2 pi)^-d, and for E_F = m = 0 the integral of
/// h(phi(-E + b)). Evaluated by radial quadrature over the compact support.
inline double volume_coefficient(const TestFunction& h, const DiracParams& p, bool adaptive = false) {
    const SymbolProfiles profiles = fermi_profiles(p);
    const auto f = [&](double rho) { return h(profiles.plus(rho)) + h(profiles.minus(rho)); };
    return detail::radial_symbol_integral(f, p, profiles, adaptive);
}

/// V_-: volume coefficient of the smooth negative-branch part alone,
///   (2 pi)^-d int_{Gamma^c} h(phi(-E + b)),
/// the whole coefficient when E_F < -m.
inline double volume_coefficient_minus(const TestFunction& h, const DiracParams& p,
                                       bool adaptive = false) {
    const Regime regime = classify_regime(p.d, p.E_F, p.m);
    if (regime == Regime::GappedAreaLaw)
        throw RegimeError("volume_coefficient_minus: undefined in the gapped regime");
    const SymbolProfiles profiles = fermi_profiles(p);
    const double p_F = fermi_momentum(p.E_F, p.m);
    const auto f = [&](double rho) {
        if (rho < p_F) return 0.0;
        return h(cutoff_phi(-p.energy_radial(rho) + p.b, p.E_F));
    };
    return detail::radial_symbol_integral(f, p, profiles, adaptive);
}

/// V_+ = V_- + 2 |B_{p_F}| h(1) / (2 pi)^d, for E_F > m.
inline double volume_coefficient_plus(const TestFunction& h, const DiracParams& p,
                                      bool adaptive = false) {
    if (!(p.E_F > p.m)) throw RegimeError("volume_coefficient_plus: requires E_F > m");
    const double p_F = fermi_momentum(p.E_F, p.m);
    return volume_coefficient_minus(h, p, adaptive) +
           2.0 * ball_volume(p.d, p_F) * h.at_one() / std::pow(2.0 * std::numbers::pi, p.d);
}

/// V_0(h, b) = (2 pi)^-1 int h(phi(-|xi| + b)) dxi, for E_F = m = 0 in d=1.
inline double volume_coefficient_zero(const TestFunction& h, double b, bool adaptive = false) {
    DiracParams p;
    p.d = 1;
    p.m = 0.0;
    p.E_F = 0.0;
    p.b = b;
    if (classify_regime(p.d, p.E_F, p.m) != Regime::MasslessZeroD1)
        throw RegimeError("volume_coefficient_zero: requires E_F = m = 0, d = 1");
    return volume_coefficient(h, p, adaptive);
}

struct NonrelativisticReport {
    double Phi_rel = 0.0;
    double Phi_nonrel = 0.0;
    double ratio = 1.0;
};

/// Comparison with the quadratic-dispersion geometric factor: replaces p_F by
/// the kinetic Fermi momentum p_c = sqrt(2 m (|E_F| - m)). The ratio tends to
/// 1 linearly in (|E_F| - m)/m.
inline NonrelativisticReport nonrelativistic_limit(const Region& region, double E_F, double m) {
    if (!(m > 0.0) || !(std::abs(E_F) > m))
        throw RegimeError("nonrelativistic_limit: requires m > 0 and |E_F| > m");
    NonrelativisticReport rep;
    rep.Phi_rel = geometric_factor(region, E_F, m);
    const double p_c = std::sqrt(2.0 * m * (std::abs(E_F) - m));
    rep.Phi_nonrel = geometric_factor_radius(region, p_c);
    rep.ratio = rep.Phi_rel / rep.Phi_nonrel;
    return rep;
}

/// Full per-configuration report: regime, p_F, Phi, W and the volume
/// coefficient V (which, unlike W, depends on the cut-off b).
inline CoefficientReport coefficient_report(const TestFunction& h, const Region& region,
                                            const DiracParams& params) {
    CoefficientReport rep = enhanced_coefficient(h, region, params.E_F, params.m);
    rep.V = volume_coefficient(h, params);
    return rep;
}

}  // namespace arealaw
