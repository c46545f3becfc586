#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "arealaw/common.hpp"

namespace arealaw {

using Complex = std::complex<double>;
using SpinorMatrix = Eigen::MatrixXcd;

/// Physical parameters of the free Dirac Hamiltonian
///   D = -i sum_k alpha_k d_k + m beta
/// together with the Fermi energy E_F and ultraviolet cut-off width b of the
/// smoothed Fermi sea. The spinor dimension is n_d = 2^floor((d+1)/2).
struct DiracParams {
    int d = 1;        // space dimension
    double m = 0.0;   // mass, >= 0
    double E_F = 0.0; // Fermi energy
    double b = 0.0;   // cut-off parameter, >= 0

    void validate() const {
        if (d < 1) throw Error("DiracParams: dimension must be >= 1");
        if (d > 8) throw Error("DiracParams: dimensions above 8 are unsupported");
        if (m < 0.0) throw Error("DiracParams: mass must be >= 0");
        if (b < 0.0) throw Error("DiracParams: cut-off b must be >= 0");
    }

    int spinor_dim() const { return 1 << ((d + 1) / 2); }

    double energy(const Eigen::VectorXd& xi) const { return std::sqrt(m * m + xi.squaredNorm()); }
    double energy_radial(double rho) const { return std::sqrt(m * m + rho * rho); }
};

struct DiracMatrices {
    std::vector<SpinorMatrix> alpha;  // d Hermitian involutions
    SpinorMatrix beta;                // diag(1, -1) block form
};

namespace detail {

/// Off-diagonal sigma blocks of size n_d/2 obeying
///   sigma_j sigma_k^* + sigma_k sigma_j^* = 2 delta_jk,
///   sigma_j^* sigma_k + sigma_k^* sigma_j = 2 delta_jk.
/// Seeds: sigma_1 = (1) and sigma_2 = (i); odd dimensions double the block
/// size by promoting the previous (alpha_1..alpha_d, beta) set to sigmas.
inline std::vector<SpinorMatrix> sigma_set(int d) {
    if (d == 1) {
        return {SpinorMatrix::Identity(1, 1)};
    }
    if (d % 2 == 0) {
        std::vector<SpinorMatrix> s = sigma_set(d - 1);
        const Eigen::Index n = s.front().rows();
        s.push_back(Complex(0.0, 1.0) * SpinorMatrix::Identity(n, n));
        return s;
    }
    const std::vector<SpinorMatrix> prev = sigma_set(d - 1);
    const Eigen::Index n = prev.front().rows();
    std::vector<SpinorMatrix> s;
    s.reserve(static_cast<std::size_t>(d));
    for (const SpinorMatrix& p : prev) {
        SpinorMatrix t = SpinorMatrix::Zero(2 * n, 2 * n);
        t.topRightCorner(n, n) = p;
        t.bottomLeftCorner(n, n) = p.adjoint();
        s.push_back(std::move(t));
    }
    SpinorMatrix last = SpinorMatrix::Zero(2 * n, 2 * n);
    last.topLeftCorner(n, n) = SpinorMatrix::Identity(n, n);
    last.bottomRightCorner(n, n) = -SpinorMatrix::Identity(n, n);
    s.push_back(std::move(last));
    return s;
}

}  // namespace detail

/// Dirac matrices alpha_1..alpha_d, beta in the block representation
///   alpha_j = [[0, sigma_j], [sigma_j^*, 0]],  beta = diag(1, -1).
/// All entries are exact (0, +-1, +-i); the Clifford relations hold exactly.
/// The concrete representation is fixed once; only spectral data matters.
inline DiracMatrices dirac_matrices(int d) {
    if (d < 1) throw Error("dirac_matrices: dimension must be >= 1");
    if (d > 8) throw Error("dirac_matrices: dimensions above 8 are unsupported");
    const std::vector<SpinorMatrix> sigma = detail::sigma_set(d);
    const Eigen::Index half = sigma.front().rows();

    DiracMatrices out;
    out.alpha.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        SpinorMatrix a = SpinorMatrix::Zero(2 * half, 2 * half);
        a.topRightCorner(half, half) = sigma[static_cast<std::size_t>(j)];
        a.bottomLeftCorner(half, half) = sigma[static_cast<std::size_t>(j)].adjoint();
        out.alpha.push_back(std::move(a));
    }
    out.beta = SpinorMatrix::Zero(2 * half, 2 * half);
    out.beta.topLeftCorner(half, half) = SpinorMatrix::Identity(half, half);
    out.beta.bottomRightCorner(half, half) = -SpinorMatrix::Identity(half, half);
    return out;
}

/// Momentum-space symbol D(xi) = sum_k alpha_k xi_k + m beta.
/// Hermitian with eigenvalues +-E(xi), each of multiplicity n_d/2.
inline SpinorMatrix symbol_eval(const DiracParams& params, const Eigen::VectorXd& xi,
                                const DiracMatrices& gamma) {
    SpinorMatrix s = params.m * gamma.beta;
    for (int k = 0; k < params.d; ++k) s += xi[k] * gamma.alpha[static_cast<std::size_t>(k)];
    return s;
}

inline SpinorMatrix symbol_eval(const DiracParams& params, const Eigen::VectorXd& xi) {
    return symbol_eval(params, xi, dirac_matrices(params.d));
}

/// a(D(xi)) via the eigenvalue calculus
///   a(D(xi)) = (a+ + a-)/2 * 1 + (a+ - a-)/2 * D(xi)/E(xi),
/// with a+-(xi) = a(+-E(xi)) and the convention D/E(0) := 0 for m = 0.
/// The zero-momentum massless branch is an explicit code path, not a limit.
inline SpinorMatrix apply_function(const std::function<double(double)>& a, const DiracParams& params,
                                   const Eigen::VectorXd& xi, const DiracMatrices& gamma) {
    const int n = params.spinor_dim();
    const double energy = params.energy(xi);
    const double a_plus = a(energy);
    const double a_minus = a(-energy);
    SpinorMatrix out = 0.5 * (a_plus + a_minus) * SpinorMatrix::Identity(n, n);
    if (energy > 0.0)
        out += (0.5 * (a_plus - a_minus) / energy) * symbol_eval(params, xi, gamma);
    return out;
}

inline SpinorMatrix apply_function(const std::function<double(double)>& a, const DiracParams& params,
                                   const Eigen::VectorXd& xi) {
    return apply_function(a, params, xi, dirac_matrices(params.d));
}

}  // namespace arealaw
