#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/entropy.hpp"
#include "arealaw/fermi_projection.hpp"
#include "arealaw/quadrature.hpp"
#include "arealaw/region.hpp"
#include "arealaw/spinor.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace arealaw {

/// Real-space kernel of Op_L(a(D)) for a rotation-covariant symbol,
///   K(r) = (L / 2 pi)^d  int e^{i L xi . r} a(D(xi)) dxi,
/// reduced to radial integrals against the spinor basis {1, alpha_k, beta}:
///   d=1:  K(r) = (L/pi) [ Cf 1 + i Sg alpha_1 + Ch beta ],
///         Cf = int f0 cos(th rho), Sg = int g1 sin(th rho), Ch = int h0 cos(th rho),
///   d=2:  K(r) = (L^2/2pi) [ T0 1 + i T1 (rhat . alpha) + Tb beta ],
///         T0 = int f0 J0(k rho) rho, T1 = int g1 J1(k rho) rho, Tb = int h0 J0(k rho) rho,
/// with th = L r, k = L |r|, and the radial profiles
///   f0 = (a+ + a-)/2,  g1 = (a+ - a-)/2 * rho/E,  h0 = (a+ - a-)/2 * m/E.
/// The oscillatory integrals use Gauss-Legendre panels split at the profile
/// kinks and subdivided to >= 20 points per oscillation, so accuracy is
/// uniform in L |r|. K(-r) = K(r)^adjoint by construction (real integrals).
class KernelEvaluator {
  public:
    KernelEvaluator(const DiracParams& params, double L)
        : KernelEvaluator(params, L, fermi_profiles(params)) {}

    KernelEvaluator(const DiracParams& params, double L, SymbolProfiles profiles)
        : params_(params), L_(L), profiles_(std::move(profiles)), gamma_(dirac_matrices(params.d)) {
        params_.validate();
        if (!(L > 0.0)) throw Error("KernelEvaluator: L must be positive");
        if (params.d > 2) throw Error("KernelEvaluator: kernel quadrature implemented for d <= 2");
    }

    double support_radius() const { return profiles_.support_radius; }
    double scale() const { return L_; }
    const DiracParams& params() const { return params_; }

    struct Reduced {
        double t0 = 0.0;  // identity component
        double t1 = 0.0;  // alpha component (times i rhat)
        double tb = 0.0;  // beta component
    };

    /// Radial integrals for |L r| = omega_abs.
    Reduced reduced(double omega_abs) const {
        Reduced out;
        const double rho_max = profiles_.support_radius;
        if (rho_max <= 0.0) return out;
        const std::vector<double> breaks = oscillatory_breaks(0.0, rho_max, omega_abs, profiles_.kinks);
        const int order = 16;
        const GaussRule& rule = gauss_legendre(order);
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
            const double half = 0.5 * (breaks[p + 1] - breaks[p]);
            if (half <= 0.0) continue;
            for (int g = 0; g < order; ++g) {
                const double rho = mid + half * rule.nodes[static_cast<std::size_t>(g)];
                const double w = half * rule.weights[static_cast<std::size_t>(g)];
                const double ap = profiles_.plus(rho);
                const double am = profiles_.minus(rho);
                const double f0 = 0.5 * (ap + am);
                const double diff = 0.5 * (ap - am);
                const double energy = params_.energy_radial(rho);
                const double rho_over_E = (energy > 0.0) ? rho / energy : 0.0;
                const double g1 = diff * rho_over_E;
                const double h0 = (params_.m > 0.0) ? diff * params_.m / energy : 0.0;
                if (params_.d == 1) {
                    const double c = std::cos(omega_abs * rho);
                    const double s = std::sin(omega_abs * rho);
                    out.t0 += w * f0 * c;
                    out.t1 += w * g1 * s;
                    out.tb += w * h0 * c;
                } else {
                    const double j0 = std::cyl_bessel_j(0, omega_abs * rho);
                    const double j1 = std::cyl_bessel_j(1, omega_abs * rho);
                    out.t0 += w * f0 * j0 * rho;
                    out.t1 += w * g1 * j1 * rho;
                    out.tb += w * h0 * j0 * rho;
                }
            }
        }
        return out;
    }

    SpinorMatrix compose(const Reduced& t, const Eigen::VectorXd& r) const {
        const int n = params_.spinor_dim();
        const Complex i_unit(0.0, 1.0);
        if (params_.d == 1) {
            const double sign = (r[0] > 0.0) ? 1.0 : (r[0] < 0.0 ? -1.0 : 0.0);
            SpinorMatrix k = (L_ / std::numbers::pi) *
                             (t.t0 * SpinorMatrix::Identity(n, n) + t.tb * gamma_.beta);
            k += (L_ / std::numbers::pi) * (i_unit * sign * t.t1) * gamma_.alpha[0];
            return k;
        }
        const double norm = r.norm();
        SpinorMatrix k = t.t0 * SpinorMatrix::Identity(n, n) + t.tb * gamma_.beta;
        if (norm > 0.0) {
            for (int j = 0; j < 2; ++j)
                k += (i_unit * t.t1 * (r[j] / norm)) * gamma_.alpha[static_cast<std::size_t>(j)];
        }
        return (L_ * L_ / (2.0 * std::numbers::pi)) * k;
    }

    SpinorMatrix operator()(const Eigen::VectorXd& r) const {
        const double omega = L_ * r.norm();
        return compose(reduced(omega), r);
    }

  private:
    DiracParams params_;
    double L_;
    SymbolProfiles profiles_;
    DiracMatrices gamma_;
};

inline SpinorMatrix kernel_block(const Eigen::VectorXd& r, double L, const DiracParams& params) {
    return KernelEvaluator(params, L)(r);
}

inline SpinorMatrix kernel_block(const Eigen::VectorXd& r, double L, const DiracParams& params,
                                 const SymbolProfiles& profiles) {
    return KernelEvaluator(params, L, profiles)(r);
}

/// Closed-form d=1 massless kernel of the sharp momentum-ball part
/// 1_{|xi| < p_F} (1 + D/E)/2 (jump of the Fermi symbol across the Fermi
/// sphere). Oracle for the quadrature path:
///   K(r) = (1 / 2 pi) [ sin(p_F L r)/r 1 + i (1 - cos(p_F L r))/r alpha_1 ].
inline SpinorMatrix sharp_kernel_1d(double p_F, double L, double r) {
    SpinorMatrix alpha1(2, 2), k(2, 2);
    alpha1 << 0, 1, 1, 0;
    const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
    if (std::abs(r) < 1e-300) {
        return inv2pi * p_F * L * SpinorMatrix::Identity(2, 2);
    }
    const double phase = p_F * L * r;
    k = inv2pi * (std::sin(phase) / r) * SpinorMatrix::Identity(2, 2);
    k += Complex(0.0, 1.0) * inv2pi * ((1.0 - std::cos(phase)) / r) * alpha1;
    return k;
}

/// Sharp momentum-ball profiles (a+ = 1_{rho < p_F}, a- = 0), used with the
/// quadrature kernel path against sharp_kernel_1d.
inline SymbolProfiles sharp_ball_profiles(double p_F) {
    SymbolProfiles s;
    s.plus = [p_F](double rho) { return rho < p_F ? 1.0 : 0.0; };
    s.minus = [](double) { return 0.0; };
    s.kinks = {p_F};
    s.support_radius = p_F;
    return s;
}

// ---------------------------------------------------------------------------
// Spatial grids

/// Quadrature grid over a region. d=1: per-interval uniform nodes with
/// trapezoid weights; d=2: globally anchored lattice of cell centers clipped
/// to the region (weight = cell area). The integer bookkeeping (component /
/// lattice indices) lets assembly reuse kernel values across equal
/// displacements.
struct Grid {
    int dim = 1;
    Eigen::MatrixXd points;   // N x dim
    Eigen::VectorXd weights;  // N
    std::vector<int> component;
    std::vector<long> index_a;  // d=1: node index; d=2: ix
    std::vector<long> index_b;  // d=2: iy
    std::vector<double> comp_origin;
    std::vector<double> comp_delta;
    double lattice_delta = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(points.rows()); }

    double max_spacing() const {
        if (dim == 2) return lattice_delta;
        double m = 0.0;
        for (double d : comp_delta) m = std::max(m, d);
        return m;
    }
};

inline Grid make_grid(const Region& region, double resolution) {
    if (!(resolution > 0.0)) throw Error("make_grid: resolution must be positive");
    Grid grid;
    grid.dim = region.dim();
    if (region.dim() == 1) {
        std::vector<double> xs, ws;
        int comp = 0;
        for (const auto& [a, b] : region.interval_list()) {
            // round up so the realised spacing never exceeds 1/resolution
            const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) * resolution - 1e-9)));
            const double delta = (b - a) / static_cast<double>(n);
            grid.comp_origin.push_back(a);
            grid.comp_delta.push_back(delta);
            for (long i = 0; i <= n; ++i) {
                xs.push_back(a + static_cast<double>(i) * delta);
                ws.push_back(delta * ((i == 0 || i == n) ? 0.5 : 1.0));
                grid.component.push_back(comp);
                grid.index_a.push_back(i);
                grid.index_b.push_back(0);
            }
            ++comp;
        }
        grid.points.resize(static_cast<Eigen::Index>(xs.size()), 1);
        grid.weights.resize(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            grid.points(static_cast<Eigen::Index>(i), 0) = xs[i];
            grid.weights(static_cast<Eigen::Index>(i)) = ws[i];
        }
        return grid;
    }

    const double delta = 1.0 / resolution;
    grid.lattice_delta = delta;
    const auto [lo, hi] = region.bounding_box();
    const long ix0 = static_cast<long>(std::floor(lo.x() / delta)) - 1;
    const long ix1 = static_cast<long>(std::ceil(hi.x() / delta)) + 1;
    const long iy0 = static_cast<long>(std::floor(lo.y() / delta)) - 1;
    const long iy1 = static_cast<long>(std::ceil(hi.y() / delta)) + 1;
    std::vector<double> xs, ys;
    for (long ix = ix0; ix <= ix1; ++ix) {
        for (long iy = iy0; iy <= iy1; ++iy) {
            const double cx = (static_cast<double>(ix) + 0.5) * delta;
            const double cy = (static_cast<double>(iy) + 0.5) * delta;
            if (!region.contains(cx, cy)) continue;
            xs.push_back(cx);
            ys.push_back(cy);
            grid.component.push_back(0);
            grid.index_a.push_back(ix);
            grid.index_b.push_back(iy);
        }
    }
    grid.points.resize(static_cast<Eigen::Index>(xs.size()), 2);
    grid.weights.setConstant(static_cast<Eigen::Index>(xs.size()), delta * delta);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        grid.points(static_cast<Eigen::Index>(i), 0) = xs[i];
        grid.points(static_cast<Eigen::Index>(i), 1) = ys[i];
    }
    return grid;
}

/// Lattice grid over the complement shell {x outside region, dist(x, region)
/// <= radius}; spacing matches make_grid for displacement reuse.
inline Grid make_complement_grid(const Region& region, double radius, double resolution) {
    if (region.dim() == 1) {
        const auto [lo, hi] = region.bounding_box();
        Region box = Region::interval(lo.x() - radius, hi.x() + radius);
        Region shell = Region::difference(box, region);
        Grid grid = make_grid(shell, resolution);
        // drop nodes beyond the requested distance (multi-interval gaps)
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (region.distance_to(Eigen::Vector2d(grid.points(static_cast<Eigen::Index>(i), 0), 0.0)) <=
                radius + 1e-12)
                keep.push_back(i);
        if (keep.size() == grid.size()) return grid;
        Grid out;
        out.dim = 1;
        out.comp_origin = grid.comp_origin;
        out.comp_delta = grid.comp_delta;
        out.points.resize(static_cast<Eigen::Index>(keep.size()), 1);
        out.weights.resize(static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            out.points(static_cast<Eigen::Index>(i), 0) = grid.points(static_cast<Eigen::Index>(keep[i]), 0);
            out.weights(static_cast<Eigen::Index>(i)) = grid.weights(static_cast<Eigen::Index>(keep[i]));
            out.component.push_back(grid.component[keep[i]]);
            out.index_a.push_back(grid.index_a[keep[i]]);
            out.index_b.push_back(grid.index_b[keep[i]]);
        }
        return out;
    }

    const double delta = 1.0 / resolution;
    Grid grid;
    grid.dim = 2;
    grid.lattice_delta = delta;
    const auto [lo, hi] = region.bounding_box();
    const long ix0 = static_cast<long>(std::floor((lo.x() - radius) / delta)) - 1;
    const long ix1 = static_cast<long>(std::ceil((hi.x() + radius) / delta)) + 1;
    const long iy0 = static_cast<long>(std::floor((lo.y() - radius) / delta)) - 1;
    const long iy1 = static_cast<long>(std::ceil((hi.y() + radius) / delta)) + 1;
    std::vector<double> xs, ys;
    for (long ix = ix0; ix <= ix1; ++ix) {
        for (long iy = iy0; iy <= iy1; ++iy) {
            const double cx = (static_cast<double>(ix) + 0.5) * delta;
            const double cy = (static_cast<double>(iy) + 0.5) * delta;
            if (region.contains(cx, cy)) continue;
            const double dist = region.distance_to(Eigen::Vector2d(cx, cy));
            if (dist > radius || dist == 0.0) continue;
            xs.push_back(cx);
            ys.push_back(cy);
            grid.component.push_back(0);
            grid.index_a.push_back(ix);
            grid.index_b.push_back(iy);
        }
    }
    grid.points.resize(static_cast<Eigen::Index>(xs.size()), 2);
    grid.weights.setConstant(static_cast<Eigen::Index>(xs.size()), delta * delta);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        grid.points(static_cast<Eigen::Index>(i), 0) = xs[i];
        grid.points(static_cast<Eigen::Index>(i), 1) = ys[i];
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Kernel tables: evaluate K once per distinct displacement

namespace detail {

/// Displacement-indexed kernel values between two grids. On matching uniform
/// spacings the displacements form one-parameter (d=1, per component pair) or
/// two-parameter (d=2, lattice) families.
class KernelTable {
  public:
    KernelTable(const KernelEvaluator& eval, const Grid& rows, const Grid& cols, int threads)
        : eval_(eval), rows_(rows), cols_(cols), dim_(rows.dim) {
        if (dim_ == 1)
            build_1d(threads);
        else
            build_2d(threads);
    }

    SpinorMatrix block(std::size_t i, std::size_t j) const {
        if (dim_ == 1) {
            const auto& [usable, base] = pair_info_[key(i, j)];
            if (usable) {
                const long off = rows_.index_a[i] - cols_.index_a[j];
                return tables_[static_cast<std::size_t>(base)]
                              [static_cast<std::size_t>(off - offsets_lo_[key(i, j)])];
            }
            Eigen::VectorXd r(1);
            r[0] = rows_.points(static_cast<Eigen::Index>(i), 0) -
                   cols_.points(static_cast<Eigen::Index>(j), 0);
            return eval_(r);
        }
        const long dx = rows_.index_a[i] - cols_.index_a[j];
        const long dy = rows_.index_b[i] - cols_.index_b[j];
        const long ax = std::abs(dx), ay = std::abs(dy);
        const long hi = std::max(ax, ay), lo = std::min(ax, ay);
        const KernelEvaluator::Reduced& t = reduced_.at(pack(hi, lo));
        Eigen::VectorXd r(2);
        r[0] = static_cast<double>(dx) * rows_.lattice_delta;
        r[1] = static_cast<double>(dy) * rows_.lattice_delta;
        return eval_.compose(t, r);
    }

  private:
    std::size_t key(std::size_t i, std::size_t j) const {
        return static_cast<std::size_t>(rows_.component[i]) * cols_.comp_origin.size() +
               static_cast<std::size_t>(cols_.component[j]);
    }

    static long pack(long hi, long lo) { return hi * 100000 + lo; }

    void build_1d(int threads) {
        const std::size_t nr = rows_.comp_origin.size();
        const std::size_t nc = cols_.comp_origin.size();
        pair_info_.resize(nr * nc);
        offsets_lo_.resize(nr * nc);
        tables_.clear();

        // node counts per component
        std::vector<long> rows_max(nr, 0), cols_max(nc, 0);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            rows_max[static_cast<std::size_t>(rows_.component[i])] =
                std::max(rows_max[static_cast<std::size_t>(rows_.component[i])], rows_.index_a[i]);
        for (std::size_t j = 0; j < cols_.size(); ++j)
            cols_max[static_cast<std::size_t>(cols_.component[j])] =
                std::max(cols_max[static_cast<std::size_t>(cols_.component[j])], cols_.index_a[j]);

        struct Job {
            std::size_t table;
            long offset;
            double displacement;
        };
        std::vector<Job> jobs;
        for (std::size_t rc = 0; rc < nr; ++rc) {
            for (std::size_t cc = 0; cc < nc; ++cc) {
                const std::size_t k = rc * nc + cc;
                const double dr = rows_.comp_delta[rc];
                const double dc = cols_.comp_delta[cc];
                if (std::abs(dr - dc) > 1e-13 * std::max(dr, dc)) {
                    pair_info_[k] = {false, 0};  // incompatible spacings: direct evaluation
                    continue;
                }
                const long lo = -cols_max[cc];
                const long hi = rows_max[rc];
                pair_info_[k] = {true, static_cast<long>(tables_.size())};
                offsets_lo_[k] = lo;
                tables_.emplace_back(static_cast<std::size_t>(hi - lo + 1));
                const double base = rows_.comp_origin[rc] - cols_.comp_origin[cc];
                for (long o = lo; o <= hi; ++o)
                    jobs.push_back({tables_.size() - 1, o - lo, base + static_cast<double>(o) * dr});
            }
        }
        parallel_for(jobs.size(), threads, [&](std::size_t j) {
            Eigen::VectorXd r(1);
            r[0] = jobs[j].displacement;
            tables_[jobs[j].table][static_cast<std::size_t>(jobs[j].offset)] = eval_(r);
        });
    }

    void build_2d(int threads) {
        long wx = 0, wy = 0;
        long rx_lo = 0, rx_hi = 0, ry_lo = 0, ry_hi = 0, cx_lo = 0, cx_hi = 0, cy_lo = 0, cy_hi = 0;
        if (rows_.size() == 0 || cols_.size() == 0) return;
        rx_lo = rx_hi = rows_.index_a[0];
        ry_lo = ry_hi = rows_.index_b[0];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            rx_lo = std::min(rx_lo, rows_.index_a[i]);
            rx_hi = std::max(rx_hi, rows_.index_a[i]);
            ry_lo = std::min(ry_lo, rows_.index_b[i]);
            ry_hi = std::max(ry_hi, rows_.index_b[i]);
        }
        cx_lo = cx_hi = cols_.index_a[0];
        cy_lo = cy_hi = cols_.index_b[0];
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            cx_lo = std::min(cx_lo, cols_.index_a[j]);
            cx_hi = std::max(cx_hi, cols_.index_a[j]);
            cy_lo = std::min(cy_lo, cols_.index_b[j]);
            cy_hi = std::max(cy_hi, cols_.index_b[j]);
        }
        wx = std::max(std::abs(rx_hi - cx_lo), std::abs(cx_hi - rx_lo));
        wy = std::max(std::abs(ry_hi - cy_lo), std::abs(cy_hi - ry_lo));

        // reduced integrals depend on |offset| only: fill the sorted quadrant
        std::vector<std::pair<long, long>> keys;
        const long wmax = std::max(wx, wy);
        for (long hi = 0; hi <= wmax; ++hi)
            for (long lo = 0; lo <= std::min(hi, std::min(wx, wy)); ++lo) keys.emplace_back(hi, lo);
        std::vector<KernelEvaluator::Reduced> values(keys.size());
        const double delta = rows_.lattice_delta;
        parallel_for(keys.size(), threads, [&](std::size_t k) {
            const double dist =
                delta * std::hypot(static_cast<double>(keys[k].first), static_cast<double>(keys[k].second));
            values[k] = eval_.reduced(eval_.scale() * dist);
        });
        for (std::size_t k = 0; k < keys.size(); ++k)
            reduced_.emplace(pack(keys[k].first, keys[k].second), values[k]);
    }

    const KernelEvaluator& eval_;
    const Grid& rows_;
    const Grid& cols_;
    int dim_;
    // d=1
    std::vector<std::pair<bool, long>> pair_info_;
    std::vector<long> offsets_lo_;
    std::vector<std::vector<SpinorMatrix>> tables_;
    // d=2
    std::map<long, KernelEvaluator::Reduced> reduced_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Restricted operator assembly

/// Nystrom discretisation of 1_Region Op_L(chi(D)) 1_Region on the grid:
/// M[i,j] = sqrt(w_i w_j) K(x_i - x_j) as n_d x n_d blocks. Hermitian by
/// construction; spectrum approximates [0, 1] up to a discretisation margin
/// that shrinks under grid refinement.
struct RestrictedOperator {
    Eigen::MatrixXcd matrix;
    Grid grid;
    double L = 0.0;
    int spinor_dim = 1;

    double hermiticity_defect() const {
        if (matrix.rows() == 0) return 0.0;
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    }
};

/// Sampling guard: grid spacing delta must obey delta * L * rho_support <= pi.
inline void check_resolution(double max_spacing, double L, double support_radius) {
    const double nyquist = max_spacing * L * support_radius;
    if (nyquist > std::numbers::pi * (1.0 + 1e-9)) {
        throw ResolutionError(
            "grid spacing violates the momentum sampling bound: delta * L * rho = " +
            std::to_string(nyquist) + " > pi; increase the resolution");
    }
}

/// Resolution (nodes per unit length) satisfying the sampling guard at scale
/// L with a safety factor; rounded up to an even integer so that nested
/// half-integer interval endpoints land on a common lattice.
inline double auto_resolution(double L, double support_radius, double safety) {
    const double minimum = L * support_radius / std::numbers::pi;
    return 2.0 * std::ceil(0.5 * safety * minimum + 0.5);
}

inline RestrictedOperator assemble_restricted(const Region& region, double L,
                                              const DiracParams& params, double resolution,
                                              const SymbolProfiles& profiles, int threads = 1) {
    params.validate();
    const Grid grid = make_grid(region, resolution);
    const KernelEvaluator eval(params, L, profiles);
    if (grid.size() > 0) check_resolution(grid.max_spacing(), L, eval.support_radius());

    RestrictedOperator op;
    op.grid = grid;
    op.L = L;
    op.spinor_dim = params.spinor_dim();
    const std::size_t n = grid.size();
    const int nd = op.spinor_dim;
    op.matrix.resize(static_cast<Eigen::Index>(n * static_cast<std::size_t>(nd)),
                     static_cast<Eigen::Index>(n * static_cast<std::size_t>(nd)));
    if (n == 0) return op;

    const detail::KernelTable table(eval, grid, grid, threads);
    std::vector<double> sqrt_w(n);
    for (std::size_t i = 0; i < n; ++i) sqrt_w[i] = std::sqrt(grid.weights(static_cast<Eigen::Index>(i)));

    parallel_for(n, threads, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            const SpinorMatrix k = sqrt_w[i] * sqrt_w[j] * table.block(i, j);
            op.matrix.block(static_cast<Eigen::Index>(i * static_cast<std::size_t>(nd)),
                            static_cast<Eigen::Index>(j * static_cast<std::size_t>(nd)), nd, nd) = k;
            if (j != i)
                op.matrix.block(static_cast<Eigen::Index>(j * static_cast<std::size_t>(nd)),
                                static_cast<Eigen::Index>(i * static_cast<std::size_t>(nd)), nd, nd) =
                    k.adjoint();
        }
    });
    return op;
}

inline RestrictedOperator assemble_restricted(const Region& region, double L,
                                              const DiracParams& params, double resolution,
                                              int threads = 1) {
    return assemble_restricted(region, L, params, resolution, fermi_profiles(params), threads);
}

// ---------------------------------------------------------------------------
// Spectrum and entropy traces

/// Eigenvalues of a Hermitian matrix, ascending (LAPACK zheevd).
inline Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return Eigen::VectorXd();
    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, m.data(), n, w.data());
    if (info != 0)
        throw EigensolverError("LAPACKE_zheevd failed with info = " + std::to_string(info));
    return w;
}

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;  // ascending, unclipped
    double clip_excursion = 0.0;  // max distance of the spectrum outside [0, 1]
};

inline SpectrumResult spectrum(const RestrictedOperator& op) {
    SpectrumResult res;
    res.eigenvalues = hermitian_eigenvalues(op.matrix);
    for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
        const double v = res.eigenvalues[i];
        res.clip_excursion = std::max({res.clip_excursion, -v, v - 1.0});
    }
    return res;
}

/// sum_i h(clip(lambda_i)) with eigenvalues clipped to [0, 1]; h(0) = 0 makes
/// the bulk of near-zero eigenvalues harmless.
inline double trace_entropy(const Eigen::VectorXd& eigenvalues, const TestFunction& h) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        sum += h(std::clamp(eigenvalues[i], 0.0, 1.0));
    return sum;
}

// ---------------------------------------------------------------------------
// Off-diagonal Schatten quasi-norm

struct SchattenResult {
    double value = 0.0;        // sum_i s_i^q
    double inner_value = 0.0;  // same with the outer 20% shell removed
    bool truncation_warning = false;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// ||1_Region K 1_{complement shell}||_q^q for 0 < q <= 1 on the grid:
/// singular values via the Gram matrix A A^adjoint. The complement is
/// truncated at truncation_radius; a warning is raised when the outermost
/// shell still contributes more than 1% of the total.
inline SchattenResult offdiag_schatten(const Region& region, double L, const DiracParams& params,
                                       double q, double truncation_radius, double resolution,
                                       const SymbolProfiles& profiles, int threads = 1) {
    if (!(q > 0.0) || q > 1.0) throw Error("offdiag_schatten: q must lie in (0, 1]");
    if (!(truncation_radius > 0.0)) throw Error("offdiag_schatten: truncation radius must be positive");
    const Grid inside = make_grid(region, resolution);
    const Grid outside = make_complement_grid(region, truncation_radius, resolution);
    const KernelEvaluator eval(params, L, profiles);
    if (inside.size() > 0) check_resolution(inside.max_spacing(), L, eval.support_radius());

    SchattenResult res;
    res.rows = inside.size();
    res.cols = outside.size();
    if (inside.size() == 0 || outside.size() == 0) return res;

    const int nd = params.spinor_dim();
    const std::size_t nin = inside.size(), nout = outside.size();
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(nin * static_cast<std::size_t>(nd)),
                       static_cast<Eigen::Index>(nout * static_cast<std::size_t>(nd)));
    const detail::KernelTable table(eval, inside, outside, threads);
    parallel_for(nin, threads, [&](std::size_t i) {
        const double wi = std::sqrt(inside.weights(static_cast<Eigen::Index>(i)));
        for (std::size_t j = 0; j < nout; ++j) {
            const double wj = std::sqrt(outside.weights(static_cast<Eigen::Index>(j)));
            a.block(static_cast<Eigen::Index>(i * static_cast<std::size_t>(nd)),
                    static_cast<Eigen::Index>(j * static_cast<std::size_t>(nd)), nd, nd) =
                wi * wj * table.block(i, j);
        }
    });

    const auto schatten_q = [&](const Eigen::MatrixXcd& gram) {
        Eigen::VectorXd ev = hermitian_eigenvalues(gram);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev[i] > 0.0) sum += std::pow(ev[i], 0.5 * q);
        return sum;
    };

    const Eigen::MatrixXcd gram = a * a.adjoint();
    res.value = schatten_q(gram);

    // contribution of the outermost shell: recompute with the last 20% removed
    std::vector<std::size_t> inner_cols;
    for (std::size_t j = 0; j < nout; ++j) {
        const Eigen::Vector2d p(outside.points(static_cast<Eigen::Index>(j), 0),
                                outside.dim == 2 ? outside.points(static_cast<Eigen::Index>(j), 1) : 0.0);
        if (region.distance_to(p) <= 0.8 * truncation_radius) inner_cols.push_back(j);
    }
    if (inner_cols.size() < nout) {
        Eigen::MatrixXcd shell(a.rows(),
                               static_cast<Eigen::Index>((nout - inner_cols.size()) *
                                                         static_cast<std::size_t>(nd)));
        Eigen::Index c = 0;
        std::vector<bool> is_inner(nout, false);
        for (std::size_t j : inner_cols) is_inner[j] = true;
        for (std::size_t j = 0; j < nout; ++j) {
            if (is_inner[j]) continue;
            shell.middleCols(c, nd) =
                a.middleCols(static_cast<Eigen::Index>(j * static_cast<std::size_t>(nd)), nd);
            c += nd;
        }
        res.inner_value = schatten_q(gram - shell * shell.adjoint());
        res.truncation_warning = std::abs(res.value - res.inner_value) > 0.01 * std::abs(res.value);
    } else {
        res.inner_value = res.value;
    }
    return res;
}

inline SchattenResult offdiag_schatten(const Region& region, double L, const DiracParams& params,
                                       double q, double truncation_radius, double resolution,
                                       int threads = 1) {
    return offdiag_schatten(region, L, params, q, truncation_radius, resolution,
                            fermi_profiles(params), threads);
}

}  // namespace arealaw
