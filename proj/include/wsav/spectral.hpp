#pragma once

#include <memory>
#include <vector>

#include "wsav/grid.hpp"

namespace wsav {

/// Fourier-multiplier operators for the periodic gradient-flow schemes:
///   -Laplacian symbol |k|^2,
///   mobility G = (-Laplacian)^nu,
///   stiffness L = -eps^2*Laplacian + gamma,
/// plus the backward-Euler and Crank-Nicolson propagator inverses built from
/// them. Wavenumbers follow k_j = 2*pi*m/(hi - lo) with m in the symmetric
/// integer range; only even symbols are used so the Nyquist sign convention
/// is immaterial.
///
/// The zero mode of G is exactly 0 for nu > 0 (mass-conserving flows) and
/// exactly 1 for nu = 0 (identity mobility).
///
/// Thread safety: all apply/solve members are logically const and may be
/// called concurrently; the shared transform workspace is guarded internally.
class SpectralOperators {
public:
    SpectralOperators(Grid grid, double nu, double eps, double gamma);
    ~SpectralOperators();

    SpectralOperators(SpectralOperators&&) noexcept;
    SpectralOperators& operator=(SpectralOperators&&) noexcept;
    SpectralOperators(const SpectralOperators&) = delete;
    SpectralOperators& operator=(const SpectralOperators&) = delete;

    const Grid& grid() const noexcept { return grid_; }
    double nu() const noexcept { return nu_; }
    double eps() const noexcept { return eps_; }
    double gamma() const noexcept { return gamma_; }

    /// Number of stored (real-to-complex) modes.
    std::size_t mode_count() const noexcept { return sym_minus_laplace_.size(); }
    const std::vector<double>& sym_minus_laplace() const noexcept { return sym_minus_laplace_; }
    const std::vector<double>& sym_G() const noexcept { return sym_G_; }
    const std::vector<double>& sym_L() const noexcept { return sym_L_; }

    /// L f = (-eps^2*Laplacian + gamma) f.
    RealField apply_L(const RealField& f) const;
    /// G f = (-Laplacian)^nu f.
    RealField apply_G(const RealField& f) const;
    /// Mixed application G(L(f)) in one transform round trip.
    RealField apply_GL(const RealField& f) const;
    /// (I + tau*G*L)^{-1} rhs; the per-mode denominator is >= 1 for tau > 0.
    RealField solve_be_propagator(double tau, const RealField& rhs) const;
    /// (I + (tau/2)*G*L)^{-1} rhs.
    RealField solve_cn_propagator(double tau, const RealField& rhs) const;
    /// (I - (tau/2)*G*L) f.
    RealField apply_cn_explicit(double tau, const RealField& f) const;

private:
    struct Workspace;

    template <class SymbolFn>
    RealField apply_multiplier(const RealField& f, SymbolFn&& w) const;

    Grid grid_;
    double nu_, eps_, gamma_;
    std::vector<double> sym_minus_laplace_, sym_G_, sym_L_;
    std::unique_ptr<Workspace> ws_;
};

/// Validates parameter ranges (nu in [0,1], eps > 0, gamma >= 0) and builds
/// the full multiplier set for the grid.
SpectralOperators make_operators(const Grid& grid, double nu, double eps, double gamma);

} // namespace wsav
