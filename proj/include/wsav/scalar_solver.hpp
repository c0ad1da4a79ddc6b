#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>

#include "wsav/errors.hpp"
#include "wsav/potential.hpp"

namespace wsav {

enum class Scheme { BE, CN };

/// Exact degree-4 polynomial form of the scalar update equation, available
/// whenever p + r*q stays inside the untruncated zone [-delta, delta] at
/// every grid point for all |r| <= valid_radius. Within that radius the
/// polynomial reproduces h(r, lambda) to roundoff, so root finding can run
/// on field moments instead of full-grid sweeps.
///
/// h(r, lambda) = lambda*u(r) + v(r); coefficients are stored lowest first.
struct QuarticSpecialization {
    std::array<double, 5> u{};
    std::array<double, 5> v{};
    double valid_radius = 0.0;

    std::array<double, 5> coeffs(double lambda) const {
        std::array<double, 5> c;
        for (int k = 0; k < 5; ++k) c[k] = lambda * u[k] + v[k];
        return c;
    }
};

/// Data of the nonlinear scalar equation h(r, lambda) = 0 for one time step.
/// For the backward-Euler scheme:
///   h = (2*lambda - A)*r^2 - (2*r_prev*lambda + B)*r
///       + (1 - lambda)*(E_N[p + r*q] - EN_prev),
/// and for Crank-Nicolson:
///   h = lambda*(r + r_prev)*(r - r_prev) - (r + r_prev)/2*(A*r + B)
///       + (1 - lambda)*(E_N[p + r*q] - EN_prev),
/// where A = (H, q)/sqrt_ec and B = (H, p - phi_prev)/sqrt_ec. A is always
/// <= 0, which makes the r^2 coefficient positive for every lambda > 0.
struct ScalarEquation {
    Scheme scheme = Scheme::BE;
    double r_prev = 0.0;
    double sqrt_ec = 0.0; // sqrt(E_N + C) at the explicit reference state
    double A = 0.0;
    double B = 0.0;
    double en_prev = 0.0; // E_N at the previous state

    /// r -> (E_N[p + r*q], d/dr of the same). Immutable after construction.
    std::function<std::pair<double, double>(double)> line_energy_both;

    std::optional<QuarticSpecialization> quartic;

    double line_energy(double r) const { return line_energy_both(r).first; }
    double line_energy_deriv(double r) const { return line_energy_both(r).second; }

    EquationDiagnostics diagnostics() const {
        return EquationDiagnostics{r_prev, sqrt_ec, A, B, en_prev};
    }
};

enum class RootStatus { Solved, Unsolvable };
enum class RootMethod { Newton, Bracket, ClosedForm, Quartic };

struct RootResult {
    RootStatus status = RootStatus::Unsolvable;
    double r = 0.0;
    int iterations = 0;
    RootMethod method = RootMethod::Newton;
};

struct RootOptions {
    /// Residual tolerance, scaled at solve time by max(1, |en_prev|).
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
    /// Sign-change scan resolution over [-R, R] used when Newton fails.
    int bracket_samples = 256;
    /// R = bracket_radius_factor * max(|r_prev|, sqrt_ec).
    double bracket_radius_factor = 4.0;
};

/// Assembles the backward-Euler scalar equation from the already-solved
/// propagator fields p and q. Computes the inner-product coefficients, the
/// line-energy evaluator, and (when the fields permit) the quartic form.
ScalarEquation build_equation_be(const RealField& phi_n, double r_n, const RealField& p,
                                 const RealField& q, const SpectralOperators& ops,
                                 const PotentialParams& pot);

/// Crank-Nicolson analogue; the inner products use H evaluated at the
/// half-step predictor phi_star and sqrt_ec = sqrt(E_N[phi_star] + C),
/// while en_prev keeps referencing phi_n.
ScalarEquation build_equation_cn(const RealField& phi_n, double r_n, const RealField& p_star,
                                 const RealField& q_star, const RealField& phi_star,
                                 const SpectralOperators& ops, const PotentialParams& pot);

/// h(r, lambda) through the field-backed line-energy evaluator.
double eval_h(const ScalarEquation& eq, double r, double lambda);
/// dh/dr at (r, lambda).
double eval_h_deriv(const ScalarEquation& eq, double r, double lambda);

/// Degree-4 coefficients of h(., lambda), lowest first, when the equation is
/// backward-Euler and the untruncated-zone condition covers the bracket
/// range implied by opts. Empty otherwise.
std::optional<std::array<double, 5>> quartic_coefficients(const ScalarEquation& eq, double lambda,
                                                          const RootOptions& opts = {});

/// Newton from the initial guess sqrt_ec; on failure a dense sign-change
/// scan over [-R, R] followed by bisection. Among scan roots the one closest
/// to sqrt_ec wins, and the trivial root r = 0 is rejected whenever a
/// nonzero root exists. Unsolvable is a status, not an error.
RootResult solve_r(const ScalarEquation& eq, double lambda, const RootOptions& opts = {});

/// Minimum admissible weight: returns (0, root) when the equation solves at
/// lambda = 0, otherwise bisects on [0, 1] down to tol_lambda keeping the
/// invariant that the returned lambda admits a root while the matching lower
/// probe does not. Raises UnsolvableStepError if even lambda = 1 fails.
std::pair<double, RootResult> find_lambda_min(const ScalarEquation& eq, double tol_lambda,
                                              const RootOptions& opts = {});

/// Explicit lambda = 1 update: r = (2*r_prev + B)/(2 - A). The denominator
/// is >= 2 because A <= 0, so this path never fails.
double closed_form_root_lambda1(const ScalarEquation& eq);

} // namespace wsav
