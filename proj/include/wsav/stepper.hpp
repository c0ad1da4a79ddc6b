#pragma once

#include <functional>
#include <utility>

#include "wsav/scalar_solver.hpp"

namespace wsav {

/// Evolving pair (phi^n, r^n) plus trajectory bookkeeping.
struct SavState {
    RealField phi;
    double r = 0.0;
    double t = 0.0;
    long step = 0;
};

/// How the weight coefficient is chosen each step.
///  - AdaptiveMin:      lambda = 0 if solvable, else bisection for the
///                      minimum admissible weight.
///  - Fixed:            a prescribed lambda in [0,1]; unsolvable steps fail.
///  - NonlinearEnergy:  lambda = 1 through the explicit closed-form update.
///  - LagrangeStrict:   lambda = 0, failing hard when no root exists.
struct LambdaPolicy {
    enum class Kind { AdaptiveMin, Fixed, NonlinearEnergy, LagrangeStrict };
    Kind kind = Kind::AdaptiveMin;
    double value = 0.5; // Fixed only

    static LambdaPolicy adaptive_min() { return {Kind::AdaptiveMin, 0.0}; }
    static LambdaPolicy fixed(double lambda) {
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw ConfigError("fixed weight lambda must lie in [0,1]");
        return {Kind::Fixed, lambda};
    }
    static LambdaPolicy nonlinear_energy() { return {Kind::NonlinearEnergy, 1.0}; }
    static LambdaPolicy lagrange_strict() { return {Kind::LagrangeStrict, 0.0}; }
};

struct StepParams {
    double tau = 1e-3;
    Scheme scheme = Scheme::BE;
    LambdaPolicy lambda_policy = LambdaPolicy::adaptive_min();
    const SpectralOperators* ops = nullptr; // non-owning
    PotentialParams pot;
    RootOptions root_opts;
    double tol_lambda = 1e-8;
};

/// Per-step provenance: the weight actually used, the accepted root, solver
/// effort, post-step energies and mass, the dissipation estimate
/// tau*(mu, G mu), and the implied multiplier eta = r_new/sqrt(E_N + C).
struct StepReport {
    double lambda_used = 0.0;
    double r_new = 0.0;
    int newton_iters = 0;
    RootMethod method = RootMethod::Newton;
    EnergySplit energy;
    double mass = 0.0;
    double mu_dissipation = 0.0;
    double eta_equiv = 0.0;
};

/// Consistent initialization r^0 = sqrt(E_N[phi0] + C) at t = 0.
SavState init_state(RealField phi0, const PotentialParams& pot, const SpectralOperators& ops);

/// One backward-Euler step of the weighted scheme. Mass is conserved exactly
/// (to roundoff) whenever nu > 0.
std::pair<SavState, StepReport> be_step(const SavState& state, const StepParams& sp);

/// Half-step backward-Euler predictor phi*^{n+1/2} with explicit H(phi^n).
RealField cn_predictor(const SavState& state, const StepParams& sp);

/// One Crank-Nicolson step of the weighted scheme.
std::pair<SavState, StepReport> cn_step(const SavState& state, const StepParams& sp);

using StepRecorder = std::function<void(const SavState&, const StepReport&)>;

/// Applies the configured stepper n_steps times; deterministic for fixed
/// inputs. Step failures propagate as UnsolvableStepError annotated with the
/// global step index.
SavState run(SavState state, const StepParams& sp, long n_steps, const StepRecorder& rec = {});

} // namespace wsav
