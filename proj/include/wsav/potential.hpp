#pragma once

#include <array>

#include "wsav/grid.hpp"
#include "wsav/spectral.hpp"

namespace wsav {

/// Parameters of the truncated double-well potential
///   F(x)      = (x^2 - 1 - gamma)^2 / 4            on [-delta, delta],
///   F_delta(x) = (a*x + b)*exp(-x) + c              for x > delta,
/// mirrored evenly for x < -delta. The gluing coefficients (a, b, c) make
/// the piecewise function C^2 across +-delta; they are fixed closed forms
/// of (gamma, delta).
struct PotentialParams {
    double gamma = 0.0;
    double delta = 5.0;
    double C = 1.0; // auxiliary-variable shift: keeps sqrt(E_N + C) away from 0
    double a = 0.0, b = 0.0, c = 0.0;

    static PotentialParams make(double gamma, double delta = 5.0, double C = 1.0);
};

/// Closed-form gluing coefficients (a, b, c) for given (gamma, delta).
std::array<double, 3> truncation_coefficients(double gamma, double delta);

/// Truncated potential value at a point.
inline double F_delta(double phi, const PotentialParams& p) {
    const double x = std::abs(phi); // even function: evaluate the right tail
    if (x <= p.delta) {
        const double w = phi * phi - 1.0 - p.gamma;
        return 0.25 * w * w;
    }
    return (p.a * x + p.b) * std::exp(-x) + p.c;
}

/// Exact derivative of the truncated potential:
///   (phi^2 - 1 - gamma)*phi on [-delta, delta],
///   (a - a*phi - b)*exp(-phi) for phi > delta, odd-mirrored below -delta.
inline double dF_delta(double phi, const PotentialParams& p) {
    const double x = std::abs(phi);
    if (x <= p.delta) return (phi * phi - 1.0 - p.gamma) * phi;
    const double tail = (p.a - p.a * x - p.b) * std::exp(-x);
    return phi > 0.0 ? tail : -tail; // odd derivative of an even function
}

/// E_N[f] = integral of F_delta(f).
double nonlinear_energy(const RealField& f, const PotentialParams& p);
/// Pointwise dF_delta (the variational derivative of E_N).
RealField H_field(const RealField& f, const PotentialParams& p);

/// Energy bookkeeping for one state: quadratic part (f, Lf)/2, nonlinear
/// part E_N[f], their sum, and the weighted modified energy
///   quadratic + lambda*(r^2 - C) + (1 - lambda)*E_N[f].
struct EnergySplit {
    double quadratic = 0.0;
    double nonlinear = 0.0;
    double total = 0.0;
    double modified = 0.0;
};

EnergySplit energy_split(const RealField& f, double r, double lambda,
                         const SpectralOperators& ops, const PotentialParams& p);

} // namespace wsav
