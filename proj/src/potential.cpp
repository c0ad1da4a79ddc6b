#include "wsav/potential.hpp"

#include <cmath>

namespace wsav {

PotentialParams PotentialParams::make(double gamma, double delta, double C) {
    if (!(gamma >= 0.0 && gamma <= 4.0))
        throw ConfigError("stabilizer gamma must lie in [0,4]");
    if (!(delta > 0.0)) throw ConfigError("truncation threshold delta must be positive");
    if (!(C > 0.0)) throw ConfigError("shift constant C must be positive");
    PotentialParams p;
    p.gamma = gamma;
    p.delta = delta;
    p.C = C;
    const auto abc = truncation_coefficients(gamma, delta);
    p.a = abc[0];
    p.b = abc[1];
    p.c = abc[2];
    return p;
}

std::array<double, 3> truncation_coefficients(double gamma, double delta) {
    if (!(delta > 0.0)) throw ConfigError("truncation threshold delta must be positive");
    const double d = delta, g = gamma;
    const double ed = std::exp(d);
    const double a = -(d * d * d + 3.0 * d * d - (1.0 + g) * d - (1.0 + g)) * ed;
    const double b =
        (d * d * d * d + d * d * d - (4.0 + g) * d * d + (1.0 + g) * d + (1.0 + g)) * ed;
    const double c = 0.25 * d * d * d * d + 2.0 * d * d * d + 0.5 * (5.0 - g) * d * d -
                     2.0 * (1.0 + g) * d + 0.25 * (1.0 + g) * (g - 3.0);
    return {a, b, c};
}

double nonlinear_energy(const RealField& f, const PotentialParams& p) {
    long double acc = 0.0L;
    for (double v : f.values()) acc += F_delta(v, p);
    return static_cast<double>(acc) * f.grid().cell_volume();
}

RealField H_field(const RealField& f, const PotentialParams& p) {
    RealField out(f.grid());
    const double* in = f.data();
    double* o = out.data();
    for (std::size_t i = 0; i < f.size(); ++i) o[i] = dF_delta(in[i], p);
    return out;
}

EnergySplit energy_split(const RealField& f, double r, double lambda,
                         const SpectralOperators& ops, const PotentialParams& p) {
    EnergySplit e;
    e.quadratic = 0.5 * inner_product(f, ops.apply_L(f));
    e.nonlinear = nonlinear_energy(f, p);
    e.total = e.quadratic + e.nonlinear;
    e.modified = e.quadratic + lambda * (r * r - p.C) + (1.0 - lambda) * e.nonlinear;
    return e;
}

} // namespace wsav
