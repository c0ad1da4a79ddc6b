#include "wsav/scalar_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace wsav {

namespace {

// Quartic and its derivative in one Horner sweep; coefficients lowest first.
std::pair<double, double> poly_eval(const std::array<double, 5>& c, double r) {
    double f = c[4];
    double df = 0.0;
    for (int k = 3; k >= 0; --k) {
        df = df * r + f;
        f = f * r + c[k];
    }
    return {f, df};
}

// h and dh/dr from an already-evaluated line energy pair.
std::pair<double, double> assemble_h(const ScalarEquation& eq, double r, double lambda,
                                     double line_e, double line_de) {
    const double de_n = line_e - eq.en_prev;
    if (eq.scheme == Scheme::BE) {
        const double quad = 2.0 * lambda - eq.A;
        const double lin = 2.0 * eq.r_prev * lambda + eq.B;
        return {quad * r * r - lin * r + (1.0 - lambda) * de_n,
                2.0 * quad * r - lin + (1.0 - lambda) * line_de};
    }
    const double rs = r + eq.r_prev;
    const double h = lambda * rs * (r - eq.r_prev) - 0.5 * rs * (eq.A * r + eq.B) +
                     (1.0 - lambda) * de_n;
    const double dh = 2.0 * lambda * r - eq.A * r - 0.5 * (eq.B + eq.A * eq.r_prev) +
                      (1.0 - lambda) * line_de;
    return {h, dh};
}

struct NewtonOutcome {
    bool converged = false;
    double root = 0.0;
    int iters = 0;
};

// Residual-criterion Newton; the initial guess counts as iteration zero so a
// point already satisfying the tolerance is accepted as-is (this is what
// resolves the degenerate all-roots case h == 0 to the physical guess).
template <class Eval>
NewtonOutcome newton_solve(Eval&& eval, double x0, double tol, int max_iters, double limit) {
    double x = x0;
    for (int it = 0; it < max_iters; ++it) {
        const auto [f, df] = eval(x);
        if (std::abs(f) <= tol) return {true, x, it};
        if (!std::isfinite(f) || !std::isfinite(df) || std::abs(df) < 1e-300)
            return {false, x, it + 1};
        x -= f / df;
        if (!std::isfinite(x) || std::abs(x) > limit) return {false, x, it + 1};
    }
    return {false, x, max_iters};
}

// Dense sign-change scan over [-radius, radius] with bisection on each
// bracket. Returns unpolished root candidates.
template <class Eval>
std::vector<double> scan_roots(Eval&& eval, double radius, double tol, int samples,
                               int& iter_count) {
    std::vector<double> roots;
    const int n = std::max(samples, 8);

    auto bisect = [&](double a, double fa, double b, double fb) {
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            const double fm = eval(m).first;
            ++iter_count;
            if (std::abs(fm) <= tol) return m;
            if ((fa < 0.0) != (fm < 0.0)) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        (void)fb;
        return 0.5 * (a + b);
    };

    double xp = -radius;
    double fp = eval(xp).first;
    ++iter_count;
    if (std::abs(fp) <= tol) roots.push_back(xp);
    for (int i = 1; i <= n; ++i) {
        const double x = -radius + 2.0 * radius * i / n;
        const double f = eval(x).first;
        ++iter_count;
        if (std::abs(f) <= tol)
            roots.push_back(x);
        else if (std::abs(fp) > tol && (fp < 0.0) != (f < 0.0))
            roots.push_back(bisect(xp, fp, x, f));
        xp = x;
        fp = f;
    }
    return roots;
}

struct LineFields {
    RealField p;
    RealField q;
    PotentialParams pot;
};

std::function<std::pair<double, double>(double)> make_line_eval(
    std::shared_ptr<const LineFields> lf) {
    return [lf = std::move(lf)](double r) {
        const double* p = lf->p.data();
        const double* q = lf->q.data();
        const std::size_t n = lf->p.size();
        long double e = 0.0L, de = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = p[i] + r * q[i];
            e += F_delta(u, lf->pot);
            de += dF_delta(u, lf->pot) * q[i];
        }
        const double vol = lf->p.grid().cell_volume();
        return std::pair<double, double>{static_cast<double>(e) * vol,
                                         static_cast<double>(de) * vol};
    };
}

// When every p_i + r*q_i stays inside [-delta, delta] for |r| up to the
// computed radius, E_N[p + r*q] is exactly the quartic built from the field
// moments below, and h(r, lambda) = lambda*u(r) + v(r).
std::optional<QuarticSpecialization> build_quartic(const RealField& p, const RealField& q,
                                                   const PotentialParams& pot, Scheme scheme,
                                                   double r_prev, double A, double B,
                                                   double en_prev) {
    const std::size_t n = p.size();
    const double* pp = p.data();
    const double* qq = q.data();
    long double m40 = 0, m31 = 0, m22 = 0, m13 = 0, m04 = 0, m20 = 0, m11 = 0, m02 = 0;
    double rmax = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = pp[i], qi = qq[i];
        const double api = std::abs(pi), aqi = std::abs(qi);
        if (api > pot.delta) return std::nullopt;
        if (aqi > 0.0) rmax = std::min(rmax, (pot.delta - api) / aqi);
        const double p2 = pi * pi, q2 = qi * qi;
        m40 += p2 * p2;
        m31 += p2 * (pi * qi);
        m22 += p2 * q2;
        m13 += (pi * qi) * q2;
        m04 += q2 * q2;
        m20 += p2;
        m11 += pi * qi;
        m02 += q2;
    }
    if (!(rmax > 0.0)) return std::nullopt;
    if (std::isinf(rmax)) rmax = std::numeric_limits<double>::max();

    const double vol = p.grid().cell_volume();
    const double M40 = static_cast<double>(m40) * vol, M31 = static_cast<double>(m31) * vol,
                 M22 = static_cast<double>(m22) * vol, M13 = static_cast<double>(m13) * vol,
                 M04 = static_cast<double>(m04) * vol, M20 = static_cast<double>(m20) * vol,
                 M11 = static_cast<double>(m11) * vol, M02 = static_cast<double>(m02) * vol;
    const double s = 1.0 + pot.gamma;
    const double V = p.grid().domain_volume();

    // E_N[p + r*q] = e0 + e1*r + e2*r^2 + e3*r^3 + e4*r^4 in the valid zone.
    const double e0 = 0.25 * M40 - 0.5 * s * M20 + 0.25 * s * s * V;
    const double e1 = M31 - s * M11;
    const double e2 = 1.5 * M22 - 0.5 * s * M02;
    const double e3 = M13;
    const double e4 = 0.25 * M04;
    const double d0 = e0 - en_prev;

    QuarticSpecialization qs;
    qs.valid_radius = rmax;
    if (scheme == Scheme::BE) {
        qs.u = {-d0, -2.0 * r_prev - e1, 2.0 - e2, -e3, -e4};
        qs.v = {d0, e1 - B, e2 - A, e3, e4};
    } else {
        qs.u = {-r_prev * r_prev - d0, -e1, 1.0 - e2, -e3, -e4};
        qs.v = {d0 - 0.5 * B * r_prev, e1 - 0.5 * (B + A * r_prev), e2 - 0.5 * A, e3, e4};
    }
    return qs;
}

ScalarEquation build_equation(Scheme scheme, const RealField& phi_n, double r_n,
                              const RealField& p, const RealField& q, const RealField& h_state,
                              const SpectralOperators& ops, const PotentialParams& pot) {
    phi_n.require_same_grid(p);
    phi_n.require_same_grid(q);
    if (phi_n.grid() != ops.grid())
        throw GridMismatchError("equation fields do not match operator grid");

    const RealField h = H_field(h_state, pot);
    const double en_prev = nonlinear_energy(phi_n, pot);
    const double en_ref = (scheme == Scheme::BE) ? en_prev : nonlinear_energy(h_state, pot);
    const double radicand = en_ref + pot.C;
    if (!(radicand > 0.0)) throw ConfigError("nonlinear energy plus shift must stay positive");
    const double s = std::sqrt(radicand);

    ScalarEquation eq;
    eq.scheme = scheme;
    eq.r_prev = r_n;
    eq.sqrt_ec = s;
    eq.en_prev = en_prev;
    eq.A = inner_product(h, q) / s;
    RealField dp = p;
    dp -= phi_n;
    eq.B = inner_product(h, dp) / s;

    // (H, q) <= 0 analytically: allow only summation roundoff above zero.
    long double gross = 0.0L;
    for (std::size_t i = 0; i < h.size(); ++i)
        gross += std::abs(static_cast<long double>(h[i]) * q[i]);
    const double guard =
        1e-12 * std::max(1.0, static_cast<double>(gross) * h.grid().cell_volume() / s);
    if (eq.A > guard)
        throw std::logic_error("quadratic coupling coefficient came out positive");

    auto lf = std::make_shared<LineFields>(LineFields{p, q, pot});
    eq.line_energy_both = make_line_eval(std::move(lf));
    eq.quartic = build_quartic(p, q, pot, scheme, r_n, eq.A, eq.B, en_prev);
    return eq;
}

} // namespace

ScalarEquation build_equation_be(const RealField& phi_n, double r_n, const RealField& p,
                                 const RealField& q, const SpectralOperators& ops,
                                 const PotentialParams& pot) {
    return build_equation(Scheme::BE, phi_n, r_n, p, q, phi_n, ops, pot);
}

ScalarEquation build_equation_cn(const RealField& phi_n, double r_n, const RealField& p_star,
                                 const RealField& q_star, const RealField& phi_star,
                                 const SpectralOperators& ops, const PotentialParams& pot) {
    return build_equation(Scheme::CN, phi_n, r_n, p_star, q_star, phi_star, ops, pot);
}

double eval_h(const ScalarEquation& eq, double r, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("weight lambda must lie in [0,1]");
    const auto [e, de] = eq.line_energy_both(r);
    return assemble_h(eq, r, lambda, e, de).first;
}

double eval_h_deriv(const ScalarEquation& eq, double r, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("weight lambda must lie in [0,1]");
    const auto [e, de] = eq.line_energy_both(r);
    return assemble_h(eq, r, lambda, e, de).second;
}

std::optional<std::array<double, 5>> quartic_coefficients(const ScalarEquation& eq, double lambda,
                                                          const RootOptions& opts) {
    if (eq.scheme != Scheme::BE || !eq.quartic) return std::nullopt;
    const double radius =
        opts.bracket_radius_factor * std::max(std::abs(eq.r_prev), eq.sqrt_ec);
    if (radius > eq.quartic->valid_radius) return std::nullopt;
    return eq.quartic->coeffs(lambda);
}

double closed_form_root_lambda1(const ScalarEquation& eq) {
    return (2.0 * eq.r_prev + eq.B) / (2.0 - eq.A);
}

RootResult solve_r(const ScalarEquation& eq, double lambda, const RootOptions& opts) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("weight lambda must lie in [0,1]");

    const double tol = opts.newton_tol * std::max(1.0, std::abs(eq.en_prev));
    const double radius =
        opts.bracket_radius_factor * std::max(std::abs(eq.r_prev), eq.sqrt_ec);
    const double limit = 1e6 * std::max(1.0, radius);
    const double trivial_eps = 1e-9 * std::max(1.0, eq.sqrt_ec);
    const bool poly_usable = eq.quartic && radius <= eq.quartic->valid_radius;

    auto field_eval = [&](double r) {
        const auto [e, de] = eq.line_energy_both(r);
        return assemble_h(eq, r, lambda, e, de);
    };

    // One full attempt with a fixed evaluation backend. A std::nullopt return
    // means the polynomial route could not be certified and the field route
    // must be rerun from scratch.
    auto attempt = [&](bool use_poly) -> std::optional<RootResult> {
        std::optional<std::array<double, 5>> pc;
        if (use_poly) pc = eq.quartic->coeffs(lambda);
        auto eval = [&](double r) { return pc ? poly_eval(*pc, r) : field_eval(r); };

        int iters = 0;
        const NewtonOutcome nt = newton_solve(eval, eq.sqrt_ec, tol, opts.max_newton_iters, limit);
        iters += nt.iters;

        std::vector<double> candidates;
        bool from_newton = false;
        if (nt.converged && std::abs(nt.root) > trivial_eps &&
            (!use_poly || std::abs(nt.root) <= eq.quartic->valid_radius)) {
            candidates.push_back(nt.root);
            from_newton = true;
        } else {
            // Newton failed, diverged, or landed on the trivial root: fall
            // back to the dense scan so a nonzero root is not missed.
            candidates = scan_roots(eval, radius, tol, opts.bracket_samples, iters);
            if (nt.converged && std::abs(nt.root) <= radius) candidates.push_back(nt.root);
            for (double& c : candidates) {
                const NewtonOutcome polish = newton_solve(eval, c, tol, 8, limit);
                iters += polish.iters;
                if (polish.converged && std::abs(polish.root) <= radius) c = polish.root;
            }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                         [&](double x, double y) {
                                             return std::abs(x - y) <=
                                                    1e-10 * std::max(1.0, radius);
                                         }),
                             candidates.end());
        }

        // Selection: nonzero roots take precedence; among them the one
        // nearest the physical value sqrt(E_N + C) wins.
        double best = 0.0, best_dist = std::numeric_limits<double>::infinity();
        bool have = false, have_zero = false;
        double zero_root = 0.0;
        for (double c : candidates) {
            if (std::abs(c) <= trivial_eps) {
                have_zero = true;
                zero_root = c;
                continue;
            }
            const double d = std::abs(c - eq.sqrt_ec);
            if (d < best_dist) {
                best = c;
                best_dist = d;
                have = true;
            }
        }
        if (!have && have_zero) {
            best = zero_root;
            have = true;
        }
        if (!have)
            return RootResult{RootStatus::Unsolvable, 0.0, iters,
                              use_poly ? RootMethod::Quartic
                                       : (from_newton ? RootMethod::Newton : RootMethod::Bracket)};

        if (use_poly) {
            // Certify against the field-backed evaluator; the two agree to
            // roundoff inside the validity radius, so a couple of corrector
            // steps suffice. Failure to certify falls back to the field run.
            const NewtonOutcome fin = newton_solve(field_eval, best, tol, 6, limit);
            iters += fin.iters;
            if (!fin.converged) return std::nullopt;
            return RootResult{RootStatus::Solved, fin.root, iters, RootMethod::Quartic};
        }
        return RootResult{RootStatus::Solved, best, iters,
                          from_newton ? RootMethod::Newton : RootMethod::Bracket};
    };

    if (poly_usable) {
        if (auto res = attempt(true)) return *res;
    }
    return *attempt(false);
}

std::pair<double, RootResult> find_lambda_min(const ScalarEquation& eq, double tol_lambda,
                                              const RootOptions& opts) {
    if (!(tol_lambda > 0.0)) throw ConfigError("lambda tolerance must be positive");

    RootResult at_zero = solve_r(eq, 0.0, opts);
    if (at_zero.status == RootStatus::Solved) return {0.0, at_zero};

    double a = 0.0, b = 1.0;
    std::optional<std::pair<double, RootResult>> best;
    while (b - a >= tol_lambda) {
        const double mid = 0.5 * (a + b);
        RootResult rm = solve_r(eq, mid, opts);
        if (rm.status == RootStatus::Solved) {
            b = mid;
            best = {mid, rm};
        } else {
            a = mid;
        }
    }
    if (best) return *best;

    RootResult at_one = solve_r(eq, 1.0, opts);
    if (at_one.status == RootStatus::Solved) return {1.0, at_one};
    throw UnsolvableStepError(-1, 0.0, 1.0, eq.diagnostics());
}

} // namespace wsav
