#pragma once

#include <stdexcept>
#include <string>

namespace wsav {

/// Invalid physical or numerical configuration (parameter out of range,
/// inconsistent grid, malformed preset).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Two fields (or a field and an operator set) live on different grids.
class GridMismatchError : public std::invalid_argument {
public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// File I/O failure, annotated with the offending path.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + " [" + path + "]"), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Snapshot of the scalar-equation data attached to solver failures so a
/// failed step can be reported and post-mortemed without the full fields.
struct EquationDiagnostics {
    double r_prev = 0.0;
    double sqrt_ec = 0.0;
    double a_coeff = 0.0;
    double b_coeff = 0.0;
    double en_prev = 0.0;
};

/// A time step could not be completed because the scalar update equation has
/// no root under the requested weight policy. First-class outcome: the
/// strict multiplier policy uses this to demonstrate unsolvability.
class UnsolvableStepError : public std::runtime_error {
public:
    UnsolvableStepError(long step, double t, double lambda, EquationDiagnostics diag)
        : std::runtime_error("scalar update equation unsolvable at step " +
                             std::to_string(step) + " (t=" + std::to_string(t) +
                             ", lambda=" + std::to_string(lambda) + ")"),
          step_(step), t_(t), lambda_(lambda), diag_(diag) {}

    long step() const noexcept { return step_; }
    double t() const noexcept { return t_; }
    double lambda() const noexcept { return lambda_; }
    const EquationDiagnostics& diagnostics() const noexcept { return diag_; }

private:
    long step_;
    double t_;
    double lambda_;
    EquationDiagnostics diag_;
};

} // namespace wsav
