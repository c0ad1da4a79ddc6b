#include "wsav/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace wsav {

namespace {

// FFTW planner calls are not thread-safe; executions on disjoint plans are.
std::mutex planner_mutex;

struct FftwRealDeleter {
    void operator()(double* p) const { fftw_free(p); }
};
struct FftwComplexDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

} // namespace

struct SpectralOperators::Workspace {
    std::unique_ptr<double, FftwRealDeleter> real;
    std::unique_ptr<fftw_complex, FftwComplexDeleter> cplx;
    fftw_plan fwd = nullptr; // real -> complex
    fftw_plan bwd = nullptr; // complex -> real (unnormalized, destroys input)
    std::mutex mutex;        // guards the shared buffers across callers

    ~Workspace() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

SpectralOperators::SpectralOperators(Grid grid, double nu, double eps, double gamma)
    : grid_(std::move(grid)), nu_(nu), eps_(eps), gamma_(gamma) {
    if (!(nu >= 0.0 && nu <= 1.0)) throw ConfigError("fractional order nu must lie in [0,1]");
    if (!(eps > 0.0)) throw ConfigError("interface width eps must be positive");
    if (!(gamma >= 0.0)) throw ConfigError("stabilizer gamma must be non-negative");

    const int dim = grid_.dim();
    const int n0 = grid_.size(0), n1 = grid_.size(1), n2 = grid_.size(2);
    const int nlast = (dim == 2) ? n1 : n2;
    const int nlast_half = nlast / 2 + 1;

    const std::size_t modes = (dim == 2)
                                  ? static_cast<std::size_t>(n0) * nlast_half
                                  : static_cast<std::size_t>(n0) * n1 * nlast_half;
    sym_minus_laplace_.resize(modes);
    sym_G_.resize(modes);
    sym_L_.resize(modes);

    const double twopi = 2.0 * std::numbers::pi;
    auto wavenumber = [&](int axis, int m) {
        const int n = grid_.size(axis);
        const int ms = (m <= n / 2) ? m : m - n; // symmetric integer range
        return twopi * ms / grid_.length(axis);
    };

    auto fill_mode = [&](std::size_t idx, double k2) {
        sym_minus_laplace_[idx] = k2;
        if (nu_ == 0.0)
            sym_G_[idx] = 1.0;
        else if (k2 == 0.0)
            sym_G_[idx] = 0.0;
        else if (nu_ == 1.0)
            sym_G_[idx] = k2;
        else
            sym_G_[idx] = std::pow(k2, nu_);
        sym_L_[idx] = eps_ * eps_ * k2 + gamma_;
    };

    if (dim == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < n0; ++i) {
            const double k0 = wavenumber(0, i);
            for (int j = 0; j < nlast_half; ++j, ++idx) {
                const double k1 = wavenumber(1, j);
                fill_mode(idx, k0 * k0 + k1 * k1);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n0; ++i) {
            const double k0 = wavenumber(0, i);
            for (int j = 0; j < n1; ++j) {
                const double k1 = wavenumber(1, j);
                for (int k = 0; k < nlast_half; ++k, ++idx) {
                    const double k2w = wavenumber(2, k);
                    fill_mode(idx, k0 * k0 + k1 * k1 + k2w * k2w);
                }
            }
        }
    }

    ws_ = std::make_unique<Workspace>();
    ws_->real.reset(fftw_alloc_real(grid_.cell_count()));
    ws_->cplx.reset(fftw_alloc_complex(modes));
    if (!ws_->real || !ws_->cplx) throw std::bad_alloc();

    std::lock_guard<std::mutex> lock(planner_mutex);
    if (dim == 2) {
        ws_->fwd = fftw_plan_dft_r2c_2d(n0, n1, ws_->real.get(), ws_->cplx.get(), FFTW_ESTIMATE);
        ws_->bwd = fftw_plan_dft_c2r_2d(n0, n1, ws_->cplx.get(), ws_->real.get(), FFTW_ESTIMATE);
    } else {
        ws_->fwd =
            fftw_plan_dft_r2c_3d(n0, n1, n2, ws_->real.get(), ws_->cplx.get(), FFTW_ESTIMATE);
        ws_->bwd =
            fftw_plan_dft_c2r_3d(n0, n1, n2, ws_->cplx.get(), ws_->real.get(), FFTW_ESTIMATE);
    }
    if (!ws_->fwd || !ws_->bwd) throw ConfigError("transform planning failed");
}

SpectralOperators::~SpectralOperators() = default;
SpectralOperators::SpectralOperators(SpectralOperators&&) noexcept = default;
SpectralOperators& SpectralOperators::operator=(SpectralOperators&&) noexcept = default;

template <class SymbolFn>
RealField SpectralOperators::apply_multiplier(const RealField& f, SymbolFn&& w) const {
    if (f.grid() != grid_) throw GridMismatchError("field does not match operator grid");

    RealField out(grid_);
    const std::size_t n = grid_.cell_count();
    const std::size_t modes = mode_count();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::lock_guard<std::mutex> lock(ws_->mutex);
    std::memcpy(ws_->real.get(), f.data(), n * sizeof(double));
    fftw_execute(ws_->fwd);
    fftw_complex* c = ws_->cplx.get();
    for (std::size_t m = 0; m < modes; ++m) {
        const double s = w(m);
        c[m][0] *= s;
        c[m][1] *= s;
    }
    fftw_execute(ws_->bwd);
    const double* r = ws_->real.get();
    for (std::size_t i = 0; i < n; ++i) out[i] = r[i] * inv_n;
    return out;
}

RealField SpectralOperators::apply_L(const RealField& f) const {
    return apply_multiplier(f, [this](std::size_t m) { return sym_L_[m]; });
}

RealField SpectralOperators::apply_G(const RealField& f) const {
    return apply_multiplier(f, [this](std::size_t m) { return sym_G_[m]; });
}

RealField SpectralOperators::apply_GL(const RealField& f) const {
    return apply_multiplier(f, [this](std::size_t m) { return sym_G_[m] * sym_L_[m]; });
}

RealField SpectralOperators::solve_be_propagator(double tau, const RealField& rhs) const {
    if (!(tau > 0.0)) throw ConfigError("time step tau must be positive");
    return apply_multiplier(
        rhs, [this, tau](std::size_t m) { return 1.0 / (1.0 + tau * sym_G_[m] * sym_L_[m]); });
}

RealField SpectralOperators::solve_cn_propagator(double tau, const RealField& rhs) const {
    if (!(tau > 0.0)) throw ConfigError("time step tau must be positive");
    const double half = 0.5 * tau;
    return apply_multiplier(
        rhs, [this, half](std::size_t m) { return 1.0 / (1.0 + half * sym_G_[m] * sym_L_[m]); });
}

RealField SpectralOperators::apply_cn_explicit(double tau, const RealField& f) const {
    if (!(tau > 0.0)) throw ConfigError("time step tau must be positive");
    const double half = 0.5 * tau;
    return apply_multiplier(
        f, [this, half](std::size_t m) { return 1.0 - half * sym_G_[m] * sym_L_[m]; });
}

SpectralOperators make_operators(const Grid& grid, double nu, double eps, double gamma) {
    return SpectralOperators(grid, nu, eps, gamma);
}

} // namespace wsav
