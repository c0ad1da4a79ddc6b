#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wsav/errors.hpp"

namespace wsav {

/// Periodic uniform grid on a box [lo, hi) per axis, 2-D or 3-D.
/// Cell spacing h = (hi - lo)/n; the point i sits at lo + i*h, so the
/// right endpoint is excluded (periodic wrap).
class Grid {
public:
    Grid(int dim, std::array<double, 3> lo, std::array<double, 3> hi, std::array<int, 3> n)
        : dim_(dim), lo_(lo), hi_(hi), n_(n) {
        if (dim != 2 && dim != 3) throw ConfigError("grid dimension must be 2 or 3");
        for (int a = dim; a < 3; ++a) {
            lo_[a] = 0.0;
            hi_[a] = 1.0;
            n_[a] = 1;
        }
        for (int a = 0; a < dim; ++a) {
            if (n_[a] < 4 || n_[a] % 2 != 0)
                throw ConfigError("grid size per axis must be even and >= 4");
            if (!(hi_[a] > lo_[a])) throw ConfigError("grid extent requires hi > lo");
            h_[a] = (hi_[a] - lo_[a]) / n_[a];
        }
        for (int a = dim; a < 3; ++a) h_[a] = 1.0;
    }

    /// n x n square over [lo, hi)^2.
    static Grid square(int n, double lo, double hi) {
        return Grid(2, {lo, lo, 0.0}, {hi, hi, 1.0}, {n, n, 1});
    }
    /// n x n x n cube over [lo, hi)^3.
    static Grid cube(int n, double lo, double hi) {
        return Grid(3, {lo, lo, lo}, {hi, hi, hi}, {n, n, n});
    }

    int dim() const noexcept { return dim_; }
    int size(int axis) const noexcept { return n_[axis]; }
    double lo(int axis) const noexcept { return lo_[axis]; }
    double hi(int axis) const noexcept { return hi_[axis]; }
    double length(int axis) const noexcept { return hi_[axis] - lo_[axis]; }
    double spacing(int axis) const noexcept { return h_[axis]; }
    double coord(int axis, int i) const noexcept { return lo_[axis] + h_[axis] * i; }

    std::size_t cell_count() const noexcept {
        return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    }
    /// Product of spacings: the quadrature weight of one cell.
    double cell_volume() const noexcept {
        double v = 1.0;
        for (int a = 0; a < dim_; ++a) v *= h_[a];
        return v;
    }
    double domain_volume() const noexcept {
        double v = 1.0;
        for (int a = 0; a < dim_; ++a) v *= length(a);
        return v;
    }

    /// Axis-major linear index: axis 0 slowest, last axis contiguous.
    std::size_t index(int i0, int i1, int i2 = 0) const noexcept {
        return (static_cast<std::size_t>(i0) * n_[1] + i1) * n_[2] + i2;
    }

    friend bool operator==(const Grid& x, const Grid& y) noexcept {
        return x.dim_ == y.dim_ && x.n_ == y.n_ && x.lo_ == y.lo_ && x.hi_ == y.hi_;
    }
    friend bool operator!=(const Grid& x, const Grid& y) noexcept { return !(x == y); }

private:
    int dim_;
    std::array<double, 3> lo_{}, hi_{}, h_{};
    std::array<int, 3> n_{};
};

/// Real-valued grid function stored in the grid's axis-major layout.
class RealField {
public:
    explicit RealField(Grid grid, double fill = 0.0)
        : grid_(std::move(grid)), values_(grid_.cell_count(), fill) {}

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Fill from a pointwise function of physical coordinates (x, y[, z]).
    template <class Fn>
    void assign(Fn&& fn) {
        const int n0 = grid_.size(0), n1 = grid_.size(1), n2 = grid_.size(2);
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j)
                for (int k = 0; k < n2; ++k)
                    values_[grid_.index(i, j, k)] =
                        fn(grid_.coord(0, i), grid_.coord(1, j), grid_.coord(2, k));
    }

    RealField& operator+=(const RealField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    RealField& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }
    /// this += s * o
    RealField& axpy(double s, const RealField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
        return *this;
    }

    void require_same_grid(const RealField& o) const {
        if (grid_ != o.grid_) throw GridMismatchError("fields live on different grids");
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// p + s*q as a new field.
inline RealField linear_combination(const RealField& p, double s, const RealField& q) {
    RealField out = p;
    out.axpy(s, q);
    return out;
}

/// Composite trapezoidal quadrature; on a periodic uniform grid this is the
/// plain sum scaled by the cell volume.
inline double integrate(const RealField& f) {
    long double acc = 0.0L;
    for (double v : f.values()) acc += v;
    return static_cast<double>(acc) * f.grid().cell_volume();
}

inline double inner_product(const RealField& f, const RealField& g) {
    f.require_same_grid(g);
    long double acc = 0.0L;
    const double* a = f.data();
    const double* b = g.data();
    for (std::size_t i = 0; i < f.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(acc) * f.grid().cell_volume();
}

inline double norm_l2(const RealField& f) { return std::sqrt(inner_product(f, f)); }

inline double norm_linf(const RealField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace wsav
