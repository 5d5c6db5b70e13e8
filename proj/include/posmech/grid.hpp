#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace posmech {

using Vec2 = std::array<double, 2>;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Periodic spatial grid, 1 or 2 axes. Cell i sits at x0 + i*dx with
// x0 = -extent/2; the domain is [-L/2, L/2) per axis.
struct GridSpec {
    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> points{16, 16};

    static GridSpec make1d(double length, int n) {
        GridSpec g;
        g.dim = 1;
        g.extent = {length, 0.0};
        g.points = {n, 1};
        g.validate();
        return g;
    }
    static GridSpec make2d(double lx, int nx, double ly, int ny) {
        GridSpec g;
        g.dim = 2;
        g.extent = {lx, ly};
        g.points = {nx, ny};
        g.validate();
        return g;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("GridSpec: dim must be 1 or 2");
        for (int a = 0; a < dim; ++a) {
            if (extent[a] <= 0.0) throw std::invalid_argument("GridSpec: extent must be positive");
            if (points[a] < 16) throw std::invalid_argument("GridSpec: need at least 16 points per axis");
            if (!is_pow2(points[a])) throw std::invalid_argument("GridSpec: points per axis must be a power of two");
        }
    }

    int n(int axis) const { return axis < dim ? points[axis] : 1; }
    int size() const { return points[0] * (dim == 2 ? points[1] : 1); }
    double dx(int axis) const { return extent[axis] / points[axis]; }
    double x0(int axis) const { return -0.5 * extent[axis]; }
    double coord(int axis, int i) const { return x0(axis) + i * dx(axis); }
    double cell_volume() const {
        double v = dx(0);
        if (dim == 2) v *= dx(1);
        return v;
    }

    int idx(int ix, int iy = 0) const { return dim == 2 ? ix * points[1] + iy : ix; }
    int wrap(int axis, int i) const {
        int n_ = points[axis];
        i %= n_;
        return i < 0 ? i + n_ : i;
    }
    // Wrap a coordinate into [-L/2, L/2).
    double wrap_coord(int axis, double x) const {
        double L = extent[axis];
        return x - L * std::floor((x - x0(axis)) / L) - 0.5 * L + x0(axis) + 0.5 * L;
    }

    bool operator==(const GridSpec& o) const {
        if (dim != o.dim) return false;
        for (int a = 0; a < dim; ++a)
            if (extent[a] != o.extent[a] || points[a] != o.points[a]) return false;
        return true;
    }
};

// Fourier wavenumber for bin i on a periodic axis (standard FFT ordering).
inline double fft_wavenumber(const GridSpec& g, int axis, int i) {
    int n = g.points[axis];
    int k = i <= n / 2 ? i : i - n;
    if (i == n / 2) k = -n / 2;  // Nyquist convention: use -N/2
    return 2.0 * M_PI * k / g.extent[axis];
}

struct ScalarField {
    GridSpec grid;
    std::vector<double> a;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid(g), a(g.size(), fill) {}
    double& operator()(int ix, int iy = 0) { return a[grid.idx(ix, iy)]; }
    double operator()(int ix, int iy = 0) const { return a[grid.idx(ix, iy)]; }
    bool empty() const { return a.empty(); }
};

struct VectorField {
    GridSpec grid;
    int ncomp = 0;
    std::array<std::vector<double>, 2> c;

    VectorField() = default;
    VectorField(const GridSpec& g, int ncomp_) : grid(g), ncomp(ncomp_) {
        for (int k = 0; k < ncomp; ++k) c[k].assign(g.size(), 0.0);
    }
    bool empty() const { return ncomp == 0; }
};

using MaskField = std::vector<uint8_t>;

// 4th-order central first derivative along `axis`, periodic wrap.
inline double deriv4(const std::vector<double>& f, const GridSpec& g, int axis, int ix, int iy) {
    double h = g.dx(axis);
    auto at = [&](int off) {
        int jx = ix, jy = iy;
        (axis == 0 ? jx : jy) = g.wrap(axis, (axis == 0 ? ix : iy) + off);
        return f[g.idx(jx, jy)];
    };
    return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
}

// 4th-order central second derivative along `axis`, periodic wrap.
inline double deriv4_2nd(const std::vector<double>& f, const GridSpec& g, int axis, int ix, int iy) {
    double h = g.dx(axis);
    auto at = [&](int off) {
        int jx = ix, jy = iy;
        (axis == 0 ? jx : jy) = g.wrap(axis, (axis == 0 ? ix : iy) + off);
        return f[g.idx(jx, jy)];
    };
    return (-at(-2) + 16.0 * at(-1) - 30.0 * at(0) + 16.0 * at(1) - at(2)) / (12.0 * h * h);
}

}  // namespace posmech
