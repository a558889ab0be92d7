#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace zk {

/// Real samples u(x_i, y_j) on the truncated collocation grid, x-major.
struct Field2D {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    Field2D() = default;
    Field2D(int nx_, int ny_, double fill = 0.0) : nx(nx_), ny(ny_), v(static_cast<size_t>(nx_) * ny_, fill) {}

    double& at(int i, int j) { return v[static_cast<size_t>(i) * ny + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * ny + j]; }

    bool same_shape(const Field2D& o) const { return nx == o.nx && ny == o.ny; }

    double max_abs() const {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

/// Per-mode axial profiles c_l(x_i), x-major: c.at(i, l) is mode l at node i.
struct ModeField {
    int nx = 0;
    int n_modes = 0;
    std::vector<double> c;

    ModeField() = default;
    ModeField(int nx_, int nm_, double fill = 0.0) : nx(nx_), n_modes(nm_), c(static_cast<size_t>(nx_) * nm_, fill) {}

    double& at(int i, int l) { return c[static_cast<size_t>(i) * n_modes + l]; }
    double at(int i, int l) const { return c[static_cast<size_t>(i) * n_modes + l]; }

    /// Extract mode l as a contiguous axial profile.
    std::vector<double> profile(int l) const {
        std::vector<double> p(nx);
        for (int i = 0; i < nx; ++i) p[i] = at(i, l);
        return p;
    }

    void set_profile(int l, const std::vector<double>& p) {
        assert(static_cast<int>(p.size()) == nx);
        for (int i = 0; i < nx; ++i) at(i, l) = p[i];
    }
};

inline void axpy(Field2D& y, double a, const Field2D& x) {
    assert(y.same_shape(x));
    for (size_t k = 0; k < y.v.size(); ++k) y.v[k] += a * x.v[k];
}

}  // namespace zk
