#include "zk/operators.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "zk/errors.hpp"
#include "zk/weights.hpp"

namespace zk {

GridSpec GridSpec::make(double x_max, int nx, double dt, BCCase bc, double L, int n_modes) {
    if (x_max <= 0.0) throw std::invalid_argument("GridSpec: x_max must be positive");
    if (nx < 8) throw std::invalid_argument("GridSpec: need nx >= 8");
    if (dt <= 0.0) throw std::invalid_argument("GridSpec: dt must be positive");
    GridSpec g;
    g.x_max = x_max;
    g.nx = nx;
    g.dt = dt;
    g.L = L;
    g.basis = TransverseBasis::make(bc, L, n_modes);
    return g;
}

std::vector<double> fd_weights(double z, std::span<const double> nodes, int m) {
    // Fornberg's recursion for derivative weights on arbitrary nodes.
    const int n = static_cast<int>(nodes.size());
    if (n < m + 1) throw std::invalid_argument("fd_weights: need at least m+1 nodes");
    std::vector<double> c(static_cast<size_t>(n) * (m + 1), 0.0);
    auto C = [&](int i, int k) -> double& { return c[static_cast<size_t>(i) * (m + 1) + k]; };
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = C(i, m);
    return w;
}

namespace {

// one-sided closure weights for the m-th derivative at offsets 0..m+1,
// evaluated at node `at` (unit spacing)
std::vector<double> closure_weights(int m, int at) {
    std::vector<double> nodes(m + 2);
    for (int i = 0; i < m + 2; ++i) nodes[i] = static_cast<double>(i);
    return fd_weights(static_cast<double>(at), nodes, m);
}

}  // namespace

void diff_x(std::span<const double> in, std::span<double> out, double dx, int m) {
    if (m < 1 || m > 4) throw std::invalid_argument("diff_x: derivative order must be in 1..4");
    const int n = static_cast<int>(in.size());
    const int halfw = (m <= 2) ? 1 : 2;
    const int npts = m + 2;
    if (n < npts) throw std::invalid_argument("diff_x: grid too small for the stencil");
    if (static_cast<int>(out.size()) != n) throw std::invalid_argument("diff_x: output size mismatch");
    const double s = std::pow(dx, -m);

    // interior centered second-order stencils
    switch (m) {
        case 1:
            for (int i = halfw; i < n - halfw; ++i) out[i] = (in[i + 1] - in[i - 1]) / (2.0 * dx);
            break;
        case 2:
            for (int i = halfw; i < n - halfw; ++i)
                out[i] = (in[i + 1] - 2.0 * in[i] + in[i - 1]) / (dx * dx);
            break;
        case 3:
            for (int i = halfw; i < n - halfw; ++i)
                out[i] = (-in[i - 2] + 2.0 * in[i - 1] - 2.0 * in[i + 1] + in[i + 2]) / (2.0 * dx * dx * dx);
            break;
        case 4:
            for (int i = halfw; i < n - halfw; ++i)
                out[i] = (in[i - 2] - 4.0 * in[i - 1] + 6.0 * in[i] - 4.0 * in[i + 1] + in[i + 2]) /
                         (dx * dx * dx * dx);
            break;
    }

    // one-sided second-order closures
    for (int i = 0; i < halfw; ++i) {
        auto w = closure_weights(m, i);
        double acc = 0.0;
        for (int k = 0; k < npts; ++k) acc += w[k] * in[k];
        out[i] = acc * s;
    }
    for (int i = n - halfw; i < n; ++i) {
        auto w = closure_weights(m, i - (n - npts));
        double acc = 0.0;
        for (int k = 0; k < npts; ++k) acc += w[k] * in[n - npts + k];
        out[i] = acc * s;
    }
}

std::vector<double> diff_x(std::span<const double> in, double dx, int m) {
    std::vector<double> out(in.size());
    diff_x(in, out, dx, m);
    return out;
}

Field2D diff_x(const Field2D& u, double dx, int m) {
    Field2D out(u.nx, u.ny);
    std::vector<double> col(u.nx), dcol(u.nx);
    for (int j = 0; j < u.ny; ++j) {
        for (int i = 0; i < u.nx; ++i) col[i] = u.at(i, j);
        diff_x(col, dcol, dx, m);
        for (int i = 0; i < u.nx; ++i) out.at(i, j) = dcol[i];
    }
    return out;
}

BandedMatrix::BandedMatrix(int n) : n_(n), diag_(static_cast<size_t>(5) * n, 0.0) {
    if (n < 1) throw std::invalid_argument("BandedMatrix: size must be positive");
}

void BandedMatrix::set(int i, int j, double v) {
    const int d = j - i;
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || d < -kl || d > ku)
        throw std::out_of_range("BandedMatrix: entry outside the band");
    diag_[static_cast<size_t>(d + kl) * n_ + i] = v;
    factored_ = false;
}

void BandedMatrix::add(int i, int j, double v) { set(i, j, get(i, j) + v); }

double BandedMatrix::get(int i, int j) const {
    const int d = j - i;
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || d < -kl || d > ku) return 0.0;
    return diag_[static_cast<size_t>(d + kl) * n_ + i];
}

void BandedMatrix::clear_row(int i) {
    for (int d = -kl; d <= ku; ++d) {
        const int j = i + d;
        if (j >= 0 && j < n_) diag_[static_cast<size_t>(d + kl) * n_ + i] = 0.0;
    }
    factored_ = false;
}

std::vector<double> BandedMatrix::matvec(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("BandedMatrix::matvec: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        const int jlo = std::max(0, i - kl);
        const int jhi = std::min(n_ - 1, i + ku);
        for (int j = jlo; j <= jhi; ++j) acc += diag_[static_cast<size_t>(j - i + kl) * n_ + i] * x[j];
        y[i] = acc;
    }
    return y;
}

void BandedMatrix::factor() {
    const int ldab = 2 * kl + ku + 1;
    ab_.assign(static_cast<size_t>(ldab) * n_, 0.0);
    // LAPACK band layout (column-major): AB[kl + ku + i - j, j] = A(i, j)
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku);
        const int ihi = std::min(n_ - 1, j + kl);
        for (int i = ilo; i <= ihi; ++i)
            ab_[static_cast<size_t>(j) * ldab + (kl + ku + i - j)] = get(i, j);
    }
    ipiv_.assign(n_, 0);
    const lapack_int info =
        LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku, ab_.data(), ldab, ipiv_.data());
    if (info != 0)
        throw SingularMatrixError("banded factorization failed: zero pivot at index " + std::to_string(info));
    factored_ = true;
}

std::vector<double> BandedMatrix::solve(std::span<const double> rhs) {
    if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("BandedMatrix::solve: size mismatch");
    if (!factored_) factor();
    std::vector<double> x(rhs.begin(), rhs.end());
    const int ldab = 2 * kl + ku + 1;
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, 1, ab_.data(), ldab,
                                           ipiv_.data(), x.data(), n_);
    if (info != 0) throw SingularMatrixError("banded back-substitution failed");
    return x;
}

std::vector<double> banded_solve(BandedMatrix& a, std::span<const double> rhs) { return a.solve(rhs); }

BandedMatrix assemble_mode_operator(double lambda_l, double b, const GridSpec& grid) {
    const int n = grid.nx;
    const double dx = grid.dx();
    const double adv = b - lambda_l;
    BandedMatrix a(n);

    const double d3 = 1.0 / (2.0 * dx * dx * dx);
    const double d1 = 1.0 / (2.0 * dx);

    // row 1: biased third difference (-u0 + 3u1 - 3u2 + u3)/dx^3 keeps the band
    a.set(1, 0, -1.0 / (dx * dx * dx) - adv * d1);
    a.set(1, 1, 3.0 / (dx * dx * dx));
    a.set(1, 2, -3.0 / (dx * dx * dx) + adv * d1);
    a.set(1, 3, 1.0 / (dx * dx * dx));

    for (int i = 2; i <= n - 3; ++i) {
        a.set(i, i - 2, -d3);
        a.set(i, i - 1, 2.0 * d3 - adv * d1);
        a.set(i, i + 1, -2.0 * d3 + adv * d1);
        a.set(i, i + 2, d3);
    }

    // closures: inflow value, outflow value and slope
    a.set(0, 0, 1.0);
    a.set(n - 2, n - 3, 1.0 / (2.0 * dx));
    a.set(n - 2, n - 2, -4.0 / (2.0 * dx));
    a.set(n - 2, n - 1, 3.0 / (2.0 * dx));
    a.set(n - 1, n - 1, 1.0);
    return a;
}

Field2D nonlinear_term(const Field2D& u, const GridSpec& grid) {
    const double dx = grid.dx();
    Field2D usq(u.nx, u.ny);
    for (size_t k = 0; k < u.v.size(); ++k) usq.v[k] = u.v[k] * u.v[k];
    Field2D ux = diff_x(u, dx, 1);
    Field2D usqx = diff_x(usq, dx, 1);
    Field2D out(u.nx, u.ny);
    for (size_t k = 0; k < u.v.size(); ++k) out.v[k] = (usqx.v[k] + u.v[k] * ux.v[k]) / 3.0;

    if (grid.basis.bc() == BCCase::Periodic) {
        // 2/3-rule dealiasing of the quadratic product
        ModeField m = grid.basis.to_modes(out);
        const int k_max = grid.n_modes() / 2;
        const double cutoff = 2.0 * k_max / 3.0;
        for (int l = 1; l < grid.n_modes(); ++l) {
            const int k = (l + 1) / 2;
            if (k > cutoff)
                for (int i = 0; i < m.nx; ++i) m.at(i, l) = 0.0;
        }
        out = grid.basis.from_modes(m);
    }
    return out;
}

std::vector<double> sponge_profile(const GridSpec& grid, double x_s, double peak) {
    if (!(x_s > 0.0) || !(x_s < grid.x_max))
        throw std::invalid_argument("sponge_profile: need 0 < x_s < x_max");
    std::vector<double> s(grid.nx);
    const double ramp = grid.x_max - x_s;
    for (int i = 0; i < grid.nx; ++i) s[i] = peak * cutoff_eta((grid.x(i) - x_s) / ramp);
    return s;
}

}  // namespace zk
