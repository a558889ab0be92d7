#pragma once

#include <span>
#include <vector>

#include "zk/field.hpp"
#include "zk/transverse.hpp"

namespace zk {

/// Truncated half-strip grid: x in [0, X_max] on nx nodes, transverse basis in y.
struct GridSpec {
    double x_max = 1.0;
    int nx = 8;
    double L = 1.0;
    double dt = 1e-2;
    TransverseBasis basis;

    static GridSpec make(double x_max, int nx, double dt, BCCase bc, double L, int n_modes);

    double dx() const { return x_max / (nx - 1); }
    double x(int i) const { return i * dx(); }
    int ny() const { return basis.n_y(); }
    int n_modes() const { return basis.n_modes(); }
};

/// Finite-difference weights for the m-th derivative at point z over the given
/// nodes (Fornberg recursion); used for the one-sided closures.
std::vector<double> fd_weights(double z, std::span<const double> nodes, int m);

/// d^m/dx^m of an axial profile, m in 1..4: second-order centered stencils in
/// the interior, one-sided second-order closures at the ends.
void diff_x(std::span<const double> in, std::span<double> out, double dx, int m);
std::vector<double> diff_x(std::span<const double> in, double dx, int m);

/// Field-level x-derivative (per y-column).
Field2D diff_x(const Field2D& u, double dx, int m);

/// Pentadiagonal matrix (2 sub-, 2 super-diagonals) with LU solves under
/// partial pivoting.
class BandedMatrix {
public:
    static constexpr int kl = 2;
    static constexpr int ku = 2;

    explicit BandedMatrix(int n);

    int size() const { return n_; }
    void set(int i, int j, double v);
    void add(int i, int j, double v);
    double get(int i, int j) const;  // zero outside the band
    void clear_row(int i);

    std::vector<double> matvec(std::span<const double> x) const;

    /// LU factorization with partial pivoting; throws SingularMatrixError.
    void factor();
    bool factored() const { return factored_; }
    /// Solve A x = rhs using the stored factorization (factors on demand).
    std::vector<double> solve(std::span<const double> rhs);

private:
    int n_;
    std::vector<double> diag_;  // 5 x n, diag_[(j - i + 2) * n + i]
    bool factored_ = false;
    std::vector<double> ab_;  // LAPACK band storage of the factors
    std::vector<int> ipiv_;
};

std::vector<double> banded_solve(BandedMatrix& a, std::span<const double> rhs);

/// Per-mode linear operator A_l = d^3/dx^3 + (b - lambda_l) d/dx with the
/// boundary closures: Dirichlet row at i = 0 (inflow value), one-sided
/// derivative row at i = nx-2 (u_x(X_max) = 0) and Dirichlet row at i = nx-1.
/// Interior rows 1..nx-3 carry the stencils; row 1 uses the biased third
/// difference that fits the pentadiagonal band.
BandedMatrix assemble_mode_operator(double lambda_l, double b, const GridSpec& grid);

/// First interior equation row and last interior equation row of the mode
/// operator (rows outside this range are boundary closures).
inline int first_interior_row() { return 1; }
inline int last_interior_row(int nx) { return nx - 3; }

/// Skew-symmetric split of the convective term: N(u) = (1/3) [ (u^2)_x + u u_x ].
/// Pseudospectral in y with 2/3-rule dealiasing for the periodic case.
Field2D nonlinear_term(const Field2D& u, const GridSpec& grid);

/// Damping profile sigma_s(x) = peak * eta((x - x_s)/(x_max - x_s)).
std::vector<double> sponge_profile(const GridSpec& grid, double x_s, double peak);

}  // namespace zk
