#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zk/field.hpp"

namespace zk {

/// sin(pi*x) / cos(pi*x) with argument reduction so integer and half-integer
/// multiples land exactly on 0 / +-1; keeps boundary conditions exact.
double sin_pi(double x);
double cos_pi(double x);

/// The four transverse boundary-condition families of the strip 0 < y < L.
enum class BCCase {
    DirichletDirichlet,  // a)  u(.,0) = u(.,L) = 0
    NeumannNeumann,      // b)  u_y(.,0) = u_y(.,L) = 0
    DirichletNeumann,    // c)  u(.,0) = u_y(.,L) = 0
    Periodic,            // d)  L-periodic in y
};

char bc_to_char(BCCase c);
BCCase bc_from_char(char c);  // 'a'..'d'

/// Orthonormal eigenfunctions of -d^2/dy^2 on (0, L) under one BC case,
/// together with the collocation rule that makes the discrete transform
/// exactly orthogonal.
///
/// Internal mode index m = 0 .. n_modes-1:
///   a) psi_m = sqrt(2/L) sin((m+1) pi y / L)
///   b) psi_0 = sqrt(1/L);  psi_m = sqrt(2/L) cos(m pi y / L), m >= 1
///   c) psi_m = sqrt(2/L) sin((m+1/2) pi y / L)
///   d) psi_0 = sqrt(1/L);  m = 2k-1 -> sqrt(2/L) cos(2k pi y / L),
///                          m = 2k   -> sqrt(2/L) sin(2k pi y / L)
class TransverseBasis {
public:
    TransverseBasis() = default;  // inert; build real bases with make()
    static TransverseBasis make(BCCase bc, double L, int n_modes);

    BCCase bc() const { return bc_; }
    double L() const { return L_; }
    int n_modes() const { return n_modes_; }
    int n_y() const { return n_y_; }
    double quad_weight() const { return w_; }
    const std::vector<double>& nodes() const { return nodes_; }

    double lambda(int m) const;
    /// Signed integer index entering the (|theta|^(2/3) + l^2)^(s/2) weight.
    int norm_index(int m) const;

    double psi(int m, double y) const { return psi_deriv(m, y, 0); }
    /// d^order/dy^order psi_m(y), order in 0..4.
    double psi_deriv(int m, double y, int order) const;

    /// c_l = w * sum_j psi_l(y_j) u(y_j); exact inverse on band-limited data.
    std::vector<double> forward(std::span<const double> samples) const;
    std::vector<double> inverse(std::span<const double> coeffs) const;

    ModeField to_modes(const Field2D& u) const;
    Field2D from_modes(const ModeField& m) const;
    /// Samples of d^order/dy^order u at the collocation nodes.
    Field2D sample_y_deriv(const ModeField& m, int order) const;

private:
    // frequency multiplier nu (in units of pi/L) and phase selector
    struct ModeShape {
        double nu;     // psi = amp * trig(nu * pi * y / L)
        bool is_sin;   // sin vs cos branch (constant mode: nu = 0, cos)
        double amp;
    };
    ModeShape shape(int m) const;

    BCCase bc_ = BCCase::DirichletDirichlet;
    double L_ = 1.0;
    int n_modes_ = 0;
    int n_y_ = 0;
    double w_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> psi_mat_;  // n_modes x n_y, psi_l(y_j)
};

struct Eigenpair {
    double lambda;
    std::function<double(double)> psi;
};

/// Analytic eigenpair by the per-case index convention of the text:
/// cases a, c index from l = 1; cases b, d include l = 0.
Eigenpair eigensystem(BCCase bc, double L, int l);

/// Boundary data samples mu(t_i, y_j) on a uniform time grid and the
/// collocation nodes of `basis`.
struct BoundaryTrace {
    TransverseBasis basis;
    std::vector<double> times;    // uniform, ascending
    std::vector<double> samples;  // nt x n_y, t-major

    int nt() const { return static_cast<int>(times.size()); }
    double dt() const;
    double& at(int i, int j) { return samples[static_cast<size_t>(i) * basis.n_y() + j]; }
    double at(int i, int j) const { return samples[static_cast<size_t>(i) * basis.n_y() + j]; }
};

/// Anisotropic trace norm: zero-extend mu in t, DFT with 2x zero padding,
/// eigenexpansion in y, then
///   norm^2 = sum_l  (1/2pi) int (|theta|^(2/3) + l^2)^s |mu_hat(theta, l)|^2 dtheta.
/// The 1/2pi measure makes s = 0 coincide with the discrete space-time L2 norm.
/// Non-integrable combinations (negative s with a zero index on the zero
/// frequency) return +infinity rather than throwing.
double boundary_norm(const BoundaryTrace& mu, double s);

/// Discrete space-time L2 norm of a trace (rectangle rule in t).
double trace_l2(const BoundaryTrace& mu);

}  // namespace zk
