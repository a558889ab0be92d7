#pragma once

#include <span>
#include <string>
#include <vector>

#include "zk/field.hpp"
#include "zk/operators.hpp"
#include "zk/solver.hpp"
#include "zk/weights.hpp"

namespace zk {

/// Weighted Sobolev norm: (sum_{|a| <= k} int (d^a u)^2 rho dx dy)^(1/2),
/// trapezoidal in x and exact in modes; k in 0..2.
double weighted_norm(const Field2D& u, const GridSpec& grid, const WeightFunction& w, int k);

/// The verified energy balances: the two global identities and their
/// localized rho * eta_{x0} forms.
enum class EnergyIdentity { I24, I25, I26, I27 };

std::string identity_name(EnergyIdentity id);

struct EnergyReport {
    EnergyIdentity identity = EnergyIdentity::I24;
    std::string weight;
    double x0 = 0.0;  // localization point for the I26/I27 forms
    std::vector<double> times;  // interior snapshot times (centered d/dt)
    std::vector<std::string> term_names;
    std::vector<std::vector<double>> terms;  // aligned with term_names x times
    std::vector<double> residual;
    double relative_residual = 0.0;  // max |residual| / max term magnitude
};

/// Evaluates every term of the identity on the trajectory's snapshots; d/dt
/// by centered differences of the recorded integral series. For linear runs
/// F comes from the configured forcing, otherwise F = -u u_x.
EnergyReport energy_identity_residual(const Trajectory& tr, const WeightFunction& w, EnergyIdentity id,
                                      double x0 = 0.0);

/// Steklov ratio int psi^2 / ((sigma L^2/pi^2) int psi'^2) from samples of psi
/// and psi' on a uniform grid over [0, L] (composite Simpson; odd count).
/// sigma = 1 requires psi(0) = psi(L) = 0; sigma = 4 requires psi(0) = 0.
double steklov_check(std::span<const double> psi, std::span<const double> dpsi, double L, int sigma);

enum class InterpIneq { I110, I111, I112 };

struct InterpolationReport {
    InterpIneq ineq = InterpIneq::I110;
    double max_ratio = 0.0;
    std::vector<double> ratios;  // one per field; 0/0 reported as 0
};

/// Observed LHS / RHS-without-constant for the interpolation (1.10), trace
/// (1.11) and embedding (1.12) inequalities. rho2 participates only in I110.
InterpolationReport interpolation_ratio_monitor(const std::vector<Field2D>& fields, const GridSpec& grid,
                                                InterpIneq ineq, const WeightFunction& rho1,
                                                const WeightFunction& rho2);

/// Random band-limited decaying fields for the monitors: per-mode Gaussian
/// bumps with geometrically damped mode amplitudes.
std::vector<Field2D> monitor_field_family(const GridSpec& grid, int count, unsigned seed);

/// The decay constants of the large-time theorem (cases a and c only).
struct DecayParams {
    BCCase bc = BCCase::DirichletDirichlet;
    double L = 1.0;
    double b = 0.0;
    int sigma = 1;         // 1 for case a, 4 for case c
    double c0 = 0.0;       // pi^2 / (2 sigma)
    double L0 = 0.0;       // +inf when b <= 0, else sqrt(c0/b)/2
    double alpha0 = 0.0;   // sqrt(c0) / (8 L)
    double beta = 0.0;     // c0 / (4 L^2)
    double alpha = 0.0;    // the run's weight rate
    bool admissible = false;  // alpha <= alpha0 and L < L0
    std::string eps0_policy;
};

DecayParams decay_params(BCCase bc, double L, double b, double alpha);

struct DecayFit {
    double gamma = 0.0;          // least-squares decay exponent over the window
    bool bound_ok = false;       // E_i <= E_0 e^{-rate t_i} (1 + tol), all samples
    double max_violation = 0.0;  // max E_i / (E_0 e^{-rate t_i}) - 1
};

/// Log-linear least squares of E over t in [window_lo, window_hi], plus the
/// per-sample bound check against E_0 e^{-rate t}.
DecayFit fit_decay(std::span<const double> t, std::span<const double> e, double window_lo,
                   double window_hi, double rate, double tol);

/// Weighted L2 norm of d^ax d^ay u over (x0, x_max) x (y0, L - y0); ax + ay <= 4.
/// y0 = 0 integrates exactly in modes; y0 > 0 samples the collocation nodes
/// inside the window.
double interior_norm(const Field2D& u, const GridSpec& grid, double x0, double y0,
                     const WeightFunction& w, int ax, int ay);

}  // namespace zk
