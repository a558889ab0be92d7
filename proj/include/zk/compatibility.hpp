#pragma once

#include <vector>

#include "zk/field.hpp"
#include "zk/operators.hpp"
#include "zk/transverse.hpp"

namespace zk {

/// A u = u_xxx + u_xyy + b u_x evaluated with the module stencils
/// (per-mode: d^3/dx^3 + (b - lambda_l) d/dx).
Field2D apply_zk_linear(const Field2D& u, const GridSpec& grid, double b);

enum class StackKind { Nonlinear, Linear };
enum class QuadraticTerm { Include, Suppress };

/// Compatibility functions Phi_0..Phi_M (or the linear Phi~ variants) on the grid.
struct CompatibilityStack {
    StackKind kind = StackKind::Nonlinear;
    int order = 0;
    std::vector<Field2D> phi;  // order + 1 entries, phi[0] == u0

    const Field2D& at(int m) const { return phi.at(m); }
};

/// Phi_0 = u0,  Phi_m = -A Phi_{m-1} - sum_l binom(m-1, l) Phi_l d_x Phi_{m-l-1}.
/// Suppressing the quadratic term reproduces the linear recursion exactly
/// (shared code path).
CompatibilityStack phi_stack(const Field2D& u0, double b, int M, const GridSpec& grid,
                             QuadraticTerm quad = QuadraticTerm::Include);

/// Linear variant: Phi~_0 = u0,  Phi~_m = d_t^{m-1} f|_{t=0} - A Phi~_{m-1}.
/// f_derivs supplies d_t^l f|_{t=0} for l = 0..M-1.
CompatibilityStack phi_tilde_stack(const Field2D& u0, const std::vector<Field2D>& f_derivs, double b,
                                   int M, const GridSpec& grid);

/// Closed form of the linear stack:
/// Phi~_m = (-1)^m A^m u0 + sum_l (-1)^{m-l-1} A^{m-l-1} d_t^l f|_{t=0}.
/// Debug cross-check for the recursion (same discrete operators, different
/// evaluation order).
CompatibilityStack phi_tilde_closed(const Field2D& u0, const std::vector<Field2D>& f_derivs, double b,
                                    int M, const GridSpec& grid);

/// Per-order residuals || d_t^m mu(0,.) - Phi_m(0,.) ||_{L2(0,L)}, m = 0..M.
/// Time derivatives of mu at t = 0 by one-sided second-order differences.
std::vector<double> check_compatibility(const BoundaryTrace& mu, const CompatibilityStack& stack, int M);

}  // namespace zk
