#include "zk/compatibility.hpp"

#include <cmath>
#include <stdexcept>

namespace zk {

namespace {

long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

CompatibilityStack build_stack(const Field2D& u0, const std::vector<Field2D>* f_derivs, bool quadratic,
                               double b, int M, const GridSpec& grid) {
    if (M < 0) throw std::domain_error("compatibility stack: order M must be non-negative");
    if (u0.nx != grid.nx || u0.ny != grid.ny())
        throw std::invalid_argument("compatibility stack: u0 shape does not match the grid");
    if (f_derivs && static_cast<int>(f_derivs->size()) < M)
        throw std::invalid_argument("compatibility stack: f_derivs must supply orders 0..M-1");

    CompatibilityStack s;
    s.kind = (f_derivs || !quadratic) ? StackKind::Linear : StackKind::Nonlinear;
    s.order = M;
    s.phi.reserve(M + 1);
    s.phi.push_back(u0);

    const double dx = grid.dx();
    for (int m = 1; m <= M; ++m) {
        Field2D next = apply_zk_linear(s.phi[m - 1], grid, b);
        for (double& v : next.v) v = -v;
        if (f_derivs) axpy(next, 1.0, (*f_derivs)[m - 1]);
        if (quadratic) {
            for (int l = 0; l <= m - 1; ++l) {
                const Field2D dphi = diff_x(s.phi[m - 1 - l], dx, 1);
                const double coef = -static_cast<double>(binom(m - 1, l));
                const Field2D& pl = s.phi[l];
                for (size_t k = 0; k < next.v.size(); ++k) next.v[k] += coef * pl.v[k] * dphi.v[k];
            }
        }
        s.phi.push_back(std::move(next));
    }
    return s;
}

}  // namespace

Field2D apply_zk_linear(const Field2D& u, const GridSpec& grid, double b) {
    const double dx = grid.dx();
    ModeField m = grid.basis.to_modes(u);
    ModeField out(m.nx, m.n_modes);
    for (int l = 0; l < m.n_modes; ++l) {
        auto p = m.profile(l);
        auto d3 = diff_x(p, dx, 3);
        auto d1 = diff_x(p, dx, 1);
        const double adv = b - grid.basis.lambda(l);
        for (int i = 0; i < m.nx; ++i) out.at(i, l) = d3[i] + adv * d1[i];
    }
    return grid.basis.from_modes(out);
}

CompatibilityStack phi_stack(const Field2D& u0, double b, int M, const GridSpec& grid, QuadraticTerm quad) {
    return build_stack(u0, nullptr, quad == QuadraticTerm::Include, b, M, grid);
}

CompatibilityStack phi_tilde_stack(const Field2D& u0, const std::vector<Field2D>& f_derivs, double b,
                                   int M, const GridSpec& grid) {
    return build_stack(u0, &f_derivs, false, b, M, grid);
}

CompatibilityStack phi_tilde_closed(const Field2D& u0, const std::vector<Field2D>& f_derivs, double b,
                                    int M, const GridSpec& grid) {
    if (M < 0) throw std::domain_error("compatibility stack: order M must be non-negative");
    if (static_cast<int>(f_derivs.size()) < M)
        throw std::invalid_argument("phi_tilde_closed: f_derivs must supply orders 0..M-1");
    CompatibilityStack s;
    s.kind = StackKind::Linear;
    s.order = M;
    for (int m = 0; m <= M; ++m) {
        // (-1)^m A^m u0
        Field2D acc = u0;
        for (int p = 0; p < m; ++p) acc = apply_zk_linear(acc, grid, b);
        if (m % 2 == 1)
            for (double& v : acc.v) v = -v;
        // + sum_l (-1)^{m-l-1} A^{m-l-1} d_t^l f|_{t=0}
        for (int l = 0; l <= m - 1; ++l) {
            Field2D term = f_derivs[l];
            for (int p = 0; p < m - l - 1; ++p) term = apply_zk_linear(term, grid, b);
            axpy(acc, ((m - l - 1) % 2 == 0) ? 1.0 : -1.0, term);
        }
        s.phi.push_back(std::move(acc));
    }
    return s;
}

std::vector<double> check_compatibility(const BoundaryTrace& mu, const CompatibilityStack& stack, int M) {
    if (M < 0 || M > stack.order) throw std::invalid_argument("check_compatibility: M exceeds the stack order");
    const int ny = mu.basis.n_y();
    if (!stack.phi.empty() && stack.phi.front().ny != ny)
        throw std::invalid_argument("check_compatibility: trace and stack use different collocation rules");
    std::vector<double> res(M + 1, 0.0);
    for (int m = 0; m <= M; ++m) {
        const int npts = m + 2;
        if (mu.nt() < npts)
            throw std::invalid_argument("check_compatibility: not enough time samples for order " +
                                        std::to_string(m));
        std::vector<double> tnodes(mu.times.begin(), mu.times.begin() + npts);
        auto w = fd_weights(mu.times.front(), tnodes, m);
        double acc = 0.0;
        for (int j = 0; j < ny; ++j) {
            double dmu = 0.0;
            for (int i = 0; i < npts; ++i) dmu += w[i] * mu.at(i, j);
            const double d = dmu - stack.at(m).at(0, j);
            acc += d * d;
        }
        res[m] = std::sqrt(mu.basis.quad_weight() * acc);
    }
    return res;
}

}  // namespace zk
