#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "zk/errors.hpp"
#include "zk/operators.hpp"

using namespace zk;

namespace {

// dense Gaussian elimination with partial pivoting: the independent oracle
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

std::vector<std::vector<double>> to_dense(const BandedMatrix& m) {
    std::vector<std::vector<double>> a(m.size(), std::vector<double>(m.size(), 0.0));
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) a[i][j] = m.get(i, j);
    return a;
}

GridSpec test_grid(int nx, double x_max = 10.0, BCCase bc = BCCase::DirichletDirichlet, int n_modes = 4) {
    return GridSpec::make(x_max, nx, 1e-3, bc, 1.0, n_modes);
}

}  // namespace

TEST_CASE("fd_weights reproduces the classic stencils") {
    const double nodes3[] = {0.0, 1.0, 2.0};
    auto d1 = fd_weights(1.0, nodes3, 1);
    CHECK(d1[0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(d1[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d1[2] == doctest::Approx(0.5).epsilon(1e-14));

    const double nodes5[] = {0.0, 1.0, 2.0, 3.0, 4.0};
    auto d3 = fd_weights(0.0, nodes5, 3);
    const double want[] = {-2.5, 9.0, -12.0, 7.0, -1.5};
    for (int i = 0; i < 5; ++i) CHECK(d3[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("stencils exact on low-degree polynomials") {
    const int n = 32;
    const double dx = 0.37;
    std::vector<double> lin(n), cub(n), quart(n), cst(n, 4.2);
    for (int i = 0; i < n; ++i) {
        const double x = i * dx;
        lin[i] = x;
        cub[i] = x * x * x;
        quart[i] = x * x * x * x;
    }
    auto d1 = diff_x(lin, dx, 1);
    for (double v : d1) CHECK(v == doctest::Approx(1.0).epsilon(1e-11));
    auto d3 = diff_x(cub, dx, 3);
    for (double v : d3) CHECK(v == doctest::Approx(6.0).epsilon(5e-9));
    auto d3c = diff_x(cst, dx, 3);
    for (double v : d3c) CHECK(std::abs(v) < 1e-10);
    auto d2 = diff_x(cub, dx, 2);
    for (int i = 0; i < n; ++i) CHECK(d2[i] == doctest::Approx(6.0 * i * dx).epsilon(1e-9));
    auto d4 = diff_x(quart, dx, 4);
    for (double v : d4) CHECK(v == doctest::Approx(24.0).epsilon(1e-6));
}

TEST_CASE("stencil convergence at order two on sin(x)") {
    for (int m : {1, 2, 3, 4}) {
        auto err = [&](int n) {
            const double X = 2.0;
            const double dx = X / (n - 1);
            std::vector<double> u(n);
            for (int i = 0; i < n; ++i) u[i] = std::sin(i * dx);
            auto d = diff_x(u, dx, m);
            double e = 0.0;
            for (int i = 0; i < n; ++i) {
                const double x = i * dx;
                const double exact = std::sin(x + m * M_PI / 2.0);
                e = std::max(e, std::abs(d[i] - exact));
            }
            return e;
        };
        // coarser pair for the high orders: keeps 1/dx^m roundoff below truncation
        const int n1 = (m <= 2) ? 256 : 64;
        const double e1 = err(n1);
        const double e2 = err(2 * n1);
        const double order = zktest::observed_order(e1, e2);
        CAPTURE(m);
        CHECK(order > 1.9);
        CHECK(order < 2.1);
    }
}

TEST_CASE("banded solve: identity and random systems vs dense oracle") {
    BandedMatrix id(6);
    for (int i = 0; i < 6; ++i) id.set(i, i, 1.0);
    std::vector<double> r = {1.0, -2.0, 3.0, 0.5, 0.0, 7.0};
    auto x = banded_solve(id, r);
    for (int i = 0; i < 6; ++i) CHECK(x[i] == doctest::Approx(r[i]).epsilon(1e-14));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> sz(8, 64);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = (trial == 0) ? 8 : sz(rng);
        BandedMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
                a.set(i, j, u(rng) + (i == j ? 3.0 : 0.0));  // keep it comfortably nonsingular
        std::vector<double> rhs(n);
        for (auto& v : rhs) v = u(rng);
        auto got = a.solve(rhs);
        auto want = dense_solve(to_dense(a), rhs);
        for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
        // residual contract
        auto ax = a.matvec(got);
        double rmax = 0.0, bmax = 0.0;
        for (int i = 0; i < n; ++i) {
            rmax = std::max(rmax, std::abs(ax[i] - rhs[i]));
            bmax = std::max(bmax, std::abs(rhs[i]));
        }
        CHECK(rmax <= 1e-10 * std::max(bmax, 1.0));
    }
}

TEST_CASE("banded solve: pivoting and singularity") {
    // zero diagonal forces a pivot swap
    BandedMatrix a(4);
    a.set(0, 1, 1.0);
    a.set(1, 0, 1.0);
    a.set(2, 2, 2.0);
    a.set(3, 3, 1.0);
    std::vector<double> rhs = {3.0, 4.0, 2.0, 5.0};
    auto x = a.solve(rhs);
    CHECK(x[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));

    BandedMatrix s(5);
    s.set(0, 0, 1.0);  // remaining rows identically zero -> singular
    CHECK_THROWS_AS(s.solve(std::vector<double>(5, 1.0)), SingularMatrixError);
}

TEST_CASE("mode operator: pure dispersion when lambda = b") {
    auto g = test_grid(64, 6.3);
    const double b = 2.5;
    auto a = assemble_mode_operator(2.5, b, g);  // advection coefficient cancels
    std::vector<double> cub(g.nx);
    for (int i = 0; i < g.nx; ++i) cub[i] = std::pow(g.x(i), 3);
    auto ax = a.matvec(cub);
    for (int i = first_interior_row(); i <= last_interior_row(g.nx); ++i)
        CHECK(ax[i] == doctest::Approx(6.0).epsilon(1e-7));

    auto zero = a.matvec(std::vector<double>(g.nx, 0.0));
    for (double v : zero) CHECK(v == 0.0);

    // both derivative parts annihilate constants on interior rows
    auto b2 = assemble_mode_operator(1.0, 0.3, g);
    auto cst = b2.matvec(std::vector<double>(g.nx, 5.0));
    for (int i = first_interior_row(); i <= last_interior_row(g.nx); ++i) CHECK(std::abs(cst[i]) < 1e-9);
}

TEST_CASE("mode operator in Crank-Nicolson form matches the dense oracle") {
    auto g = test_grid(48, 5.0);
    const double dt = 0.01;
    auto a = assemble_mode_operator(4.0, 1.0, g);
    BandedMatrix m(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        if (i >= first_interior_row() && i <= last_interior_row(g.nx)) {
            m.set(i, i, 1.0);
            for (int j = std::max(0, i - 2); j <= std::min(g.nx - 1, i + 2); ++j)
                m.add(i, j, 0.5 * dt * a.get(i, j));
        } else {
            for (int j = std::max(0, i - 2); j <= std::min(g.nx - 1, i + 2); ++j) m.set(i, j, a.get(i, j));
        }
    }
    std::vector<double> rhs(g.nx);
    for (int i = 0; i < g.nx; ++i) rhs[i] = std::exp(-std::pow(g.x(i) - 2.0, 2));
    auto got = m.solve(rhs);
    auto want = dense_solve(to_dense(m), rhs);
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
}

TEST_CASE("nonlinear term: constants, linear profile, trig convergence") {
    auto g = test_grid(64, 10.0, BCCase::NeumannNeumann, 4);
    Field2D c(g.nx, g.ny(), 3.0);
    auto nc = nonlinear_term(c, g);
    for (double v : nc.v) CHECK(std::abs(v) < 1e-12);

    Field2D ux(g.nx, g.ny());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny(); ++j) ux.at(i, j) = g.x(i);
    auto nx = nonlinear_term(ux, g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny(); ++j) CHECK(nx.at(i, j) == doctest::Approx(g.x(i)).epsilon(1e-9));

    auto err = [&](int n) {
        auto gg = test_grid(n, 10.0, BCCase::NeumannNeumann, 4);
        Field2D u(gg.nx, gg.ny());
        for (int i = 0; i < gg.nx; ++i)
            for (int j = 0; j < gg.ny(); ++j) u.at(i, j) = std::sin(gg.x(i));
        auto nu = nonlinear_term(u, gg);
        double e = 0.0;
        for (int i = 2; i < gg.nx - 2; ++i)
            e = std::max(e, std::abs(nu.at(i, 0) - std::sin(gg.x(i)) * std::cos(gg.x(i))));
        return e;
    };
    const double order = zktest::observed_order(err(128), err(256));
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("discrete skew-symmetry of the split form on periodic data") {
    // <N(u), u> -> 0 at least at second order for x-periodic data (the phase
    // shift keeps the one-sided closure rows in play; observed decay is
    // actually third order because the closure error is boundary-localized)
    auto probe = [&](int n) {
        auto g = test_grid(n, 10.0, BCCase::NeumannNeumann, 4);
        Field2D u(g.nx, g.ny());
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny(); ++j)
                u.at(i, j) = std::sin(2.0 * M_PI * g.x(i) / g.x_max + 0.7) *
                             (1.0 + 0.3 * g.basis.psi(1, g.basis.nodes()[j]));
        auto nu = nonlinear_term(u, g);
        double acc = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double wx = (i == 0 || i == g.nx - 1) ? 0.5 * g.dx() : g.dx();
            for (int j = 0; j < g.ny(); ++j)
                acc += wx * g.basis.quad_weight() * nu.at(i, j) * u.at(i, j);
        }
        return std::abs(acc);
    };
    const double e1 = probe(128);
    const double e2 = probe(256);
    CHECK(e2 < e1);
    const double order = zktest::observed_order(e1, e2);
    CHECK(order > 1.9);
    CHECK(order < 3.5);
}

TEST_CASE("sponge profile shape") {
    auto g = test_grid(101, 10.0);
    auto s = sponge_profile(g, 8.0, 10.0);
    for (int i = 0; i < g.nx; ++i) {
        if (g.x(i) <= 8.0) CHECK(s[i] == 0.0);
        CHECK(s[i] >= 0.0);
        CHECK(s[i] <= 10.0);
        if (i > 0) CHECK(s[i] >= s[i - 1]);
    }
    CHECK(s.back() == doctest::Approx(10.0).epsilon(1e-14));
    CHECK_THROWS_AS(sponge_profile(g, -1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(sponge_profile(g, 11.0, 10.0), std::invalid_argument);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec::make(-1.0, 64, 1e-3, BCCase::DirichletDirichlet, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::make(10.0, 4, 1e-3, BCCase::DirichletDirichlet, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::make(10.0, 64, -1e-3, BCCase::DirichletDirichlet, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(diff_x(std::vector<double>(3, 0.0), 0.1, 3), std::invalid_argument);
}
