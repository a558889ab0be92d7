#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "zk/diagnostics.hpp"

using namespace zk;
using zktest::Manufactured;

namespace {

Field2D mode_bump(const GridSpec& g, int mode, double xc, double width = 1.0, double amp = 1.0) {
    Field2D u(g.nx, g.ny());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny(); ++j)
            u.at(i, j) = amp * std::exp(-std::pow((g.x(i) - xc) / width, 2)) *
                         g.basis.psi(mode, g.basis.nodes()[j]);
    return u;
}

Field2D exp_mode1(const GridSpec& g) {
    Field2D u(g.nx, g.ny());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny(); ++j)
            u.at(i, j) = std::exp(-g.x(i)) * g.basis.psi(0, g.basis.nodes()[j]);
    return u;
}

}  // namespace

TEST_CASE("weighted norm closed forms") {
    auto g = GridSpec::make(10.0, 4001, 1e-3, BCCase::DirichletDirichlet, 1.0, 4);
    Field2D z(g.nx, g.ny(), 0.0);
    CHECK(weighted_norm(z, g, WeightFunction::constant(), 0) == 0.0);

    auto u = exp_mode1(g);
    // int_0^inf e^{-2x} = 1/2
    CHECK(weighted_norm(u, g, WeightFunction::constant(), 0) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1.5e-6));
    // exponential weight alpha = 1/4: int e^{-2x} e^{x/2}/(1/2) = 2/(3/2) = 4/3
    CHECK(weighted_norm(u, g, WeightFunction::exponential(0.25), 0) ==
          doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-5));
    // k = 1 adds (1 + lambda_1)/2 under the constant weight
    const double lam = g.basis.lambda(0);
    CHECK(weighted_norm(u, g, WeightFunction::constant(), 1) ==
          doctest::Approx(std::sqrt(0.5 * (2.0 + lam))).epsilon(1e-4));

    CHECK_THROWS_AS(weighted_norm(u, g, WeightFunction::constant(), 3), std::invalid_argument);
}

TEST_CASE("energy identities vanish on the zero trajectory") {
    auto g = GridSpec::make(8.0, 65, 1e-2, BCCase::DirichletDirichlet, 1.0, 4);
    SolverConfig c;
    c.grid = g;
    c.T = 0.05;
    Solver solver(c, Inflow::zero());
    auto tr = solver.run(Field2D(g.nx, g.ny(), 0.0));
    for (auto id : {EnergyIdentity::I24, EnergyIdentity::I25}) {
        auto rep = energy_identity_residual(tr, WeightFunction::exponential(0.25), id);
        for (double r : rep.residual) CHECK(r == 0.0);
        CHECK(rep.relative_residual == 0.0);
    }
}

TEST_CASE("identity (2.4) residual on the manufactured run shrinks at scheme order") {
    auto run = [&](int nx, double dt) {
        auto m = Manufactured::make(nx, dt);
        Solver solver(m.config(0.3), m.inflow());
        return solver.run(m.initial());
    };
    for (const auto& w : {WeightFunction::constant(), WeightFunction::exponential(0.25)}) {
        auto coarse = energy_identity_residual(run(129, 1e-2), w, EnergyIdentity::I24);
        auto fine = energy_identity_residual(run(257, 5e-3), w, EnergyIdentity::I24);
        CAPTURE(w.to_string());
        CHECK(coarse.relative_residual < 0.05);
        const double order = zktest::observed_order(coarse.relative_residual, fine.relative_residual);
        CHECK(order > 1.5);
        CHECK(order < 3.0);
    }
}

TEST_CASE("identity (2.5) residual on the manufactured run shrinks at scheme order") {
    auto run = [&](int nx, double dt) {
        auto m = Manufactured::make(nx, dt);
        Solver solver(m.config(0.3), m.inflow());
        return solver.run(m.initial());
    };
    auto coarse = energy_identity_residual(run(129, 1e-2), WeightFunction::constant(), EnergyIdentity::I25);
    auto fine = energy_identity_residual(run(257, 5e-3), WeightFunction::constant(), EnergyIdentity::I25);
    CHECK(coarse.relative_residual < 0.05);
    const double order = zktest::observed_order(coarse.relative_residual, fine.relative_residual);
    CHECK(order > 1.5);
    CHECK(order < 3.0);
}

TEST_CASE("localized (2.6) reduces to (2.4) when eta is 1 on the support") {
    auto g = GridSpec::make(16.0, 257, 5e-3, BCCase::DirichletDirichlet, 1.0, 4);
    SolverConfig c;
    c.grid = g;
    c.linear_only = true;
    c.T = 0.05;
    c.sponge_peak = 0.0;
    Solver solver(c, Inflow::zero());
    auto tr = solver.run(mode_bump(g, 0, 8.0));

    const auto w = WeightFunction::exponential(0.2);
    auto global = energy_identity_residual(tr, w, EnergyIdentity::I24);
    auto local = energy_identity_residual(tr, w, EnergyIdentity::I26, 2.0);

    // v vanishes below x = 2 to machine precision, so eta_{x0=2} is 1 on the
    // support: every term agrees and the trace term itself is negligible
    double scale = 0.0;
    for (const auto& series : global.terms)
        for (double v : series) scale = std::max(scale, std::abs(v));
    for (size_t i = 0; i < global.residual.size(); ++i)
        CHECK(std::abs(global.residual[i] - global.terms[1][i] - local.residual[i]) < 1e-10 * scale);

    CHECK_THROWS_AS(energy_identity_residual(tr, w, EnergyIdentity::I26, -1.0), std::invalid_argument);
}

TEST_CASE("localized (2.7) runs and stays consistent") {
    auto g = GridSpec::make(16.0, 257, 5e-3, BCCase::DirichletDirichlet, 1.0, 4);
    SolverConfig c;
    c.grid = g;
    c.linear_only = true;
    c.T = 0.05;
    c.sponge_peak = 0.0;
    Solver solver(c, Inflow::zero());
    auto tr = solver.run(mode_bump(g, 0, 8.0));
    auto global = energy_identity_residual(tr, WeightFunction::constant(), EnergyIdentity::I25);
    auto local = energy_identity_residual(tr, WeightFunction::constant(), EnergyIdentity::I27, 2.0);
    double scale = 0.0;
    for (const auto& series : global.terms)
        for (double v : series) scale = std::max(scale, std::abs(v));
    for (size_t i = 0; i < global.residual.size(); ++i)
        CHECK(std::abs(global.residual[i] - global.terms[1][i] - local.residual[i]) < 1e-9 * scale);
}

TEST_CASE("Steklov ratios: extremal modes and frequency scaling") {
    const int n = 2001;
    auto sample = [&](double L, double freq_factor) {
        std::vector<double> psi(n), dpsi(n);
        for (int i = 0; i < n; ++i) {
            const double y = L * i / (n - 1);
            psi[i] = std::sin(freq_factor * M_PI * y / L);
            dpsi[i] = (freq_factor * M_PI / L) * std::cos(freq_factor * M_PI * y / L);
        }
        return std::pair(psi, dpsi);
    };

    auto [p1, d1] = sample(1.0, 1.0);
    CHECK(steklov_check(p1, d1, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-10));

    auto [ph, dh] = sample(2.0, 0.5);  // sin(pi y / (2L)) on [0, L=2]
    CHECK(steklov_check(ph, dh, 2.0, 4) == doctest::Approx(1.0).epsilon(1e-10));

    auto [p2, d2] = sample(1.0, 2.0);
    CHECK(steklov_check(p2, d2, 1.0, 1) == doctest::Approx(0.25).epsilon(1e-10));

    // class violation: cos profile has psi(0) != 0
    std::vector<double> bad(n), dbad(n);
    for (int i = 0; i < n; ++i) {
        const double y = static_cast<double>(i) / (n - 1);
        bad[i] = std::cos(M_PI * y);
        dbad[i] = -M_PI * std::sin(M_PI * y);
    }
    CHECK_THROWS_AS(steklov_check(bad, dbad, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(steklov_check(p1, d1, 1.0, 2), std::invalid_argument);
}

TEST_CASE("Steklov ratios stay below one for random admissible combinations") {
    const int n = 2001;
    std::mt19937_64 rng(314);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double L = 1.3;
    for (int trial = 0; trial < 100; ++trial) {
        for (int sigma : {1, 4}) {
            std::vector<double> psi(n, 0.0), dpsi(n, 0.0);
            for (int k = 1; k <= 8; ++k) {
                const double a = gauss(rng);
                const double f = (sigma == 1) ? k : (k - 0.5);
                for (int i = 0; i < n; ++i) {
                    const double y = L * i / (n - 1);
                    psi[i] += a * std::sin(f * M_PI * y / L);
                    dpsi[i] += a * (f * M_PI / L) * std::cos(f * M_PI * y / L);
                }
            }
            if (sigma == 1) {
                psi.front() = 0.0;
                psi.back() = 0.0;  // clear roundoff at the pinned endpoints
            } else {
                psi.front() = 0.0;
            }
            CHECK(steklov_check(psi, dpsi, L, sigma) <= 1.0 + 1e-8);
        }
    }
}

TEST_CASE("interpolation monitors: degenerate, scaling, finiteness") {
    auto g = GridSpec::make(12.0, 201, 1e-3, BCCase::DirichletDirichlet, 1.0, 6);
    const auto one = WeightFunction::constant();

    std::vector<Field2D> zero = {Field2D(g.nx, g.ny(), 0.0)};
    for (auto iq : {InterpIneq::I110, InterpIneq::I111, InterpIneq::I112})
        CHECK(interpolation_ratio_monitor(zero, g, iq, one, one).max_ratio == 0.0);

    auto fam = monitor_field_family(g, 40, 2026);
    auto r110 = interpolation_ratio_monitor(fam, g, InterpIneq::I110, one, one);
    CHECK(r110.max_ratio > 0.0);
    CHECK(std::isfinite(r110.max_ratio));

    // homogeneity: scaling the field leaves every (1.10) ratio unchanged
    std::vector<Field2D> doubled = fam;
    for (auto& f : doubled)
        for (auto& v : f.v) v *= 2.0;
    auto r2 = interpolation_ratio_monitor(doubled, g, InterpIneq::I110, one, one);
    for (size_t i = 0; i < fam.size(); ++i)
        CHECK(r2.ratios[i] == doctest::Approx(r110.ratios[i]).epsilon(1e-12));

    for (auto iq : {InterpIneq::I111, InterpIneq::I112}) {
        auto r = interpolation_ratio_monitor(fam, g, iq, WeightFunction::exponential(0.2), one);
        CHECK(std::isfinite(r.max_ratio));
        CHECK(r.max_ratio > 0.0);
    }
}

TEST_CASE("decay parameter formulas") {
    auto p = decay_params(BCCase::DirichletDirichlet, 1.0, 0.0, 0.25);
    CHECK(p.sigma == 1);
    CHECK(p.c0 == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
    CHECK(std::isinf(p.L0));
    CHECK(p.alpha0 == doctest::Approx(0.27768018).epsilon(1e-7));
    CHECK(p.beta == doctest::Approx(M_PI * M_PI / 8.0).epsilon(1e-14));
    CHECK(p.admissible);

    auto pb = decay_params(BCCase::DirichletDirichlet, 1.0, 1.0, 0.25);
    CHECK(pb.L0 == doctest::Approx(M_PI / (2.0 * std::sqrt(2.0))).epsilon(1e-12));  // 1.11072
    CHECK(pb.admissible);  // L = 1 < L0

    auto pc = decay_params(BCCase::DirichletNeumann, 1.0, 0.0, 0.1);
    CHECK(pc.sigma == 4);
    CHECK(pc.c0 == doctest::Approx(M_PI * M_PI / 8.0).epsilon(1e-14));
    CHECK(pc.beta == doctest::Approx(M_PI * M_PI / 32.0).epsilon(1e-14));  // 0.30843
    CHECK(pc.admissible);

    auto inadmissible = decay_params(BCCase::DirichletDirichlet, 1.0, 0.0, 0.3);
    CHECK(!inadmissible.admissible);  // alpha 0.3 > alpha0 0.27768

    CHECK_THROWS_AS(decay_params(BCCase::NeumannNeumann, 1.0, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(decay_params(BCCase::Periodic, 1.0, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("decay fits") {
    std::vector<double> t, e1, e2, e3;
    for (int i = 0; i <= 200; ++i) {
        const double ti = 0.05 * i;
        t.push_back(ti);
        e1.push_back(5.0 * std::exp(-0.7 * ti));
        e2.push_back(std::exp(-ti) * (1.0 + 0.01 * std::sin(ti)));
        e3.push_back(3.0);
    }
    auto f1 = fit_decay(t, e1, 0.0, 10.0, 0.7, 1e-9);
    CHECK(f1.gamma == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(f1.bound_ok);

    auto f2 = fit_decay(t, e2, 0.0, 10.0, 0.5, 0.05);
    CHECK(f2.gamma > 0.99);
    CHECK(f2.gamma < 1.01);

    auto f3 = fit_decay(t, e3, 0.0, 10.0, 0.0, 1e-9);
    CHECK(f3.gamma == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<double> neg = e1;
    neg[5] = -1.0;
    CHECK_THROWS_AS(fit_decay(t, neg, 0.0, 10.0, 0.7, 0.05), std::domain_error);
}

TEST_CASE("interior norms") {
    auto g = GridSpec::make(10.0, 4001, 1e-3, BCCase::DirichletDirichlet, 1.0, 4);
    const auto one = WeightFunction::constant();

    Field2D z(g.nx, g.ny(), 0.0);
    CHECK(interior_norm(z, g, 1.0, 0.0, one, 0, 0) == 0.0);

    auto u = exp_mode1(g);
    // || d_x u || over (1, inf) x (0, L) = sqrt(e^-2 / 2)
    const double want = std::exp(-1.0) / std::sqrt(2.0);
    CHECK(interior_norm(u, g, 1.0, 0.0, one, 1, 0) == doctest::Approx(want).epsilon(1e-5));

    // domain monotonicity
    CHECK(interior_norm(u, g, 2.0, 0.0, one, 1, 0) <= interior_norm(u, g, 1.0, 0.0, one, 1, 0));
    CHECK(interior_norm(u, g, 1.0, 0.2, one, 0, 0) <= interior_norm(u, g, 1.0, 0.0, one, 0, 0));

    // mixed derivative with the transverse factor: d_y picks up sqrt(lambda)
    const double lam = g.basis.lambda(0);
    CHECK(interior_norm(u, g, 1.0, 0.0, one, 0, 1) ==
          doctest::Approx(std::sqrt(lam) * std::exp(-1.0) / std::sqrt(2.0)).epsilon(1e-5));

    CHECK_THROWS_AS(interior_norm(u, g, 1.0, 0.0, one, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(interior_norm(u, g, 1.0, 0.6, one, 0, 0), std::domain_error);
    CHECK_THROWS_AS(interior_norm(u, g, 11.0, 0.0, one, 0, 0), std::domain_error);
}
