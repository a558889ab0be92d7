#include "zk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace zk {

namespace {

double trap_w(const GridSpec& g, int i) { return (i == 0 || i == g.nx - 1) ? 0.5 * g.dx() : g.dx(); }

// trapezoid integral of f_i * w_i over the full axial range
double trapz(const GridSpec& g, const std::vector<double>& f, const std::vector<double>& w) {
    double acc = 0.0;
    for (int i = 0; i < g.nx; ++i) acc += trap_w(g, i) * f[i] * w[i];
    return acc;
}

// one-sided second-order derivative values at x = 0
double left_d1(const std::vector<double>& c, double dx) {
    return (-3.0 * c[0] + 4.0 * c[1] - c[2]) / (2.0 * dx);
}
double left_d2(const std::vector<double>& c, double dx) {
    return (2.0 * c[0] - 5.0 * c[1] + 4.0 * c[2] - c[3]) / (dx * dx);
}

struct WeightTables {
    std::vector<double> w0, w1, w3;  // W, W', W''' on the grid
    double rho0 = 0.0, drho0 = 0.0, d2rho0 = 0.0;  // rho and derivatives at x = 0 (global forms)
    bool localized = false;
};

WeightTables weight_tables(const GridSpec& g, const WeightFunction& w, bool localized, double x0) {
    WeightTables t;
    t.localized = localized;
    t.w0.resize(g.nx);
    t.w1.resize(g.nx);
    t.w3.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        if (!localized) {
            t.w0[i] = w.eval(x, 0);
            t.w1[i] = w.eval(x, 1);
            t.w3[i] = w.eval(x, 3);
        } else {
            // Leibniz products of rho and eta_{x0}
            const double r0 = w.eval(x, 0), r1 = w.eval(x, 1), r2 = w.eval(x, 2), r3 = w.eval(x, 3);
            const double e0 = eta_x0_deriv(x, x0, 0), e1 = eta_x0_deriv(x, x0, 1),
                         e2 = eta_x0_deriv(x, x0, 2), e3 = eta_x0_deriv(x, x0, 3);
            t.w0[i] = r0 * e0;
            t.w1[i] = r1 * e0 + r0 * e1;
            t.w3[i] = r3 * e0 + 3.0 * r2 * e1 + 3.0 * r1 * e2 + r0 * e3;
        }
    }
    t.rho0 = w.eval(0.0, 0);
    t.drho0 = w.eval(0.0, 1);
    t.d2rho0 = w.eval(0.0, 2);
    return t;
}

// F of the identity at one snapshot: the forcing for linear runs, -u u_x otherwise
Field2D identity_forcing(const Trajectory& tr, size_t snap) {
    const GridSpec& g = tr.config.grid;
    const Field2D& u = tr.snapshots[snap];
    if (tr.config.linear_only) {
        Field2D f(u.nx, u.ny, 0.0);
        if (tr.config.forcing) {
            const double t = tr.snap_times[snap];
            for (int i = 0; i < u.nx; ++i)
                for (int j = 0; j < u.ny; ++j) f.at(i, j) = tr.config.forcing(t, g.x(i), g.basis.nodes()[j]);
        }
        return f;
    }
    Field2D ux = diff_x(u, g.dx(), 1);
    Field2D f(u.nx, u.ny);
    for (size_t k = 0; k < u.v.size(); ++k) f.v[k] = -u.v[k] * ux.v[k];
    return f;
}

struct SnapshotTerms {
    double energy = 0.0, trace = 0.0, flux = 0.0, third = 0.0, rhs = 0.0;
};

SnapshotTerms identity_terms(const Trajectory& tr, size_t snap, EnergyIdentity id, const WeightTables& wt) {
    const GridSpec& g = tr.config.grid;
    const double dx = g.dx();
    const double b = tr.config.b;
    const bool first_order = (id == EnergyIdentity::I24 || id == EnergyIdentity::I26);

    ModeField um = g.basis.to_modes(tr.snapshots[snap]);
    ModeField fm = g.basis.to_modes(identity_forcing(tr, snap));

    SnapshotTerms s;
    std::vector<double> tmp(g.nx);
    for (int l = 0; l < g.n_modes(); ++l) {
        const double lam = g.basis.lambda(l);
        auto c = um.profile(l);
        auto c1 = diff_x(c, dx, 1);
        auto fl = fm.profile(l);
        if (first_order) {
            for (int i = 0; i < g.nx; ++i) tmp[i] = c[i] * c[i];
            s.energy += trapz(g, tmp, wt.w0);
            s.third += trapz(g, tmp, wt.w3);
            for (int i = 0; i < g.nx; ++i) tmp[i] = 3.0 * c1[i] * c1[i] + (lam - b) * c[i] * c[i];
            s.flux += trapz(g, tmp, wt.w1);
            for (int i = 0; i < g.nx; ++i) tmp[i] = 2.0 * fl[i] * c[i];
            s.rhs += trapz(g, tmp, wt.w0);
            if (!wt.localized) {
                const double d = left_d1(c, dx);
                s.trace += wt.rho0 * d * d;
            }
        } else {
            auto c2 = diff_x(c, dx, 2);
            for (int i = 0; i < g.nx; ++i) tmp[i] = c1[i] * c1[i] + lam * c[i] * c[i];
            s.energy += trapz(g, tmp, wt.w0);
            s.third += trapz(g, tmp, wt.w3);
            for (int i = 0; i < g.nx; ++i)
                tmp[i] = 3.0 * c2[i] * c2[i] + 4.0 * lam * c1[i] * c1[i] + lam * lam * c[i] * c[i] -
                         b * (c1[i] * c1[i] + lam * c[i] * c[i]);
            s.flux += trapz(g, tmp, wt.w1);
            // rhs = -2 int F (v_xx W + v_x W' + v_yy W)
            for (int i = 0; i < g.nx; ++i)
                tmp[i] = -2.0 * fl[i] * (c2[i] * wt.w0[i] + c1[i] * wt.w1[i] - lam * c[i] * wt.w0[i]);
            double acc = 0.0;
            for (int i = 0; i < g.nx; ++i) acc += trap_w(g, i) * tmp[i];
            s.rhs += acc;
            if (!wt.localized) {
                const double d1 = left_d1(c, dx);
                const double d2 = left_d2(c, dx);
                s.trace += d2 * d2 * wt.rho0 + 2.0 * d2 * d1 * wt.drho0 - d1 * d1 * wt.d2rho0 +
                           b * d1 * d1 * wt.rho0;
            }
        }
    }
    return s;
}

}  // namespace

double weighted_norm(const Field2D& u, const GridSpec& grid, const WeightFunction& w, int k) {
    if (k < 0 || k > 2) throw std::invalid_argument("weighted_norm: derivative order k must be in 0..2");
    const double dx = grid.dx();
    std::vector<double> rho(grid.nx);
    for (int i = 0; i < grid.nx; ++i) rho[i] = w.eval(grid.x(i), 0);

    ModeField m = grid.basis.to_modes(u);
    double acc = 0.0;
    std::vector<double> tmp(grid.nx);
    for (int l = 0; l < grid.n_modes(); ++l) {
        const double lam = grid.basis.lambda(l);
        auto c = m.profile(l);
        auto add = [&](const std::vector<double>& p, double factor) {
            for (int i = 0; i < grid.nx; ++i) tmp[i] = factor * p[i] * p[i];
            acc += trapz(grid, tmp, rho);
        };
        add(c, 1.0);  // |a| = 0
        if (k >= 1) {
            add(diff_x(c, dx, 1), 1.0);  // (1,0)
            add(c, lam);                 // (0,1)
        }
        if (k >= 2) {
            add(diff_x(c, dx, 2), 1.0);       // (2,0)
            add(diff_x(c, dx, 1), lam);       // (1,1)
            add(c, lam * lam);                // (0,2)
        }
    }
    return std::sqrt(acc);
}

std::string identity_name(EnergyIdentity id) {
    switch (id) {
        case EnergyIdentity::I24: return "(2.4)";
        case EnergyIdentity::I25: return "(2.5)";
        case EnergyIdentity::I26: return "(2.6)";
        case EnergyIdentity::I27: return "(2.7)";
    }
    return "?";
}

EnergyReport energy_identity_residual(const Trajectory& tr, const WeightFunction& w, EnergyIdentity id,
                                      double x0) {
    const bool localized = (id == EnergyIdentity::I26 || id == EnergyIdentity::I27);
    if (localized && x0 <= 0.0)
        throw std::invalid_argument("energy_identity_residual: localized identities need x0 > 0");
    if (tr.snapshots.size() < 3)
        throw std::invalid_argument("energy_identity_residual: need at least three snapshots");
    if (tr.snapshots.size() != tr.snap_times.size())
        throw std::invalid_argument("energy_identity_residual: malformed trajectory");

    const GridSpec& g = tr.config.grid;
    const auto wt = weight_tables(g, w, localized, x0);

    const size_t n = tr.snapshots.size();
    std::vector<SnapshotTerms> terms(n);
    for (size_t i = 0; i < n; ++i) terms[i] = identity_terms(tr, i, id, wt);

    EnergyReport rep;
    rep.identity = id;
    rep.weight = w.to_string();
    rep.x0 = localized ? x0 : 0.0;
    rep.term_names = {"ddt", "trace", "flux", "third", "rhs"};
    rep.terms.assign(5, {});

    double max_term = 0.0;
    for (size_t i = 1; i + 1 < n; ++i) {
        const double dE =
            (terms[i + 1].energy - terms[i - 1].energy) / (tr.snap_times[i + 1] - tr.snap_times[i - 1]);
        const double res = dE + terms[i].trace + terms[i].flux - terms[i].third - terms[i].rhs;
        rep.times.push_back(tr.snap_times[i]);
        rep.terms[0].push_back(dE);
        rep.terms[1].push_back(terms[i].trace);
        rep.terms[2].push_back(terms[i].flux);
        rep.terms[3].push_back(terms[i].third);
        rep.terms[4].push_back(terms[i].rhs);
        rep.residual.push_back(res);
        for (int k = 0; k < 5; ++k) max_term = std::max(max_term, std::abs(rep.terms[k].back()));
    }
    double max_res = 0.0;
    for (double r : rep.residual) max_res = std::max(max_res, std::abs(r));
    rep.relative_residual = (max_term > 0.0) ? max_res / max_term : 0.0;
    return rep;
}

double steklov_check(std::span<const double> psi, std::span<const double> dpsi, double L, int sigma) {
    if (sigma != 1 && sigma != 4) throw std::invalid_argument("steklov_check: sigma must be 1 or 4");
    const size_t n = psi.size();
    if (n < 3 || n % 2 == 0 || dpsi.size() != n)
        throw std::invalid_argument("steklov_check: need matching odd-length sample arrays");
    double scale = 0.0;
    for (double v : psi) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    const double tol = 1e-10 * scale;
    if (std::abs(psi.front()) > tol)
        throw std::invalid_argument("steklov_check: psi(0) must vanish for this class");
    if (sigma == 1 && std::abs(psi.back()) > tol)
        throw std::invalid_argument("steklov_check: psi(L) must vanish for sigma = 1");

    const double h = L / static_cast<double>(n - 1);
    auto simpson = [&](std::span<const double> f) {
        double acc = f.front() * f.front() + f.back() * f.back();
        for (size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i] * f[i];
        return acc * h / 3.0;
    };
    const double num = simpson(psi);
    const double den = simpson(dpsi);
    if (den == 0.0) return 0.0;
    return num / ((sigma * L * L / (M_PI * M_PI)) * den);
}

namespace {

// ||phi rho^(1/2)||_{L2}^2 and || |D phi| rho^(1/2) ||_{L2}^2 in mode space
double l2w_sq(const ModeField& m, const GridSpec& g, const std::vector<double>& rho) {
    std::vector<double> tmp(g.nx);
    double acc = 0.0;
    for (int l = 0; l < g.n_modes(); ++l) {
        auto c = m.profile(l);
        for (int i = 0; i < g.nx; ++i) tmp[i] = c[i] * c[i];
        acc += trapz(g, tmp, rho);
    }
    return acc;
}

double grad_sq(const ModeField& m, const GridSpec& g, const std::vector<double>& rho) {
    std::vector<double> tmp(g.nx);
    double acc = 0.0;
    for (int l = 0; l < g.n_modes(); ++l) {
        const double lam = g.basis.lambda(l);
        auto c = m.profile(l);
        auto c1 = diff_x(c, g.dx(), 1);
        for (int i = 0; i < g.nx; ++i) tmp[i] = c1[i] * c1[i] + lam * c[i] * c[i];
        acc += trapz(g, tmp, rho);
    }
    return acc;
}

}  // namespace

InterpolationReport interpolation_ratio_monitor(const std::vector<Field2D>& fields, const GridSpec& grid,
                                                InterpIneq ineq, const WeightFunction& rho1,
                                                const WeightFunction& rho2) {
    InterpolationReport rep;
    rep.ineq = ineq;
    std::vector<double> r1(grid.nx), r2(grid.nx), r1p(grid.nx);
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        r1[i] = rho1.eval(x, 0);
        r2[i] = rho2.eval(x, 0);
        r1p[i] = rho1.eval(x, 1);
    }
    const double wy = grid.basis.quad_weight();

    for (const auto& phi : fields) {
        ModeField m = grid.basis.to_modes(phi);
        double lhs = 0.0, denom = 0.0;
        switch (ineq) {
            case InterpIneq::I110: {
                double l4 = 0.0;
                for (int i = 0; i < grid.nx; ++i) {
                    double row = 0.0;
                    for (int j = 0; j < grid.ny(); ++j) row += std::pow(phi.at(i, j), 4);
                    l4 += trap_w(grid, i) * wy * row * r1[i] * r2[i];
                }
                lhs = std::pow(l4, 0.25);
                const double t1 = std::sqrt(grad_sq(m, grid, r1));
                const double t2 = std::sqrt(l2w_sq(m, grid, r2));
                denom = std::sqrt(t1) * std::sqrt(t2) + t2;
                break;
            }
            case InterpIneq::I111: {
                for (int l = 0; l < grid.n_modes(); ++l) lhs += m.at(0, l) * m.at(0, l);
                std::vector<double> tmp(grid.nx);
                double gx = 0.0;
                for (int l = 0; l < grid.n_modes(); ++l) {
                    auto c1 = diff_x(m.profile(l), grid.dx(), 1);
                    for (int i = 0; i < grid.nx; ++i) tmp[i] = c1[i] * c1[i];
                    gx += trapz(grid, tmp, r1p);
                }
                const double e = l2w_sq(m, grid, r1);
                denom = std::sqrt(gx) * std::sqrt(e) + e;
                break;
            }
            case InterpIneq::I112: {
                for (int i = 0; i < grid.nx; ++i) {
                    const double rs = std::sqrt(r1[i]);
                    for (int j = 0; j < grid.ny(); ++j) lhs = std::max(lhs, std::abs(phi.at(i, j)) * rs);
                }
                denom = weighted_norm(phi, grid, rho1, 2);
                break;
            }
        }
        const double ratio = (denom > 0.0) ? lhs / denom : 0.0;
        rep.ratios.push_back(ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    return rep;
}

std::vector<Field2D> monitor_field_family(const GridSpec& grid, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> center(0.15 * grid.x_max, 0.5 * grid.x_max);
    std::uniform_real_distribution<double> width(0.5, 1.5);
    std::vector<Field2D> out;
    out.reserve(count);
    for (int f = 0; f < count; ++f) {
        ModeField m(grid.nx, grid.n_modes());
        for (int l = 0; l < grid.n_modes(); ++l) {
            const double a = gauss(rng) * std::exp(-0.5 * l);
            const double xc = center(rng);
            const double wd = width(rng);
            for (int i = 0; i < grid.nx; ++i)
                m.at(i, l) = a * std::exp(-std::pow((grid.x(i) - xc) / wd, 2));
        }
        out.push_back(grid.basis.from_modes(m));
    }
    return out;
}

DecayParams decay_params(BCCase bc, double L, double b, double alpha) {
    if (bc != BCCase::DirichletDirichlet && bc != BCCase::DirichletNeumann)
        throw std::invalid_argument("decay_params: the decay theorem covers cases a and c only");
    if (L <= 0.0 || alpha <= 0.0) throw std::invalid_argument("decay_params: need L > 0 and alpha > 0");
    DecayParams p;
    p.bc = bc;
    p.L = L;
    p.b = b;
    p.sigma = (bc == BCCase::DirichletDirichlet) ? 1 : 4;
    p.c0 = M_PI * M_PI / (2.0 * p.sigma);
    p.L0 = (b > 0.0) ? 0.5 * std::sqrt(p.c0 / b) : std::numeric_limits<double>::infinity();
    p.alpha0 = std::sqrt(p.c0) / (8.0 * L);
    p.beta = p.c0 / (4.0 * L * L);
    p.alpha = alpha;
    p.admissible = (alpha <= p.alpha0) && (L < p.L0);
    p.eps0_policy =
        "smallness threshold eps0 left implicit: amplitude is a config knob; decay runs use 1e-3 "
        "and report the observed margin";
    return p;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> e, double window_lo,
                   double window_hi, double rate, double tol) {
    if (t.size() != e.size() || t.size() < 2) throw std::invalid_argument("fit_decay: malformed series");
    double st = 0.0, sy = 0.0;
    int n = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_lo || t[i] > window_hi) continue;
        if (!(e[i] > 0.0)) throw std::domain_error("fit_decay: non-positive energy inside the fit window");
        st += t[i];
        sy += std::log(e[i]);
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_decay: fewer than two samples in the window");
    const double tbar = st / n, ybar = sy / n;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_lo || t[i] > window_hi) continue;
        num += (t[i] - tbar) * (std::log(e[i]) - ybar);
        den += (t[i] - tbar) * (t[i] - tbar);
    }
    DecayFit fit;
    fit.gamma = (den > 0.0) ? -num / den : 0.0;

    const double e0 = e.front();
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (size_t i = 0; i < t.size(); ++i) {
        const double bound = e0 * std::exp(-rate * (t[i] - t.front()));
        if (bound == 0.0) {
            ok = ok && e[i] == 0.0;
            continue;
        }
        const double v = e[i] / bound - 1.0;
        worst = std::max(worst, v);
        ok = ok && v <= tol;
    }
    fit.max_violation = worst;
    fit.bound_ok = ok;
    return fit;
}

double interior_norm(const Field2D& u, const GridSpec& grid, double x0, double y0,
                     const WeightFunction& w, int ax, int ay) {
    if (ax < 0 || ay < 0 || ax + ay > 4)
        throw std::invalid_argument("interior_norm: derivative multi-index limited to |a| <= 4");
    if (ax > 4) throw std::invalid_argument("interior_norm: x-derivative order beyond resolved range");
    if (!(y0 >= 0.0) || y0 >= grid.L / 2.0)
        throw std::domain_error("interior_norm: need 0 <= y0 < L/2");
    if (x0 < 0.0 || x0 >= grid.x_max) throw std::domain_error("interior_norm: x0 outside the grid");

    const double dx = grid.dx();
    ModeField m = grid.basis.to_modes(u);

    int i0 = 0;
    while (i0 < grid.nx && grid.x(i0) < x0 - 1e-12) ++i0;
    auto wx = [&](int i) { return (i == i0 || i == grid.nx - 1) ? 0.5 * dx : dx; };

    std::vector<std::vector<double>> cd(grid.n_modes());
    for (int l = 0; l < grid.n_modes(); ++l) {
        auto c = m.profile(l);
        cd[l] = (ax == 0) ? c : diff_x(c, dx, ax);
    }

    double acc = 0.0;
    if (y0 == 0.0) {
        // exact in modes over the full transverse section
        for (int l = 0; l < grid.n_modes(); ++l) {
            const double lam_pow = std::pow(grid.basis.lambda(l), ay);
            for (int i = i0; i < grid.nx; ++i)
                acc += wx(i) * w.eval(grid.x(i), 0) * lam_pow * cd[l][i] * cd[l][i];
        }
    } else {
        const auto& nodes = grid.basis.nodes();
        std::vector<int> win;
        for (int j = 0; j < grid.ny(); ++j)
            if (nodes[j] > y0 && nodes[j] < grid.L - y0) win.push_back(j);
        for (int i = i0; i < grid.nx; ++i) {
            const double ww = wx(i) * w.eval(grid.x(i), 0);
            for (int j : win) {
                double v = 0.0;
                for (int l = 0; l < grid.n_modes(); ++l)
                    v += cd[l][i] * grid.basis.psi_deriv(l, nodes[j], ay);
                acc += ww * grid.basis.quad_weight() * v * v;
            }
        }
    }
    return std::sqrt(acc);
}

}  // namespace zk
