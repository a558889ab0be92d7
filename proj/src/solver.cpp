#include "zk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zk/errors.hpp"

namespace zk {

Inflow Inflow::zero() { return Inflow{}; }

Inflow Inflow::from_function(std::function<double(double, double)> fn) {
    Inflow m;
    m.kind_ = Kind::Function;
    m.fn_ = std::move(fn);
    return m;
}

Inflow Inflow::from_trace(BoundaryTrace trace) {
    trace.dt();  // validates uniformity
    Inflow m;
    m.kind_ = Kind::Trace;
    m.trace_ = std::make_shared<const BoundaryTrace>(std::move(trace));
    return m;
}

double Inflow::eval(double t, double y) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Function:
            return fn_(t, y);
        case Kind::Trace: {
            const auto& tr = *trace_;
            const double dt = tr.dt();
            const double s = (t - tr.times.front()) / dt;
            const int i0 = std::clamp(static_cast<int>(std::floor(s)), 0, tr.nt() - 2);
            const double a = std::clamp(s - i0, 0.0, 1.0);
            // nearest-node y lookup: the caller samples at collocation nodes
            const auto& nodes = tr.basis.nodes();
            int j = 0;
            double best = std::abs(nodes[0] - y);
            for (int k = 1; k < tr.basis.n_y(); ++k) {
                const double d = std::abs(nodes[k] - y);
                if (d < best) {
                    best = d;
                    j = k;
                }
            }
            return (1.0 - a) * tr.at(i0, j) + a * tr.at(i0 + 1, j);
        }
    }
    return 0.0;
}

double discrete_l2(const Field2D& u, const GridSpec& grid) {
    const double wy = grid.basis.quad_weight();
    const double dx = grid.dx();
    double acc = 0.0;
    for (int i = 0; i < u.nx; ++i) {
        const double wx = (i == 0 || i == u.nx - 1) ? 0.5 * dx : dx;
        double row = 0.0;
        for (int j = 0; j < u.ny; ++j) row += u.at(i, j) * u.at(i, j);
        acc += wx * row;
    }
    return std::sqrt(wy * acc);
}

Solver::Solver(SolverConfig cfg, Inflow mu) : cfg_(std::move(cfg)), mu_(std::move(mu)) {
    const GridSpec& g = cfg_.grid;
    if (cfg_.T < 0.0) throw std::invalid_argument("SolverConfig: T must be non-negative");
    if (cfg_.sponge_peak < 0.0) throw std::invalid_argument("SolverConfig: sponge_peak must be non-negative");
    if (cfg_.sponge_peak > 0.0) {
        const double xs = cfg_.resolved_sponge_start();
        if (!(xs > 0.0) || !(xs < g.x_max))
            throw std::invalid_argument("SolverConfig: sponge start must lie inside (0, x_max)");
        sponge_ = sponge_profile(g, xs, cfg_.sponge_peak);
        // the sponge sits in the explicit part; keep it inside the AB2 region
        if (g.dt * cfg_.sponge_peak > 1.0)
            throw std::invalid_argument("SolverConfig: dt * sponge_peak > 1 destabilizes the explicit sponge");
    }
    lhs_.reserve(g.n_modes());
    a_op_.reserve(g.n_modes());
    for (int l = 0; l < g.n_modes(); ++l) {
        BandedMatrix a = assemble_mode_operator(g.basis.lambda(l), cfg_.b, g);
        BandedMatrix m(g.nx);
        for (int i = 0; i < g.nx; ++i) {
            if (i >= first_interior_row() && i <= last_interior_row(g.nx)) {
                m.set(i, i, 1.0);
                for (int j = std::max(0, i - 2); j <= std::min(g.nx - 1, i + 2); ++j)
                    m.add(i, j, 0.5 * g.dt * a.get(i, j));
            } else {
                for (int j = std::max(0, i - 2); j <= std::min(g.nx - 1, i + 2); ++j)
                    m.set(i, j, a.get(i, j));
            }
        }
        m.factor();
        lhs_.push_back(std::move(m));
        a_op_.push_back(std::move(a));
    }
}

SolverState Solver::init(const Field2D& u0) const {
    const GridSpec& g = cfg_.grid;
    if (u0.nx != g.nx || u0.ny != g.ny())
        throw std::invalid_argument("Solver::init: u0 shape does not match the grid/basis");

    SolverState s;
    s.t = 0.0;
    s.step = 0;
    ModeField m0 = g.basis.to_modes(u0);
    s.u = g.basis.from_modes(m0);

    Field2D diff = s.u;
    axpy(diff, -1.0, u0);
    const double proj_res = discrete_l2(diff, g);
    const double scale = std::max(discrete_l2(u0, g), 1e-300);
    if (proj_res > 1e-10 * scale) {
        std::ostringstream os;
        os << "initial data altered by basis projection: residual " << proj_res;
        s.warnings.push_back(os.str());
    }

    // order-0 compatibility u0(0, .) = mu(0, .)
    double mism = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        const double d = s.u.at(0, j) - mu_.eval(0.0, g.basis.nodes()[j]);
        mism += d * d;
    }
    mism = std::sqrt(g.basis.quad_weight() * mism);
    if (mism > 1e-8 * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "order-0 compatibility violated: ||u0(0,.) - mu(0,.)|| = " << mism;
        s.warnings.push_back(os.str());
    }

    // stability bound for the explicit convective term
    const double umax = s.u.max_abs();
    if (!cfg_.linear_only && umax > 0.0 && g.dt > cfg_.cfl_c * g.dx() / umax) {
        std::ostringstream os;
        os << "dt violates the startup bound " << cfg_.cfl_c << "*dx/max|u| = " << cfg_.cfl_c * g.dx() / umax;
        throw std::invalid_argument(os.str());
    }
    return s;
}

void Solver::step(SolverState& s) const {
    const GridSpec& g = cfg_.grid;
    const int nx = g.nx;
    const double dt = g.dt;
    const double t_next = s.t + dt;

    // explicit part at time s.t
    Field2D gphys(nx, g.ny(), 0.0);
    if (!cfg_.linear_only) {
        Field2D n = nonlinear_term(s.u, g);
        axpy(gphys, -1.0, n);
    }
    if (!sponge_.empty()) {
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < g.ny(); ++j) gphys.at(i, j) -= sponge_[i] * s.u.at(i, j);
    }
    if (cfg_.forcing) {
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < g.ny(); ++j) gphys.at(i, j) += cfg_.forcing(s.t, g.x(i), g.basis.nodes()[j]);
    }
    if (!gphys.finite()) {
        std::ostringstream os;
        os << "non-finite explicit term at t = " << s.t << " (step " << s.step + 1 << ")";
        throw BlowUpError(s.t, gphys.max_abs(), os.str());
    }
    ModeField ghat = g.basis.to_modes(gphys);

    // inflow coefficients at the new time level
    std::vector<double> gin(g.n_modes(), 0.0);
    if (!mu_.is_zero()) {
        std::vector<double> mu_row(g.ny());
        for (int j = 0; j < g.ny(); ++j) mu_row[j] = mu_.eval(t_next, g.basis.nodes()[j]);
        gin = g.basis.forward(mu_row);
    }

    ModeField uhat = g.basis.to_modes(s.u);
    ModeField unew(nx, g.n_modes());
    std::vector<double> rhs(nx), prof(nx);
    for (int l = 0; l < g.n_modes(); ++l) {
        for (int i = 0; i < nx; ++i) prof[i] = uhat.at(i, l);
        auto au = a_op_[l].matvec(prof);
        for (int i = first_interior_row(); i <= last_interior_row(nx); ++i) {
            double gext = ghat.at(i, l);
            if (s.have_prev) gext = 1.5 * gext - 0.5 * s.g_prev.at(i, l);
            rhs[i] = prof[i] - 0.5 * dt * au[i] + dt * gext;
        }
        rhs[0] = gin[l];
        rhs[nx - 2] = 0.0;
        rhs[nx - 1] = 0.0;
        auto x = lhs_[l].solve(rhs);
        for (int i = 0; i < nx; ++i) unew.at(i, l) = x[i];
    }

    s.u = g.basis.from_modes(unew);
    s.g_prev = std::move(ghat);
    s.have_prev = true;
    s.t = t_next;
    ++s.step;

    const double umax = s.u.max_abs();
    if (!std::isfinite(umax)) {
        std::ostringstream os;
        os << "solution blew up at t = " << s.t << " (step " << s.step << ")";
        throw BlowUpError(s.t, umax, os.str());
    }
}

StepDiag Solver::diagnose(const SolverState& s) const {
    const GridSpec& g = cfg_.grid;
    StepDiag d;
    d.t = s.t;
    d.l2 = discrete_l2(s.u, g);
    d.max_abs = s.u.max_abs();
    d.cfl_ratio = g.dt * d.max_abs / (cfg_.cfl_c * g.dx());
    if (cfg_.diag_exp_alpha) {
        const double a2 = 2.0 * *cfg_.diag_exp_alpha;
        double acc = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double wx = (i == 0 || i == g.nx - 1) ? 0.5 * g.dx() : g.dx();
            double row = 0.0;
            for (int j = 0; j < g.ny(); ++j) row += s.u.at(i, j) * s.u.at(i, j);
            acc += wx * row * std::exp(a2 * g.x(i));
        }
        d.weighted_sq = g.basis.quad_weight() * acc;
    }
    return d;
}

Trajectory Solver::run(const Field2D& u0) const {
    const GridSpec& g = cfg_.grid;
    Trajectory tr;
    tr.config = cfg_;

    SolverState s = init(u0);
    tr.warnings = s.warnings;
    tr.diag.push_back(diagnose(s));
    tr.snap_times.push_back(s.t);
    tr.snapshots.push_back(s.u);

    const long nsteps = std::lround(cfg_.T / g.dt);
    for (long k = 1; k <= nsteps; ++k) {
        step(s);
        tr.diag.push_back(diagnose(s));
        const bool cadence = cfg_.snapshot_every > 0 && (k % cfg_.snapshot_every == 0);
        if (cadence || k == nsteps) {
            tr.snap_times.push_back(s.t);
            tr.snapshots.push_back(s.u);
        }
    }
    return tr;
}

}  // namespace zk
