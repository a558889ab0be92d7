#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zk/field.hpp"
#include "zk/operators.hpp"
#include "zk/transverse.hpp"

namespace zk {

/// Inflow boundary data u(t, 0, y) = mu(t, y).
class Inflow {
public:
    static Inflow zero();
    static Inflow from_function(std::function<double(double t, double y)> fn);
    /// Linear interpolation in t between the trace's time samples (clamped).
    static Inflow from_trace(BoundaryTrace trace);

    double eval(double t, double y) const;
    bool is_zero() const { return kind_ == Kind::Zero; }

private:
    enum class Kind { Zero, Function, Trace };
    Kind kind_ = Kind::Zero;
    std::function<double(double, double)> fn_;
    std::shared_ptr<const BoundaryTrace> trace_;
};

using ForcingFn = std::function<double(double t, double x, double y)>;

/// Time-integration setup: IMEX scheme with Crank-Nicolson on the dispersive
/// part and two-step Adams-Bashforth on the convective term (forward Euler on
/// the first step).
struct SolverConfig {
    double b = 0.0;
    GridSpec grid;
    bool linear_only = false;
    double T = 1.0;
    // long gentle sponge: the reflection diagnostic measures ~1e-2 leftover
    // for a short strong layer (0.8*x_max, peak 10) against ~3e-4 for this one
    double sponge_start = -1.0;  // < 0 selects the default 0.5 * x_max
    double sponge_peak = 2.0;    // 0 disables the sponge
    double cfl_c = 0.5;
    int snapshot_every = 1;  // 0 keeps only the first and last snapshots
    ForcingFn forcing;       // empty means f == 0
    std::optional<double> diag_exp_alpha;  // record int u^2 e^(2 alpha x) per step

    double resolved_sponge_start() const { return sponge_start > 0.0 ? sponge_start : 0.5 * grid.x_max; }
};

struct StepDiag {
    double t = 0.0;
    double l2 = 0.0;
    double max_abs = 0.0;
    double cfl_ratio = 0.0;  // dt * max|u| / (cfl_c * dx)
    double weighted_sq = 0.0;  // int u^2 e^(2 alpha x), when requested
};

struct Trajectory {
    SolverConfig config;
    std::vector<double> snap_times;
    std::vector<Field2D> snapshots;
    std::vector<StepDiag> diag;  // one row per step, including t = 0
    std::vector<std::string> warnings;
};

struct SolverState {
    double t = 0.0;
    long step = 0;
    Field2D u;
    ModeField g_prev;  // previous explicit term, mode space
    bool have_prev = false;
    std::vector<std::string> warnings;
};

class Solver {
public:
    Solver(SolverConfig cfg, Inflow mu);

    /// Project u0 onto the transverse basis; warns (does not fail) on
    /// projection residual or order-0 incompatibility with the inflow data.
    SolverState init(const Field2D& u0) const;

    /// One IMEX step; throws BlowUpError on non-finite values.
    void step(SolverState& s) const;

    Trajectory run(const Field2D& u0) const;

    const SolverConfig& config() const { return cfg_; }

private:
    StepDiag diagnose(const SolverState& s) const;

    SolverConfig cfg_;
    Inflow mu_;
    std::vector<double> sponge_;  // empty when disabled
    mutable std::vector<BandedMatrix> lhs_;  // factored CN matrices per mode
    std::vector<BandedMatrix> a_op_;         // A_l for the explicit half
};

/// Discrete L2 norm over the strip: trapezoid in x, collocation weight in y.
double discrete_l2(const Field2D& u, const GridSpec& grid);

}  // namespace zk
