#pragma once

#include <array>
#include <string>
#include <vector>

namespace zk {

enum class WeightFamily { Exponential, Power, Constant };

/// Admissible axial weight rho(x) with derivative evaluators up to order 3.
///
/// Families (alpha > 0):
///   Exponential: rho(x) = exp(2*alpha*x) / (2*alpha), so rho' = exp(2*alpha*x)
///   Power:       rho(x) = (1+x)^(2*alpha) / (2*alpha), so rho' = (1+x)^(2*alpha-1)
///   Constant:    rho(x) = 1
class WeightFunction {
public:
    static WeightFunction exponential(double alpha);
    static WeightFunction power(double alpha);
    static WeightFunction constant();

    /// rho^(order)(x) for x >= 0, order in 0..3.
    double eval(double x, int order = 0) const;
    double operator()(double x) const { return eval(x, 0); }

    WeightFamily family() const { return family_; }
    double alpha() const { return alpha_; }

    /// Config-file syntax: "exp:alpha=0.5", "pow:alpha=1.0", "const".
    std::string to_string() const;
    static WeightFunction parse(const std::string& text);

private:
    WeightFunction(WeightFamily f, double a) : family_(f), alpha_(a) {}
    WeightFamily family_;
    double alpha_;
};

/// Measured maxima of |rho^(j)| / rho over a sample set, j = 1..3.
struct AdmissibilityReport {
    std::array<double, 3> max_ratio{};  // index j-1
    double x_max = 0.0;
    int n_samples = 0;
};

AdmissibilityReport check_admissible(const WeightFunction& w, double x_max, int n_samples);

/// Smooth cut-off: eta(x) = 0 for x <= 0, 1 for x >= 1, eta(x) + eta(1-x) = 1.
double cutoff_eta(double x);

/// d^order/dx^order of eta, order in 0..3.
double cutoff_eta_deriv(double x, int order);

/// Shifted cut-off eta_{x0}(x) = eta((2x - x0)/x0); requires x0 > 0.
double eta_x0(double x, double x0);
double eta_x0_deriv(double x, double x0, int order);

/// Weight ladder rho_0..rho_n with slack constant c, used by the interior
/// regularity hypotheses: rho_j(x) <= c * sqrt(rho_j'(x) * rho_{j-1}'(x)).
struct WeightLadder {
    std::vector<WeightFunction> rungs;
    double c = 1.0;
};

struct LadderReport {
    bool ok = false;
    double worst_ratio = 0.0;  // max over samples and j of rho_j / sqrt(rho_j' rho_{j-1}')
    double worst_x = 0.0;
    int worst_j = 0;
};

LadderReport check_ladder(const WeightLadder& ladder, double x_max, int n_samples);

}  // namespace zk
