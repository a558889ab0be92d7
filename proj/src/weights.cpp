#include "zk/weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zk/errors.hpp"

namespace zk {

namespace {

// Value plus first three derivatives; enough arithmetic to push the cut-off
// quotient through exactly.
struct Jet3 {
    double v[4] = {0, 0, 0, 0};
};

Jet3 operator+(const Jet3& a, const Jet3& b) {
    Jet3 r;
    for (int k = 0; k < 4; ++k) r.v[k] = a.v[k] + b.v[k];
    return r;
}

Jet3 operator/(const Jet3& f, const Jet3& g) {
    // Solve f = q*g by Leibniz, triangularly in the derivative order.
    Jet3 q;
    q.v[0] = f.v[0] / g.v[0];
    q.v[1] = (f.v[1] - q.v[0] * g.v[1]) / g.v[0];
    q.v[2] = (f.v[2] - q.v[0] * g.v[2] - 2 * q.v[1] * g.v[1]) / g.v[0];
    q.v[3] = (f.v[3] - q.v[0] * g.v[3] - 3 * q.v[1] * g.v[2] - 3 * q.v[2] * g.v[1]) / g.v[0];
    return q;
}

// sigma(x) = exp(-1/x) for x > 0, identically 0 otherwise.
Jet3 sigma_jet(double x) {
    Jet3 r;
    if (x <= 0.0) return r;
    const double e = std::exp(-1.0 / x);
    const double u1 = 1.0 / (x * x);          // (-1/x)'
    const double u2 = -2.0 / (x * x * x);     // (-1/x)''
    const double u3 = 6.0 / (x * x * x * x);  // (-1/x)'''
    r.v[0] = e;
    r.v[1] = e * u1;
    r.v[2] = e * (u1 * u1 + u2);
    r.v[3] = e * (u1 * u1 * u1 + 3 * u1 * u2 + u3);
    return r;
}

Jet3 eta_jet(double x) {
    Jet3 r;
    if (x <= 0.0) return r;
    if (x >= 1.0) {
        r.v[0] = 1.0;
        return r;
    }
    Jet3 a = sigma_jet(x);
    Jet3 b = sigma_jet(1.0 - x);
    b.v[1] = -b.v[1];  // chain rule for the reflected argument
    b.v[3] = -b.v[3];
    return a / (a + b);
}

void require_order(int order) {
    if (order < 0 || order > 3) throw std::invalid_argument("weight/cutoff derivative order must be in 0..3");
}

}  // namespace

WeightFunction WeightFunction::exponential(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("exponential weight requires alpha > 0");
    return WeightFunction(WeightFamily::Exponential, alpha);
}

WeightFunction WeightFunction::power(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("power weight requires alpha > 0");
    return WeightFunction(WeightFamily::Power, alpha);
}

WeightFunction WeightFunction::constant() { return WeightFunction(WeightFamily::Constant, 0.0); }

double WeightFunction::eval(double x, int order) const {
    require_order(order);
    if (x < 0.0) throw std::domain_error("weight functions are defined for x >= 0");
    switch (family_) {
        case WeightFamily::Constant:
            return order == 0 ? 1.0 : 0.0;
        case WeightFamily::Exponential: {
            const double rho = std::exp(2.0 * alpha_ * x) / (2.0 * alpha_);
            return std::pow(2.0 * alpha_, order) * rho;
        }
        case WeightFamily::Power: {
            const double p = 2.0 * alpha_;
            double coef = 1.0 / p;
            for (int k = 0; k < order; ++k) coef *= (p - k);
            return coef * std::pow(1.0 + x, p - order);
        }
    }
    return 0.0;
}

std::string WeightFunction::to_string() const {
    std::ostringstream os;
    switch (family_) {
        case WeightFamily::Constant:
            os << "const";
            break;
        case WeightFamily::Exponential:
            os << "exp:alpha=" << alpha_;
            break;
        case WeightFamily::Power:
            os << "pow:alpha=" << alpha_;
            break;
    }
    return os.str();
}

WeightFunction WeightFunction::parse(const std::string& text) {
    if (text == "const") return constant();
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string fam = text.substr(0, colon);
        const std::string rest = text.substr(colon + 1);
        if (rest.rfind("alpha=", 0) == 0) {
            size_t pos = 0;
            const std::string num = rest.substr(6);
            double a = std::stod(num, &pos);
            if (pos == num.size()) {
                if (fam == "exp") return exponential(a);
                if (fam == "pow") return power(a);
            }
        }
    }
    throw std::invalid_argument("bad weight spec '" + text + "' (expected exp:alpha=A, pow:alpha=A, or const)");
}

AdmissibilityReport check_admissible(const WeightFunction& w, double x_max, int n_samples) {
    if (x_max <= 0.0) throw std::invalid_argument("check_admissible: x_max must be positive");
    if (n_samples < 2) throw std::invalid_argument("check_admissible: need at least 2 samples");
    AdmissibilityReport rep;
    rep.x_max = x_max;
    rep.n_samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        const double x = x_max * static_cast<double>(i) / (n_samples - 1);
        const double rho = w.eval(x, 0);
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw std::runtime_error("admissibility violation: rho(x) <= 0 at x = " + std::to_string(x));
        for (int j = 1; j <= 3; ++j) {
            const double ratio = std::abs(w.eval(x, j)) / rho;
            rep.max_ratio[j - 1] = std::max(rep.max_ratio[j - 1], ratio);
        }
    }
    return rep;
}

double cutoff_eta(double x) { return eta_jet(x).v[0]; }

double cutoff_eta_deriv(double x, int order) {
    require_order(order);
    return eta_jet(x).v[order];
}

double eta_x0(double x, double x0) { return eta_x0_deriv(x, x0, 0); }

double eta_x0_deriv(double x, double x0, int order) {
    require_order(order);
    if (x0 <= 0.0) throw std::domain_error("eta_x0 requires x0 > 0");
    const double scale = 2.0 / x0;
    return std::pow(scale, order) * cutoff_eta_deriv((2.0 * x - x0) / x0, order);
}

LadderReport check_ladder(const WeightLadder& ladder, double x_max, int n_samples) {
    if (ladder.rungs.empty()) throw std::invalid_argument("check_ladder: empty ladder");
    if (x_max <= 0.0 || n_samples < 2) throw std::invalid_argument("check_ladder: bad sampling parameters");
    for (const auto& rung : ladder.rungs)
        if (rung.family() == WeightFamily::Constant)
            throw IllPosedLadderError("check_ladder: constant weight (rho' == 0) is rejected inside ladders");
    LadderReport rep;
    for (size_t j = 1; j < ladder.rungs.size(); ++j) {
        const auto& hi = ladder.rungs[j];
        const auto& lo = ladder.rungs[j - 1];
        for (int i = 0; i < n_samples; ++i) {
            const double x = x_max * static_cast<double>(i) / (n_samples - 1);
            const double dj = hi.eval(x, 1);
            const double dj1 = lo.eval(x, 1);
            if (dj <= 0.0 || dj1 <= 0.0)
                throw IllPosedLadderError("check_ladder: rung with non-positive rho' at x = " + std::to_string(x));
            const double ratio = hi.eval(x, 0) / std::sqrt(dj * dj1);
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_x = x;
                rep.worst_j = static_cast<int>(j);
            }
        }
    }
    rep.ok = rep.worst_ratio <= ladder.c;
    return rep;
}

}  // namespace zk
