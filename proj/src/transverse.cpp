#include "zk/transverse.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace zk {

double sin_pi(double x) {
    const double n = std::round(x);
    const double r = x - n;
    double s;
    if (r == 0.0)
        s = 0.0;
    else if (r == 0.5)
        s = 1.0;
    else if (r == -0.5)
        s = -1.0;
    else
        s = std::sin(M_PI * r);
    const bool odd = std::fmod(std::abs(n), 2.0) == 1.0;
    return odd ? -s : s;
}

double cos_pi(double x) {
    const double n = std::round(x);
    const double r = x - n;
    double c;
    if (r == 0.0)
        c = 1.0;
    else if (r == 0.5 || r == -0.5)
        c = 0.0;
    else
        c = std::cos(M_PI * r);
    const bool odd = std::fmod(std::abs(n), 2.0) == 1.0;
    return odd ? -c : c;
}

char bc_to_char(BCCase c) {
    switch (c) {
        case BCCase::DirichletDirichlet: return 'a';
        case BCCase::NeumannNeumann: return 'b';
        case BCCase::DirichletNeumann: return 'c';
        case BCCase::Periodic: return 'd';
    }
    return '?';
}

BCCase bc_from_char(char c) {
    switch (c) {
        case 'a': return BCCase::DirichletDirichlet;
        case 'b': return BCCase::NeumannNeumann;
        case 'c': return BCCase::DirichletNeumann;
        case 'd': return BCCase::Periodic;
        default: throw std::invalid_argument(std::string("unknown BC case '") + c + "': valid tags are a, b, c, d");
    }
}

TransverseBasis TransverseBasis::make(BCCase bc, double L, int n_modes) {
    if (L <= 0.0) throw std::invalid_argument("TransverseBasis: L must be positive");
    if (n_modes < 1) throw std::invalid_argument("TransverseBasis: need at least one mode");
    TransverseBasis b;
    b.bc_ = bc;
    b.L_ = L;
    b.n_modes_ = n_modes;
    switch (bc) {
        case BCCase::DirichletDirichlet:
            // equispaced nodes including the endpoints: the discrete sine
            // transform only sees the interior (psi vanishes at 0 and L), so
            // projection visibly alters samples that violate the Dirichlet
            // condition there
            b.n_y_ = n_modes + 2;
            b.w_ = L / (n_modes + 1);
            for (int j = 0; j < b.n_y_; ++j) b.nodes_.push_back(j * L / (n_modes + 1));
            break;
        case BCCase::NeumannNeumann:
        case BCCase::DirichletNeumann:
            // midpoint nodes: discrete cosine / quarter-wave sine transform
            b.n_y_ = n_modes;
            b.w_ = L / n_modes;
            for (int j = 0; j < b.n_y_; ++j) b.nodes_.push_back((j + 0.5) * L / n_modes);
            break;
        case BCCase::Periodic: {
            // standard periodic grid, sized to keep every mode below Nyquist
            int k_max = n_modes / 2;
            b.n_y_ = 2 * k_max + 2;
            if (b.n_y_ < n_modes) b.n_y_ = n_modes + 1;  // n_modes == 1 corner
            b.w_ = L / b.n_y_;
            for (int j = 0; j < b.n_y_; ++j) b.nodes_.push_back(j * L / b.n_y_);
            break;
        }
    }
    b.psi_mat_.resize(static_cast<size_t>(n_modes) * b.n_y_);
    for (int m = 0; m < n_modes; ++m)
        for (int j = 0; j < b.n_y_; ++j) b.psi_mat_[static_cast<size_t>(m) * b.n_y_ + j] = b.psi(m, b.nodes_[j]);
    return b;
}

TransverseBasis::ModeShape TransverseBasis::shape(int m) const {
    if (m < 0 || m >= n_modes_) throw std::out_of_range("TransverseBasis: mode index out of range");
    const double amp2 = std::sqrt(2.0 / L_);
    const double amp1 = std::sqrt(1.0 / L_);
    switch (bc_) {
        case BCCase::DirichletDirichlet:
            return {static_cast<double>(m + 1), true, amp2};
        case BCCase::NeumannNeumann:
            if (m == 0) return {0.0, false, amp1};
            return {static_cast<double>(m), false, amp2};
        case BCCase::DirichletNeumann:
            return {m + 0.5, true, amp2};
        case BCCase::Periodic: {
            if (m == 0) return {0.0, false, amp1};
            const int k = (m + 1) / 2;
            const bool is_sin = (m % 2 == 0);
            return {2.0 * k, is_sin, amp2};
        }
    }
    return {0.0, false, 0.0};
}

double TransverseBasis::lambda(int m) const {
    const ModeShape s = shape(m);
    const double om = s.nu * M_PI / L_;
    return om * om;
}

int TransverseBasis::norm_index(int m) const {
    const ModeShape s = shape(m);
    switch (bc_) {
        case BCCase::DirichletDirichlet: return m + 1;
        case BCCase::NeumannNeumann: return m;
        case BCCase::DirichletNeumann: return m + 1;
        case BCCase::Periodic: return static_cast<int>(s.nu / 2.0);  // signed index k, squared downstream
    }
    return 0;
}

double TransverseBasis::psi_deriv(int m, double y, int order) const {
    if (order < 0 || order > 4) throw std::invalid_argument("psi_deriv: order must be in 0..4");
    const ModeShape s = shape(m);
    if (s.nu == 0.0) return order == 0 ? s.amp : 0.0;
    const double om = s.nu * M_PI / L_;
    const double q = s.nu * (y / L_);  // argument in units of pi; y == L reduces exactly
    // derivative cycle: sin -> cos -> -sin -> -cos; cos -> -sin -> -cos -> sin
    const int phase = (order + (s.is_sin ? 0 : 1)) % 4;
    double trig;
    switch (phase) {
        case 0: trig = sin_pi(q); break;
        case 1: trig = cos_pi(q); break;
        case 2: trig = -sin_pi(q); break;
        default: trig = -cos_pi(q); break;
    }
    return s.amp * std::pow(om, order) * trig;
}

std::vector<double> TransverseBasis::forward(std::span<const double> samples) const {
    if (static_cast<int>(samples.size()) != n_y_)
        throw std::invalid_argument("forward: sample count does not match the collocation rule");
    std::vector<double> c(n_modes_, 0.0);
    for (int m = 0; m < n_modes_; ++m) {
        const double* row = &psi_mat_[static_cast<size_t>(m) * n_y_];
        double acc = 0.0;
        for (int j = 0; j < n_y_; ++j) acc += row[j] * samples[j];
        c[m] = w_ * acc;
    }
    return c;
}

std::vector<double> TransverseBasis::inverse(std::span<const double> coeffs) const {
    if (static_cast<int>(coeffs.size()) != n_modes_)
        throw std::invalid_argument("inverse: coefficient count does not match n_modes");
    std::vector<double> u(n_y_, 0.0);
    for (int m = 0; m < n_modes_; ++m) {
        const double* row = &psi_mat_[static_cast<size_t>(m) * n_y_];
        const double cm = coeffs[m];
        for (int j = 0; j < n_y_; ++j) u[j] += cm * row[j];
    }
    return u;
}

ModeField TransverseBasis::to_modes(const Field2D& u) const {
    if (u.ny != n_y_) throw std::invalid_argument("to_modes: field height does not match collocation rule");
    ModeField m(u.nx, n_modes_);
    for (int i = 0; i < u.nx; ++i) {
        auto c = forward(std::span<const double>(&u.v[static_cast<size_t>(i) * n_y_], n_y_));
        for (int l = 0; l < n_modes_; ++l) m.at(i, l) = c[l];
    }
    return m;
}

Field2D TransverseBasis::from_modes(const ModeField& m) const {
    if (m.n_modes != n_modes_) throw std::invalid_argument("from_modes: mode count mismatch");
    Field2D u(m.nx, n_y_);
    for (int i = 0; i < m.nx; ++i) {
        auto row = inverse(std::span<const double>(&m.c[static_cast<size_t>(i) * n_modes_], n_modes_));
        for (int j = 0; j < n_y_; ++j) u.at(i, j) = row[j];
    }
    return u;
}

Field2D TransverseBasis::sample_y_deriv(const ModeField& m, int order) const {
    if (m.n_modes != n_modes_) throw std::invalid_argument("sample_y_deriv: mode count mismatch");
    std::vector<double> dmat(static_cast<size_t>(n_modes_) * n_y_);
    for (int l = 0; l < n_modes_; ++l)
        for (int j = 0; j < n_y_; ++j) dmat[static_cast<size_t>(l) * n_y_ + j] = psi_deriv(l, nodes_[j], order);
    Field2D u(m.nx, n_y_);
    for (int i = 0; i < m.nx; ++i)
        for (int l = 0; l < n_modes_; ++l) {
            const double cm = m.at(i, l);
            const double* row = &dmat[static_cast<size_t>(l) * n_y_];
            for (int j = 0; j < n_y_; ++j) u.at(i, j) += cm * row[j];
        }
    return u;
}

Eigenpair eigensystem(BCCase bc, double L, int l) {
    const int min_l = (bc == BCCase::NeumannNeumann || bc == BCCase::Periodic) ? 0 : 1;
    if (l < min_l) throw std::out_of_range("eigensystem: index below the case's range");
    const int m = l - min_l;
    // a throwaway basis large enough to hold mode m
    TransverseBasis b = TransverseBasis::make(bc, L, m + 1);
    return Eigenpair{b.lambda(m), [b, m](double y) { return b.psi(m, y); }};
}

double BoundaryTrace::dt() const {
    if (times.size() < 2) throw std::invalid_argument("BoundaryTrace: need at least two time samples");
    const double d = times[1] - times[0];
    for (size_t i = 1; i + 1 < times.size(); ++i)
        if (std::abs((times[i + 1] - times[i]) - d) > 1e-9 * std::max(1.0, std::abs(d)))
            throw std::invalid_argument("BoundaryTrace: time grid is not uniform");
    return d;
}

double trace_l2(const BoundaryTrace& mu) {
    const double d = mu.dt();
    const double w = mu.basis.quad_weight();
    double acc = 0.0;
    for (double v : mu.samples) acc += v * v;
    return std::sqrt(d * w * acc);
}

double boundary_norm(const BoundaryTrace& mu, double s) {
    const int nt = mu.nt();
    const double dt = mu.dt();
    const int ny = mu.basis.n_y();
    const int nm = mu.basis.n_modes();

    // eigenexpansion in y per time sample
    std::vector<double> g(static_cast<size_t>(nt) * nm);
    for (int i = 0; i < nt; ++i) {
        auto c = mu.basis.forward(std::span<const double>(&mu.samples[static_cast<size_t>(i) * ny], ny));
        for (int l = 0; l < nm; ++l) g[static_cast<size_t>(i) * nm + l] = c[l];
    }

    const int npad = 2 * nt;  // 2x zero padding against periodization
    const double dtheta_over_2pi = 1.0 / (npad * dt);
    double acc = 0.0;
    for (int l = 0; l < nm; ++l) {
        const double idx2 = static_cast<double>(mu.basis.norm_index(l)) * mu.basis.norm_index(l);
        for (int k = 0; k < npad; ++k) {
            const int ks = (k <= npad / 2) ? k : k - npad;
            const double theta = 2.0 * M_PI * ks / (npad * dt);
            std::complex<double> z(0.0, 0.0);
            for (int i = 0; i < nt; ++i) {
                const double ph = -2.0 * M_PI * static_cast<double>(ks) * i / npad;
                z += g[static_cast<size_t>(i) * nm + l] * std::complex<double>(std::cos(ph), std::sin(ph));
            }
            const double amp2 = std::norm(z) * dt * dt;
            if (amp2 == 0.0) continue;  // 0 * inf := 0
            const double wgt = std::pow(std::cbrt(theta * theta) + idx2, s);
            if (!std::isfinite(wgt)) return std::numeric_limits<double>::infinity();
            acc += wgt * amp2 * dtheta_over_2pi;
        }
    }
    return std::sqrt(acc);
}

}  // namespace zk
