#include "jetadv/classic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>

namespace jetadv {

namespace {

using cplx = std::complex<double>;

void require_cfl(double mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::invalid_cfl, "need 0 < mu < 1");
}

void require_size(int m, int min_m, const char* what) {
    if (m < min_m)
        throw Error(ErrorCode::grid_too_small, std::string(what) + " needs m >= " + std::to_string(min_m));
}

inline std::size_t wrap(std::ptrdiff_t j, std::size_t m) {
    const auto mm = static_cast<std::ptrdiff_t>(m);
    return static_cast<std::size_t>(((j % mm) + mm) % mm);
}

}  // namespace

double NodalState::mean() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}
double NodalState::max() const { return *std::max_element(values.begin(), values.end()); }
double NodalState::min() const { return *std::min_element(values.begin(), values.end()); }

double Stencil::sum() const { return std::accumulate(coeffs.begin(), coeffs.end(), 0.0); }

Stencil Stencil::identity() { return Stencil{0, {1.0}}; }

Stencil Stencil::operator*(const Stencil& other) const {
    Stencil out{half_width + other.half_width, {}};
    out.coeffs.assign(2 * static_cast<std::size_t>(out.half_width) + 1, 0.0);
    for (int a = -half_width; a <= half_width; ++a)
        for (int b = -other.half_width; b <= other.half_width; ++b)
            out.coeffs[static_cast<std::size_t>(a + b + out.half_width)] += at(a) * other.at(b);
    return out;
}

Stencil Stencil::operator+(const Stencil& other) const {
    Stencil out{std::max(half_width, other.half_width), {}};
    out.coeffs.assign(2 * static_cast<std::size_t>(out.half_width) + 1, 0.0);
    for (int a = -half_width; a <= half_width; ++a) out.coeffs[static_cast<std::size_t>(a + out.half_width)] += at(a);
    for (int b = -other.half_width; b <= other.half_width; ++b)
        out.coeffs[static_cast<std::size_t>(b + out.half_width)] += other.at(b);
    return out;
}

Stencil Stencil::scaled(double f) const {
    Stencil out = *this;
    for (double& c : out.coeffs) c *= f;
    return out;
}

std::complex<double> symbol(const Stencil& s, double omega) {
    cplx g = 0.0;
    for (int nu = -s.half_width; nu <= s.half_width; ++nu) g += s.at(nu) * std::polar(1.0, nu * omega);
    return g;
}

bool CirculantScheme::is_explicit() const { return lhs.half_width == 0 && lhs.coeffs == std::vector<double>{1.0}; }

int CirculantScheme::half_width() const { return std::max(rhs.half_width, lhs.half_width); }

std::complex<double> CirculantScheme::amplification(double omega) const {
    return symbol(rhs, omega) / symbol(lhs, omega);
}

CirculantScheme make_stencil(StencilKind kind, double mu) {
    require_cfl(mu);
    switch (kind) {
    case StencilKind::upwind:
        return CirculantScheme{"upwind", LinearKind::upwind, mu, Stencil{1, {mu, 1.0 - mu, 0.0}}, Stencil::identity()};
    case StencilKind::lax_wendroff:
        return CirculantScheme{"lw", LinearKind::lax_wendroff, mu,
                               Stencil{1, {0.5 * mu * (1.0 + mu), 1.0 - mu * mu, -0.5 * mu * (1.0 - mu)}},
                               Stencil::identity()};
    }
    throw Error(ErrorCode::invalid_argument, "unknown stencil kind");
}

CirculantScheme make_ssprk3_central2(double mu) {
    require_cfl(mu);
    const Stencil id = Stencil::identity();
    // dt * L(u)_j = -mu/2 (u_{j+1} - u_{j-1})
    const Stencil d{1, {0.5 * mu, 0.0, -0.5 * mu}};
    const Stencil euler = id + d;
    const Stencil stage2 = id.scaled(0.75) + (euler * euler).scaled(0.25);
    const Stencil stage3 = id.scaled(1.0 / 3.0) + (euler * stage2).scaled(2.0 / 3.0);
    return CirculantScheme{"ssp-central2", LinearKind::ssprk3_central2, mu, stage3, id};
}

CirculantScheme make_cn_central4(double mu) {
    require_cfl(mu);
    // dt * a * u_x with the fourth-order central difference, as a stencil in nu = -2..2
    const Stencil a{2, {mu / 12.0, -8.0 * mu / 12.0, 0.0, 8.0 * mu / 12.0, -mu / 12.0}};
    const Stencil id = Stencil::identity();
    return CirculantScheme{"cn-central4", LinearKind::cn_central4, mu, id + a.scaled(-0.5), id + a.scaled(0.5)};
}

CirculantScheme make_linear(LinearKind kind, double mu) {
    switch (kind) {
    case LinearKind::upwind: return make_stencil(StencilKind::upwind, mu);
    case LinearKind::lax_wendroff: return make_stencil(StencilKind::lax_wendroff, mu);
    case LinearKind::ssprk3_central2: return make_ssprk3_central2(mu);
    case LinearKind::cn_central4: return make_cn_central4(mu);
    }
    throw Error(ErrorCode::invalid_argument, "unknown linear scheme");
}

std::complex<double> amplification(LinearKind kind, double mu, double omega) {
    const cplx i{0.0, 1.0};
    switch (kind) {
    case LinearKind::upwind:
        return 1.0 - mu * (1.0 - std::polar(1.0, -omega));
    case LinearKind::lax_wendroff:
        return 1.0 - mu * mu * (1.0 - std::cos(omega)) - i * mu * std::sin(omega);
    case LinearKind::ssprk3_central2: {
        const double mu2 = mu * mu;
        const double mu3 = mu2 * mu;
        const double re = 1.0 - 0.25 * mu2 * (1.0 - std::cos(2.0 * omega));
        const double im = -(mu3 / 24.0 * std::sin(3.0 * omega) + (mu - mu3 / 8.0) * std::sin(omega));
        return {re, im};
    }
    case LinearKind::cn_central4: {
        const double z = 2.0 * mu / 3.0 * std::sin(omega) - mu / 12.0 * std::sin(2.0 * omega);
        return (1.0 - i * z) / (1.0 + i * z);
    }
    }
    throw Error(ErrorCode::invalid_argument, "unknown linear scheme");
}

CirculantStepper::CirculantStepper(const CirculantScheme& scheme, int m) : scheme_(scheme), m_(m) {
    require_size(m, 2 * scheme.half_width() + 1, scheme.name.c_str());
    kernel_.assign(static_cast<std::size_t>(m), 0.0);
    if (scheme.is_explicit()) {
        for (int nu = -scheme.rhs.half_width; nu <= scheme.rhs.half_width; ++nu)
            kernel_[wrap(nu, kernel_.size())] += scheme.rhs.at(nu);
    } else {
        // kernel_k = (1/m) sum_j lambda_j exp(-2 pi i j k / m)
        std::vector<cplx> lambda(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) lambda[j] = scheme.amplification(2.0 * std::numbers::pi * j / m);
        for (int k = 0; k < m; ++k) {
            cplx acc = 0.0;
            for (int j = 0; j < m; ++j) {
                const auto phase = static_cast<double>((static_cast<long long>(j) * k) % m);
                acc += lambda[j] * std::polar(1.0, -2.0 * std::numbers::pi * phase / m);
            }
            kernel_[k] = acc.real() / m;
        }
    }
    for (int k = 0; k < m; ++k)
        if (kernel_[k] != 0.0) support_.push_back(k);
}

void CirculantStepper::step_in_place(std::vector<double>& u, std::vector<double>& scratch) const {
    if (static_cast<int>(u.size()) != m_) throw Error(ErrorCode::invalid_argument, "state size does not match stepper");
    scratch.assign(u.size(), 0.0);
    const auto m = u.size();
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k : support_) {
            std::size_t idx = j + static_cast<std::size_t>(k);
            if (idx >= m) idx -= m;
            acc += kernel_[static_cast<std::size_t>(k)] * u[idx];
        }
        scratch[j] = acc;
    }
    u.swap(scratch);
}

NodalState CirculantStepper::step(const NodalState& u) const {
    NodalState out = u;
    std::vector<double> scratch;
    step_in_place(out.values, scratch);
    return out;
}

NodalState step_circulant(const CirculantScheme& scheme, const NodalState& u) {
    return CirculantStepper(scheme, u.m()).step(u);
}

namespace {

// dt * L(u) for the second-order central difference.
void central2_rate(double mu, const std::vector<double>& u, std::vector<double>& out) {
    const std::size_t m = u.size();
    out.resize(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = -0.5 * mu * (u[j + 1 == m ? 0 : j + 1] - u[j == 0 ? m - 1 : j - 1]);
}

template <typename Rate>
NodalState ssprk3(const NodalState& u, Rate&& rate) {
    const std::size_t m = u.values.size();
    std::vector<double> r, u1(m), u2(m);
    NodalState out{std::vector<double>(m)};
    rate(u.values, r);
    for (std::size_t j = 0; j < m; ++j) u1[j] = u.values[j] + r[j];
    rate(u1, r);
    for (std::size_t j = 0; j < m; ++j) u2[j] = 0.75 * u.values[j] + 0.25 * (u1[j] + r[j]);
    rate(u2, r);
    for (std::size_t j = 0; j < m; ++j) out.values[j] = u.values[j] / 3.0 + 2.0 / 3.0 * (u2[j] + r[j]);
    return out;
}

}  // namespace

NodalState step_ssprk3_central2(double mu, const NodalState& u) {
    require_cfl(mu);
    require_size(u.m(), 7, "ssp-central2");
    return ssprk3(u, [mu](const std::vector<double>& v, std::vector<double>& r) { central2_rate(mu, v, r); });
}

NodalState step_cn_central4(double mu, const NodalState& u) {
    require_size(u.m(), 5, "cn-central4");
    return CirculantStepper(make_cn_central4(mu), u.m()).step(u);
}

SpectrumReport spectrum(const CirculantScheme& scheme, int m, double tol) {
    require_size(m, 2 * scheme.half_width() + 1, scheme.name.c_str());
    SpectrumReport rep{std::vector<cplx>(static_cast<std::size_t>(m)), {}, tol};
    const auto dft = [m](const Stencil& s, int j) {
        cplx acc = 0.0;
        for (int nu = -s.half_width; nu <= s.half_width; ++nu) {
            const auto k = static_cast<double>(wrap(static_cast<std::ptrdiff_t>(nu) * j, static_cast<std::size_t>(m)));
            acc += s.at(nu) * std::polar(1.0, 2.0 * std::numbers::pi * k / m);
        }
        return acc;
    };
    for (int j = 0; j < m; ++j) {
        rep.eigenvalues[j] = dft(scheme.rhs, j) / dft(scheme.lhs, j);
        if (std::abs(std::abs(rep.eigenvalues[j]) - 1.0) <= tol) rep.unit_set.push_back(j);
    }
    return rep;
}

void write_csv(std::ostream& out, const SpectrumReport& report) {
    out << "j,re,im,abs\n";
    char buf[128];
    for (std::size_t j = 0; j < report.eigenvalues.size(); ++j) {
        const cplx l = report.eigenvalues[j];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", j, l.real(), l.imag(), std::abs(l));
        out << buf;
    }
}

double limiter_value(Limiter limiter, double theta) noexcept {
    switch (limiter) {
    case Limiter::van_leer: return (theta + std::abs(theta)) / (1.0 + std::abs(theta));
    case Limiter::superbee: return std::max({0.0, std::min(1.0, 2.0 * theta), std::min(2.0, theta)});
    }
    return 0.0;
}

double smoothness_ratio(double upwind_jump, double local_jump) noexcept {
    constexpr double large = 1e300;
    if (std::abs(local_jump) > 1e-300) return upwind_jump / local_jump;
    if (upwind_jump == 0.0) return 1.0;
    return std::copysign(large, upwind_jump);
}

NodalState step_lw_limited(double mu, const NodalState& u, Limiter limiter) {
    require_cfl(mu);
    require_size(u.m(), 3, "limited Lax-Wendroff");
    const auto& v = u.values;
    const std::size_t m = v.size();
    // Limited correction at interface j-1/2, i.e. between v[j-1] and v[j].
    std::vector<double> corr(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double local = v[j] - v[wrap(static_cast<std::ptrdiff_t>(j) - 1, m)];
        const double upwind = v[wrap(static_cast<std::ptrdiff_t>(j) - 1, m)] - v[wrap(static_cast<std::ptrdiff_t>(j) - 2, m)];
        corr[j] = limiter_value(limiter, smoothness_ratio(upwind, local)) * local;
    }
    const double c = 0.5 * mu * (1.0 - mu);
    NodalState out{std::vector<double>(m)};
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jm = j == 0 ? m - 1 : j - 1;
        const std::size_t jp = j + 1 == m ? 0 : j + 1;
        out.values[j] = v[j] - mu * (v[j] - v[jm]) - c * (corr[jp] - corr[j]);
    }
    return out;
}

namespace {

// Left-biased fifth-order WENO value at j+1/2 from u_{j-2..j+2}.
double weno5_face(double um2, double um1, double u0, double up1, double up2) noexcept {
    constexpr double eps = 1e-6;
    const double q0 = (2.0 * um2 - 7.0 * um1 + 11.0 * u0) / 6.0;
    const double q1 = (-um1 + 5.0 * u0 + 2.0 * up1) / 6.0;
    const double q2 = (2.0 * u0 + 5.0 * up1 - up2) / 6.0;
    const double b0 = 13.0 / 12.0 * (um2 - 2.0 * um1 + u0) * (um2 - 2.0 * um1 + u0) +
                      0.25 * (um2 - 4.0 * um1 + 3.0 * u0) * (um2 - 4.0 * um1 + 3.0 * u0);
    const double b1 = 13.0 / 12.0 * (um1 - 2.0 * u0 + up1) * (um1 - 2.0 * u0 + up1) + 0.25 * (um1 - up1) * (um1 - up1);
    const double b2 = 13.0 / 12.0 * (u0 - 2.0 * up1 + up2) * (u0 - 2.0 * up1 + up2) +
                      0.25 * (3.0 * u0 - 4.0 * up1 + up2) * (3.0 * u0 - 4.0 * up1 + up2);
    const double a0 = 0.1 / ((eps + b0) * (eps + b0));
    const double a1 = 0.6 / ((eps + b1) * (eps + b1));
    const double a2 = 0.3 / ((eps + b2) * (eps + b2));
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

void weno5_rate(double mu, const std::vector<double>& u, std::vector<double>& out) {
    const std::size_t m = u.size();
    std::vector<double> face(m);  // face[j] = value at j+1/2
    for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        face[j] = weno5_face(u[wrap(jj - 2, m)], u[wrap(jj - 1, m)], u[j], u[wrap(jj + 1, m)], u[wrap(jj + 2, m)]);
    }
    out.resize(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = -mu * (face[j] - face[j == 0 ? m - 1 : j - 1]);
}

}  // namespace

NodalState step_weno5(double mu, const NodalState& u) {
    require_cfl(mu);
    require_size(u.m(), 7, "weno5");
    return ssprk3(u, [mu](const std::vector<double>& v, std::vector<double>& r) { weno5_rate(mu, v, r); });
}

double empirical_limsup(LinearKind kind, double mu, double omega, int n_max) {
    if (n_max < 1) throw Error(ErrorCode::invalid_argument, "n_max must be >= 1");
    const cplx g = amplification(kind, mu, omega);
    cplx power = 1.0;
    double best = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        power *= g;
        best = std::max(best, std::abs(power - std::polar(1.0, -omega * n * mu)));
    }
    return best;
}

double total_variation(const NodalState& u) {
    double tv = 0.0;
    const std::size_t m = u.values.size();
    for (std::size_t j = 0; j < m; ++j) tv += std::abs(u.values[j + 1 == m ? 0 : j + 1] - u.values[j]);
    return tv;
}

}  // namespace jetadv
