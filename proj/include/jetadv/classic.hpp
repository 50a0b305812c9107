#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "jetadv/error.hpp"

namespace jetadv {

/// Grid values U_j on the periodic grid.
struct NodalState {
    std::vector<double> values;

    int m() const noexcept { return static_cast<int>(values.size()); }
    double mean() const;
    double max() const;
    double min() const;
};

/// Update stencil U_j^{n+1} = sum_{nu=-s..s} c_nu U_{j+nu}^n.
struct Stencil {
    int half_width = 0;
    std::vector<double> coeffs;  // coeffs[nu + half_width]

    double at(int nu) const { return coeffs.at(static_cast<std::size_t>(nu + half_width)); }
    double sum() const;
    static Stencil identity();
    Stencil operator*(const Stencil& other) const;  // composition (convolution)
    Stencil operator+(const Stencil& other) const;
    Stencil scaled(double f) const;
};

std::complex<double> symbol(const Stencil& s, double omega);

enum class LinearKind { upwind, lax_wendroff, ssprk3_central2, cn_central4 };

/// A linear periodic scheme  lhs * U^{n+1} = rhs * U^n. Explicit schemes have lhs = identity.
struct CirculantScheme {
    std::string name;
    LinearKind kind;
    double mu;
    Stencil rhs;
    Stencil lhs;

    bool is_explicit() const;
    int half_width() const;
    std::complex<double> amplification(double omega) const;  // rhs^(omega) / lhs^(omega)
};

enum class StencilKind { upwind, lax_wendroff };

CirculantScheme make_stencil(StencilKind kind, double mu);
/// SSP-RK3 on the central difference operator, fused into one explicit stencil (s = 3).
CirculantScheme make_ssprk3_central2(double mu);
/// Crank-Nicolson on the fourth-order central difference (implicit, s = 2 on each side).
CirculantScheme make_cn_central4(double mu);
CirculantScheme make_linear(LinearKind kind, double mu);

/// Closed-form amplification factor g(omega), omega = xi*h in [-pi, pi].
std::complex<double> amplification(LinearKind kind, double mu, double omega);

/// Explicit periodic stencil application; requires m > 2s.
NodalState step_circulant(const CirculantScheme& scheme, const NodalState& u);

/// Precomputed one-step operator of a linear scheme on a fixed grid size. For
/// implicit schemes the circulant is inverted by Fourier diagonalization.
class CirculantStepper {
public:
    CirculantStepper(const CirculantScheme& scheme, int m);
    NodalState step(const NodalState& u) const;
    void step_in_place(std::vector<double>& u, std::vector<double>& scratch) const;
    /// Full one-step kernel: U_j^{n+1} = sum_k kernel[k] U_{j+k mod m}.
    const std::vector<double>& kernel() const noexcept { return kernel_; }

private:
    CirculantScheme scheme_;
    int m_;
    std::vector<double> kernel_;
    std::vector<int> support_;
};

NodalState step_ssprk3_central2(double mu, const NodalState& u);
NodalState step_cn_central4(double mu, const NodalState& u);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;  // lambda_j, j = 0..m-1
    std::vector<int> unit_set;                      // indices with |lambda_j| = 1 within tolerance
    double tolerance;
};

/// lambda_j = sum_k c_k omega_m^{kj}, omega_m = exp(2 pi i / m), from the stencil DFT.
SpectrumReport spectrum(const CirculantScheme& scheme, int m, double tol = 1e-10);

void write_csv(std::ostream& out, const SpectrumReport& report);

// Nonlinear schemes.

enum class Limiter { van_leer, superbee };

double limiter_value(Limiter limiter, double theta) noexcept;
/// Ratio of upwind-side to local jump; a vanishing denominator maps to +-large.
double smoothness_ratio(double upwind_jump, double local_jump) noexcept;

NodalState step_lw_limited(double mu, const NodalState& u, Limiter limiter);
NodalState step_weno5(double mu, const NodalState& u);

/// max over 1 <= n <= n_max of |g(omega)^n - exp(-i omega n mu)|.
double empirical_limsup(LinearKind kind, double mu, double omega, int n_max);

double total_variation(const NodalState& u);

}  // namespace jetadv
