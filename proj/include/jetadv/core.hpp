#pragma once

#include <cstdint>
#include <string>

#include "jetadv/error.hpp"

namespace jetadv {

/// Periodic uniform grid on [0,1) with m cells of width h = 1/m.
class GridSpec {
public:
    int m() const noexcept { return m_; }
    double h() const noexcept { return 1.0 / m_; }
    /// Grid point x_j = j/m, j taken modulo m.
    double x(int j) const noexcept;

    friend GridSpec make_grid(int m);

private:
    explicit GridSpec(int m) : m_(m) {}
    int m_;
};

GridSpec make_grid(int m);

/// Rational CFL number mu = p/q with the derived step size and sub-cell shift.
///
/// Each cell is split into q sub-cells of width h/q; one step moves the exact
/// solution by p sub-cells. Sub-cell positions are integers modulo m*q.
class RationalCfl {
public:
    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }
    double a() const noexcept { return a_; }
    double mu() const noexcept { return static_cast<double>(p_) / q_; }
    double dt() const noexcept { return dt_; }
    /// Per-step exact shift, in sub-cells of width h/q.
    int subcell_shift() const noexcept { return p_; }

    friend RationalCfl make_cfl(int p, int q, double a, const GridSpec& grid);

private:
    RationalCfl(int p, int q, double a, double dt) : p_(p), q_(q), a_(a), dt_(dt) {}
    int p_;
    int q_;
    double a_;
    double dt_;
};

RationalCfl make_cfl(int p, int q, double a, const GridSpec& grid);
inline RationalCfl make_cfl(int p, int q, const GridSpec& grid) { return make_cfl(p, q, 1.0, grid); }

/// Number of sub-cells m*q on the periodic lattice.
std::int64_t lattice_size(const RationalCfl& cfl, const GridSpec& grid);

/// Smallest n > 0 for which n*p is a multiple of m*q, i.e. the exact solution
/// has travelled an integer number of periods.
std::int64_t return_step_count(const RationalCfl& cfl, const GridSpec& grid);

/// Total sub-cell offset after n steps, reduced modulo m*q.
std::int64_t subcell_offset_after(const RationalCfl& cfl, const GridSpec& grid, std::int64_t steps);

/// Parse "p/q". Decimal literals are rejected.
struct Ratio {
    int p;
    int q;
};
Ratio parse_ratio(const std::string& text);

}  // namespace jetadv
