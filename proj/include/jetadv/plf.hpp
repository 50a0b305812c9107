#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "jetadv/core.hpp"

namespace jetadv {

/// A straight piece of a periodic piecewise-linear function, starting at x.
/// It extends to the next segment's start (wrapping through 1 for the last one).
struct Segment {
    double x;
    double value;  // function value at x
    double slope;

    double at(double y) const noexcept { return value + slope * (y - x); }
};

/// Periodic shift s = num/den (+ residual). The rational part composes exactly.
struct Shift {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double residual = 0.0;

    static Shift lattice(std::int64_t subcells, std::int64_t lattice_size);
    static Shift real(double s) { return Shift{0, 1, s}; }

    Shift operator+(const Shift& other) const;
    double value() const noexcept;  // reduced into [0,1)
};

/// Continuous periodic piecewise-linear function on [0,1).
///
/// Stored as base segments plus an exact shift. The materialized segments
/// (shift applied, wrapped into [0,1), sorted) are computed once on
/// construction; shifting again composes with the base so positions never
/// accumulate rounding.
class PiecewiseLinearFn {
public:
    PiecewiseLinearFn() : base_{Segment{0.0, 0.0, 0.0}}, segs_{base_} {}

    static PiecewiseLinearFn constant(double c);
    /// Segments must have strictly increasing starts in [0,1).
    static PiecewiseLinearFn from_segments(std::vector<Segment> segments);
    /// Connect-the-dots through (x_i, v_i), x_i strictly increasing in [0,1).
    static PiecewiseLinearFn from_points(const std::vector<double>& xs, const std::vector<double>& values);

    double value(double x) const;
    /// Derivative from the left; at a breakpoint this is the slope of the segment ending there.
    double left_slope(double x) const;

    PiecewiseLinearFn shifted(const Shift& s) const;
    const Shift& shift() const noexcept { return shift_; }

    const std::vector<Segment>& segments() const noexcept { return segs_; }
    /// Breakpoints where the slope actually changes, materialized and sorted.
    /// Jumps no larger than rel_tol times the largest slope magnitude are ignored.
    std::vector<double> kinks(double rel_tol = 0.0) const;
    double max_value() const;
    double min_value() const;

    /// Value at the right end of segment i (start of i+1, wrapped).
    double segment_end_value(std::size_t i) const;
    double segment_end(std::size_t i) const;

private:
    std::size_t locate_left(double x) const;  // segment i with x_i < x <= x_{i+1} (cyclic)
    void materialize();

    std::vector<Segment> base_;
    Shift shift_;
    std::vector<Segment> segs_;
};

/// Wrap into [0,1).
double wrap_unit(double x) noexcept;

PiecewiseLinearFn shift_periodic(const PiecewiseLinearFn& f, const Shift& s);
PiecewiseLinearFn shift_periodic(const PiecewiseLinearFn& f, double s);

/// Exact integral of |f - g| over one period.
double l1_plf(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);

/// Integral of |f| over one period (exact).
double l1_norm(const PiecewiseLinearFn& f);

/// Integral of |f - u| with 3-point Gauss on each sub-interval between
/// breakpoints of f, each bisected `refinement` times.
double l1_vs_function(const PiecewiseLinearFn& f, const std::function<double(double)>& u, int refinement);

/// One Hermite cell piece: two lines meeting at an interior kink, or the secant.
struct CellPiece {
    enum class Kind { genuine, fallback };
    Kind kind;
    double x_left;
    double x_right;
    double x_kink;  // genuine only
    double phi_left;
    double slope_left;   // L_L slope (secant slope for fallback)
    double phi_right;
    double slope_right;  // L_R slope (secant slope for fallback)

    double value(double x) const noexcept;
    double left_slope(double x) const noexcept;
};

/// Kink offset t in (0, h) from the cell's left end, if the two Hermite lines
/// intersect strictly inside; otherwise the cell falls back to its secant.
bool hermite_kink_offset(double phi_l, double psi_l, double phi_r, double psi_r, double h, double& offset) noexcept;

CellPiece cell_interpolant(double x_l, double x_r, double phi_l, double psi_l, double phi_r, double psi_r);

/// CSV rows "position,value" over the materialized breakpoints.
void write_csv(std::ostream& out, const PiecewiseLinearFn& f);

}  // namespace jetadv
