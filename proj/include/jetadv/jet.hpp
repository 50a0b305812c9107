#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jetadv/core.hpp"
#include "jetadv/plf.hpp"

namespace jetadv {

using RealFn = std::function<double(double)>;

/// Grid values phi_j and slopes psi_j, j = 0..m-1.
struct JetState {
    std::vector<double> phi;
    std::vector<double> psi;

    int m() const noexcept { return static_cast<int>(phi.size()); }
    /// Interleaved [phi_0, psi_0, phi_1, psi_1, ...].
    Eigen::VectorXd packed() const;
    static JetState unpack(const Eigen::VectorXd& v);
    double max_abs() const;
};

/// Which piece each cell's foot point evaluates: left line, right line, or secant.
enum class Branch : char { left = 'L', right = 'R', fallback = 'F' };

/// Per-cell branch; entry c belongs to cell [x_c, x_{c+1}], which feeds grid point c+1.
struct BranchPattern {
    std::vector<Branch> cells;

    std::string str() const;
    static BranchPattern parse(const std::string& text);
    bool operator==(const BranchPattern&) const = default;
};

struct Classification {
    bool defective;
    std::int64_t min_gap_subcells;
    std::vector<std::int64_t> kink_subcell_indices;
};

// Initial conditions.

/// phi_j = u0(x_j), psi_j = du0(x_j). Periodicity of u0 is not checked.
JetState init_direct(const RealFn& u0, const RealFn& du0, const GridSpec& grid);

/// Default kink offset used by init_delta: h * 2^-26.
double default_delta(const GridSpec& grid);

/// Samples u0 at the grid points and evaluates the connect-the-dots interpolant
/// shifted left by delta; all kinks then sit delta left of a grid point.
/// Requires 0 < delta < h/q so each kink stays in the rightmost sub-cell.
JetState init_delta(const RealFn& u0, const GridSpec& grid, double delta, int q = 1);

// Interpolation and evaluation.

PiecewiseLinearFn assemble_from_jet(const JetState& state, const GridSpec& grid);

/// Values and left slopes of f at the grid points.
JetState evaluate_on_grid(const PiecewiseLinearFn& f, const GridSpec& grid);

// Time stepping.

struct StepResult {
    JetState state;
    BranchPattern pattern;
};

/// One semi-Lagrangian step for constant speed: the foot point x_j - mu*h is
/// evaluated on the Hermite piece of cell [x_{j-1}, x_j] with the left-slope convention.
StepResult jet_step(const JetState& state, const GridSpec& grid, const RationalCfl& cfl);

/// n steps, keeping only the final state.
JetState jet_advance(JetState state, const GridSpec& grid, const RationalCfl& cfl, std::int64_t steps);

// Fixed points.

Classification classify(const PiecewiseLinearFn& f, const GridSpec& grid, int q);

struct FixedPointCheck {
    bool fixed;
    double error;  // L1 distance between initial and returned interpolant
};

FixedPointCheck fixed_point_check(const JetState& state, const GridSpec& grid, const RationalCfl& cfl, double tol);

struct FixedPointOnset {
    std::optional<int> period;  // first period k whose return check passes
    bool decayed = false;       // trajectory collapsed toward zero instead
    int periods_run = 0;
    double last_error = 0.0;
};

/// Iterates return periods until the check passes. A trajectory whose L1 norm
/// drops below decay_floor times its initial norm is reported as decayed with no
/// onset; the zero function is reached only in the limit there.
FixedPointOnset fixed_point_onset(const JetState& state, const GridSpec& grid, const RationalCfl& cfl,
                                  int max_periods, double tol, double decay_floor = 1e-6);

/// Random continuous piecewise-linear state whose kinks have at least q-1
/// empty sub-cells between neighbours and avoid sub-cell boundaries.
JetState random_nondefective_state(const GridSpec& grid, int q, std::mt19937_64& rng);

// Linear pattern analysis.

/// One-step matrix of the jet scheme with branches forced to `pattern`.
Eigen::MatrixXd build_pattern_matrix(const GridSpec& grid, const RationalCfl& cfl, const BranchPattern& pattern);

struct DecayingEigenpair {
    double lambda;
    JetState vector;  // unit max-norm
};

/// Real eigenpair of M with 0 < |lambda| < 1 whose vector, stepped by the
/// nonlinear scheme, realizes `pattern` and maps to lambda * v. Largest |lambda| first.
DecayingEigenpair decaying_eigenvector(const Eigen::MatrixXd& M, const GridSpec& grid, const RationalCfl& cfl,
                                       const BranchPattern& pattern);

/// CSV rows "j,x,phi,psi".
void write_csv(std::ostream& out, const JetState& state, const GridSpec& grid);

}  // namespace jetadv
