#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jetadv/classic.hpp"
#include "jetadv/core.hpp"
#include "jetadv/jet.hpp"
#include "jetadv/plf.hpp"

namespace jetadv {

enum class SchemeId { jet, upwind, lax_wendroff, ssprk3_central2, cn_central4, lw_van_leer, lw_superbee, weno5 };

/// Registry names: jet, upwind, lw, ssp-central2, cn-central4, lw-vanleer, lw-superbee, weno5.
SchemeId parse_scheme(const std::string& name);
std::string scheme_name(SchemeId id);
const std::vector<SchemeId>& all_schemes();
bool is_linear(SchemeId id);
LinearKind linear_kind(SchemeId id);  // unsupported for nonlinear schemes

enum class IcStrategy { direct, delta };
IcStrategy parse_strategy(const std::string& name);
std::string strategy_name(IcStrategy s);

struct InitialCondition {
    std::string name;
    RealFn u;
    RealFn du;
};

/// "bump": exp(-sin^2(pi (x - 1/2)) / 0.05);  "sin": sin(2 pi x).
InitialCondition initial_condition(const std::string& name);

struct Experiment {
    SchemeId scheme;
    InitialCondition ic;
    IcStrategy strategy;  // jet only
    GridSpec grid;
    RationalCfl cfl;
    std::optional<double> delta;  // jet + delta strategy; default_delta() otherwise
};

using State = std::variant<JetState, NodalState>;

State initial_state(const Experiment& e);
PiecewiseLinearFn interpolant(const State& s, const GridSpec& grid);
double state_max(const State& s, const GridSpec& grid);

/// Incremental evolution of one experiment.
class Trajectory {
public:
    explicit Trajectory(const Experiment& e);

    void advance(std::int64_t steps);
    const State& state() const noexcept { return state_; }
    const State& initial() const noexcept { return initial_; }
    std::int64_t steps() const noexcept { return steps_; }
    const Experiment& experiment() const noexcept { return exp_; }

private:
    Experiment exp_;
    State initial_;
    State state_;
    std::int64_t steps_ = 0;
    std::optional<CirculantStepper> stepper_;
    std::vector<double> scratch_;
};

State evolve(const Experiment& e, std::int64_t n_steps);

struct ErrorRecord {
    std::string scheme;
    int m;
    int p;
    int q;
    double a;
    double t_f_requested;
    double t_f_actual;
    std::int64_t steps;
    double total_error;
    double evolution_error;
};

/// Total error against u0(x - a t) with Gauss quadrature, evolution error
/// against the lattice-shifted initial interpolant (exact L1).
ErrorRecord measure_errors(const Experiment& e, const State& initial, const State& final_state, std::int64_t steps,
                           int refinement = 3);

/// Each requested t_f is snapped to the nearest multiple of the return period.
std::vector<ErrorRecord> bivariate_sweep(SchemeId scheme, const InitialCondition& ic, IcStrategy strategy,
                                         const std::vector<int>& m_list, Ratio cfl, double a,
                                         const std::vector<double>& tf_list);

enum class ErrorMeasure { total, evolution };
double error_of(const ErrorRecord& r, ErrorMeasure which);

/// Least-squares slope of log(error) against log(h) over the three finest grids.
double observed_order(const std::vector<ErrorRecord>& records, ErrorMeasure which = ErrorMeasure::evolution);

struct CriticalH {
    std::vector<double> t_f;
    std::vector<double> h_star;
    double exponent;  // slope of log h* against log t_f
};

/// h at which the error reaches `target`, interpolated log-log per t_f.
CriticalH critical_h(const std::vector<ErrorRecord>& records, double target,
                     ErrorMeasure which = ErrorMeasure::evolution);

/// Leading dispersive coefficient of the Lax-Wendroff modified equation, -(a/6)(1-mu^2) h^2.
double modified_eq_coefficient(double mu, double a, double h);

struct MaxSeries {
    std::vector<double> t;
    std::vector<double> max_value;
};

/// Maximum of the interpolant (jet) or of the grid values at each sample time,
/// snapped to whole steps.
MaxSeries max_series(const Experiment& e, const std::vector<double>& sample_times);

void write_records_csv(std::ostream& out, const std::vector<ErrorRecord>& records);
void write_max_series_csv(std::ostream& out, const MaxSeries& series);

}  // namespace jetadv
