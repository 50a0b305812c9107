#include "jetadv/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>

namespace jetadv {

namespace {

struct SchemeEntry {
    SchemeId id;
    const char* name;
};

constexpr SchemeEntry kSchemes[] = {
    {SchemeId::jet, "jet"},
    {SchemeId::upwind, "upwind"},
    {SchemeId::lax_wendroff, "lw"},
    {SchemeId::ssprk3_central2, "ssp-central2"},
    {SchemeId::cn_central4, "cn-central4"},
    {SchemeId::lw_van_leer, "lw-vanleer"},
    {SchemeId::lw_superbee, "lw-superbee"},
    {SchemeId::weno5, "weno5"},
};

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SchemeId parse_scheme(const std::string& name) {
    for (const auto& e : kSchemes)
        if (name == e.name) return e.id;
    throw Error(ErrorCode::unknown_scheme, "'" + name + "'");
}

std::string scheme_name(SchemeId id) {
    for (const auto& e : kSchemes)
        if (e.id == id) return e.name;
    return "?";
}

const std::vector<SchemeId>& all_schemes() {
    static const std::vector<SchemeId> ids = [] {
        std::vector<SchemeId> v;
        for (const auto& e : kSchemes) v.push_back(e.id);
        return v;
    }();
    return ids;
}

bool is_linear(SchemeId id) {
    switch (id) {
    case SchemeId::upwind:
    case SchemeId::lax_wendroff:
    case SchemeId::ssprk3_central2:
    case SchemeId::cn_central4: return true;
    default: return false;
    }
}

LinearKind linear_kind(SchemeId id) {
    switch (id) {
    case SchemeId::upwind: return LinearKind::upwind;
    case SchemeId::lax_wendroff: return LinearKind::lax_wendroff;
    case SchemeId::ssprk3_central2: return LinearKind::ssprk3_central2;
    case SchemeId::cn_central4: return LinearKind::cn_central4;
    default: throw Error(ErrorCode::unsupported, scheme_name(id) + " is not a linear scheme");
    }
}

IcStrategy parse_strategy(const std::string& name) {
    if (name == "direct") return IcStrategy::direct;
    if (name == "delta") return IcStrategy::delta;
    throw Error(ErrorCode::invalid_argument, "strategy must be 'direct' or 'delta', got '" + name + "'");
}

std::string strategy_name(IcStrategy s) { return s == IcStrategy::direct ? "direct" : "delta"; }

InitialCondition initial_condition(const std::string& name) {
    constexpr double pi = std::numbers::pi;
    if (name == "bump") {
        auto u = [](double x) {
            const double s = std::sin(pi * (x - 0.5));
            return std::exp(-s * s / 0.05);
        };
        auto du = [u](double x) { return -u(x) * pi * std::sin(2.0 * pi * (x - 0.5)) / 0.05; };
        return {"bump", u, du};
    }
    if (name == "sin") {
        return {"sin", [](double x) { return std::sin(2.0 * pi * x); },
                [](double x) { return 2.0 * pi * std::cos(2.0 * pi * x); }};
    }
    throw Error(ErrorCode::invalid_argument, "unknown initial condition '" + name + "' (bump, sin)");
}

State initial_state(const Experiment& e) {
    if (e.scheme == SchemeId::jet) {
        if (e.strategy == IcStrategy::direct) return init_direct(e.ic.u, e.ic.du, e.grid);
        return init_delta(e.ic.u, e.grid, e.delta.value_or(default_delta(e.grid)), e.cfl.q());
    }
    NodalState s{std::vector<double>(static_cast<std::size_t>(e.grid.m()))};
    for (int j = 0; j < e.grid.m(); ++j) s.values[j] = e.ic.u(e.grid.x(j));
    return s;
}

PiecewiseLinearFn interpolant(const State& s, const GridSpec& grid) {
    if (const auto* jet = std::get_if<JetState>(&s)) return assemble_from_jet(*jet, grid);
    const auto& nodal = std::get<NodalState>(s);
    std::vector<double> xs(nodal.values.size());
    for (int j = 0; j < grid.m(); ++j) xs[j] = grid.x(j);
    return PiecewiseLinearFn::from_points(xs, nodal.values);
}

double state_max(const State& s, const GridSpec& grid) {
    if (const auto* jet = std::get_if<JetState>(&s)) return assemble_from_jet(*jet, grid).max_value();
    return std::get<NodalState>(s).max();
}

Trajectory::Trajectory(const Experiment& e) : exp_(e), initial_(initial_state(e)), state_(initial_) {
    if (is_linear(e.scheme) && e.scheme != SchemeId::ssprk3_central2)
        stepper_.emplace(make_linear(linear_kind(e.scheme), e.cfl.mu()), e.grid.m());
}

void Trajectory::advance(std::int64_t steps) {
    if (steps < 0) throw Error(ErrorCode::invalid_argument, "step count must be non-negative");
    const double mu = exp_.cfl.mu();
    if (auto* jet = std::get_if<JetState>(&state_)) {
        *jet = jet_advance(std::move(*jet), exp_.grid, exp_.cfl, steps);
    } else {
        auto& u = std::get<NodalState>(state_);
        for (std::int64_t n = 0; n < steps; ++n) {
            switch (exp_.scheme) {
            case SchemeId::ssprk3_central2: u = step_ssprk3_central2(mu, u); break;
            case SchemeId::lw_van_leer: u = step_lw_limited(mu, u, Limiter::van_leer); break;
            case SchemeId::lw_superbee: u = step_lw_limited(mu, u, Limiter::superbee); break;
            case SchemeId::weno5: u = step_weno5(mu, u); break;
            default: stepper_->step_in_place(u.values, scratch_); break;
            }
        }
    }
    steps_ += steps;
}

State evolve(const Experiment& e, std::int64_t n_steps) {
    Trajectory t(e);
    t.advance(n_steps);
    return t.state();
}

ErrorRecord measure_errors(const Experiment& e, const State& initial, const State& final_state, std::int64_t steps,
                           int refinement) {
    const std::int64_t lattice = lattice_size(e.cfl, e.grid);
    const std::int64_t offset = subcell_offset_after(e.cfl, e.grid, steps);
    const double shift = static_cast<double>(offset) / static_cast<double>(lattice);
    const PiecewiseLinearFn now = interpolant(final_state, e.grid);
    const PiecewiseLinearFn proxy = interpolant(initial, e.grid).shifted(Shift::lattice(offset, lattice));
    const auto& u0 = e.ic.u;
    const double total = l1_vs_function(now, [&](double x) { return u0(wrap_unit(x - shift)); }, refinement);
    const double t = static_cast<double>(steps) * e.cfl.dt();
    return ErrorRecord{scheme_name(e.scheme), e.grid.m(), e.cfl.p(), e.cfl.q(), e.cfl.a(), t, t, steps,
                       total, l1_plf(now, proxy)};
}

std::vector<ErrorRecord> bivariate_sweep(SchemeId scheme, const InitialCondition& ic, IcStrategy strategy,
                                         const std::vector<int>& m_list, Ratio cfl, double a,
                                         const std::vector<double>& tf_list) {
    if (m_list.empty() || tf_list.empty()) throw Error(ErrorCode::empty_input, "sweep needs grid sizes and final times");
    std::vector<ErrorRecord> out;
    for (int m : m_list) {
        const GridSpec grid = make_grid(m);
        const RationalCfl c = make_cfl(cfl.p, cfl.q, a, grid);
        const std::int64_t n_ret = return_step_count(c, grid);
        const double period = static_cast<double>(n_ret) * c.dt();

        std::vector<std::pair<std::int64_t, std::size_t>> targets;
        for (std::size_t i = 0; i < tf_list.size(); ++i) {
            if (!(tf_list[i] >= 0.0)) throw Error(ErrorCode::invalid_argument, "final times must be non-negative");
            targets.emplace_back(std::llround(tf_list[i] / period) * n_ret, i);
        }
        std::vector<ErrorRecord> row(tf_list.size());
        auto order = targets;
        std::sort(order.begin(), order.end());
        Trajectory traj(Experiment{scheme, ic, strategy, grid, c, std::nullopt});
        for (const auto& [steps, i] : order) {
            traj.advance(steps - traj.steps());
            row[i] = measure_errors(traj.experiment(), traj.initial(), traj.state(), steps);
            row[i].t_f_requested = tf_list[i];
        }
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

double error_of(const ErrorRecord& r, ErrorMeasure which) {
    return which == ErrorMeasure::total ? r.total_error : r.evolution_error;
}

double observed_order(const std::vector<ErrorRecord>& records, ErrorMeasure which) {
    if (records.size() < 3) throw Error(ErrorCode::too_few_records, "order fit needs at least 3 records");
    auto sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const ErrorRecord& l, const ErrorRecord& r) { return l.m > r.m; });
    std::vector<double> lh, le;
    for (std::size_t i = 0; i < 3; ++i) {
        const double err = error_of(sorted[i], which);
        if (!(err > 0.0)) throw Error(ErrorCode::invalid_argument, "order fit needs positive errors");
        lh.push_back(std::log(1.0 / sorted[i].m));
        le.push_back(std::log(err));
    }
    return fit_slope(lh, le);
}

CriticalH critical_h(const std::vector<ErrorRecord>& records, double target, ErrorMeasure which) {
    if (!(target > 0.0)) throw Error(ErrorCode::invalid_argument, "target error must be positive");
    std::map<double, std::vector<const ErrorRecord*>> by_tf;
    for (const auto& r : records) by_tf[r.t_f_actual].push_back(&r);
    CriticalH out{{}, {}, 0.0};
    for (auto& [tf, group] : by_tf) {
        std::sort(group.begin(), group.end(), [](const ErrorRecord* l, const ErrorRecord* r) { return l->m > r->m; });
        bool found = false;
        for (std::size_t i = 0; i + 1 < group.size() && !found; ++i) {
            const double e1 = error_of(*group[i], which);
            const double e2 = error_of(*group[i + 1], which);
            if (!(e1 > 0.0 && e2 > 0.0)) continue;
            if ((e1 - target) * (e2 - target) > 0.0) continue;
            const double lh1 = std::log(1.0 / group[i]->m);
            const double lh2 = std::log(1.0 / group[i + 1]->m);
            const double w = e1 == e2 ? 0.0 : (std::log(target) - std::log(e1)) / (std::log(e2) - std::log(e1));
            out.t_f.push_back(tf);
            out.h_star.push_back(std::exp(lh1 + w * (lh2 - lh1)));
            found = true;
        }
        if (!found) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "target %.3g not bracketed at t_f = %.6g", target, tf);
            throw Error(ErrorCode::not_bracketed, buf);
        }
    }
    if (out.t_f.size() < 2) throw Error(ErrorCode::too_few_records, "exponent fit needs at least two final times");
    std::vector<double> lt, lh;
    for (std::size_t i = 0; i < out.t_f.size(); ++i) {
        lt.push_back(std::log(out.t_f[i]));
        lh.push_back(std::log(out.h_star[i]));
    }
    out.exponent = fit_slope(lt, lh);
    return out;
}

double modified_eq_coefficient(double mu, double a, double h) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::invalid_cfl, "need 0 < mu < 1");
    return -(a / 6.0) * (1.0 - mu * mu) * h * h;
}

MaxSeries max_series(const Experiment& e, const std::vector<double>& sample_times) {
    MaxSeries out;
    Trajectory traj(e);
    std::int64_t last = -1;
    for (double t : sample_times) {
        const std::int64_t steps = std::llround(t / e.cfl.dt());
        if (steps <= last) throw Error(ErrorCode::invalid_argument, "sample times must be increasing");
        traj.advance(steps - traj.steps());
        out.t.push_back(static_cast<double>(steps) * e.cfl.dt());
        out.max_value.push_back(state_max(traj.state(), e.grid));
        last = steps;
    }
    return out;
}

void write_records_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
    out << "scheme,m,p,q,a,t_f_requested,t_f_actual,steps,total_error,evolution_error\n";
    char buf[320];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.17g,%.17g,%.17g,%lld,%.17g,%.17g\n", r.scheme.c_str(), r.m, r.p,
                      r.q, r.a, r.t_f_requested, r.t_f_actual, static_cast<long long>(r.steps), r.total_error,
                      r.evolution_error);
        out << buf;
    }
}

void write_max_series_csv(std::ostream& out, const MaxSeries& series) {
    out << "t,max_value\n";
    char buf[96];
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", series.t[i], series.max_value[i]);
        out << buf;
    }
}

}  // namespace jetadv
