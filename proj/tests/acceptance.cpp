// Acceptance suite: one line per criterion, PASS or FAIL, with the measured
// quantities. Criteria listed in `known_unattainable` are reported as failures
// but do not change the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "jetadv/classic.hpp"
#include "jetadv/jet.hpp"
#include "jetadv/study.hpp"

using namespace jetadv;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

const std::set<std::string> known_unattainable = {"4b"};

int failures = 0;
int known_failures = 0;

void report(const std::string& id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = !o.pass && known_unattainable.count(id) > 0;
    std::printf("[%s] %-3s %s: %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id.c_str(), name.c_str(), o.detail.c_str(),
                secs, known ? " [known, see README]" : "");
    std::fflush(stdout);
    if (!o.pass) (known ? known_failures : failures) += 1;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Experiment make_experiment(SchemeId scheme, const std::string& ic, IcStrategy strategy, int m, int p, int q) {
    const GridSpec g = make_grid(m);
    return Experiment{scheme, initial_condition(ic), strategy, g, make_cfl(p, q, g), std::nullopt};
}

// 1. Exactness of the jet scheme with the delta initialization.
Outcome exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment e = make_experiment(SchemeId::jet, "bump", IcStrategy::delta, 96, 3, 4);
    const std::int64_t n_ret = return_step_count(e.cfl, e.grid);
    Trajectory t(e);
    t.advance(10 * n_ret);
    const double e10 = measure_errors(e, t.initial(), t.state(), t.steps()).evolution_error;
    t.advance(90 * n_ret);
    const double e100 = measure_errors(e, t.initial(), t.state(), t.steps()).evolution_error;
    const double secs = seconds_since(t0);
    return {n_ret == 128 && e10 <= 1e-12 && e100 <= 1e-10 && secs < 5.0,
            fmt("n_ret=%g err(10 periods)=%.3g <= 1e-12, err(100 periods)=%.3g <= 1e-10, runtime %.2f s < 5 s",
                static_cast<double>(n_ret), e10, e100, secs)};
}

// 2. Random non-defective states are fixed points.
Outcome nondefective_lemma() {
    std::mt19937_64 rng(20240601);
    struct Case {
        int m, p, q, count;
    };
    const Case cases[] = {{24, 3, 4, 34}, {50, 2, 5, 33}, {96, 1, 4, 33}};
    int total = 0, passed = 0, defective = 0;
    double worst = 0.0;
    for (const auto& c : cases) {
        const GridSpec g = make_grid(c.m);
        const RationalCfl cfl = make_cfl(c.p, c.q, g);
        for (int i = 0; i < c.count; ++i) {
            const JetState s = random_nondefective_state(g, c.q, rng);
            if (classify(assemble_from_jet(s, g), g, c.q).defective) ++defective;
            const FixedPointCheck chk = fixed_point_check(s, g, cfl, 1e-12);
            worst = std::max(worst, chk.error);
            passed += chk.fixed;
            ++total;
        }
    }
    return {total == 100 && passed == total && defective == 0,
            fmt("%g/%g fixed at tol 1e-12, %g classified defective, worst error %.3g", passed, total, defective, worst)};
}

// 3. Upwind decays to the mean.
Outcome upwind_decay() {
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment e = make_experiment(SchemeId::upwind, "bump", IcStrategy::direct, 100, 4, 5);
    const NodalState u0 = std::get<NodalState>(initial_state(e));
    const NodalState u = std::get<NodalState>(evolve(e, 100000));
    const double spread = u.max() - u.min();
    const double off = std::max(std::abs(u.max() - u0.mean()), std::abs(u.min() - u0.mean()));
    const double secs = seconds_since(t0);
    return {spread <= 1e-6 && off <= 1e-6 && secs < 2.0,
            fmt("max-min=%.3g <= 1e-6, max |U-mean0|=%.3g <= 1e-6, runtime %.2f s < 2 s", spread, off, secs)};
}

// 4. Spectra.
int count_near_unit(const SpectrumReport& r) {
    int n = 0;
    for (const auto& l : r.eigenvalues) n += std::abs(l) >= 1.0 - 1e-10;
    return n;
}

Outcome spectrum_upwind() {
    const int n = count_near_unit(spectrum(make_stencil(StencilKind::upwind, 0.8), 100));
    return {n == 1, fmt("%g eigenvalue(s) with |lambda| >= 1-1e-10, expected exactly 1", n)};
}

Outcome spectrum_ssp_count() {
    const SpectrumReport r = spectrum(make_ssprk3_central2(0.8), 100);
    const int n = count_near_unit(r);
    std::string idx;
    for (int j = 0; j < 100; ++j)
        if (std::abs(r.eigenvalues[j]) >= 1.0 - 1e-10) idx += (idx.empty() ? "" : ",") + std::to_string(j);
    return {n == 1, fmt("%g eigenvalue(s) with |lambda| >= 1-1e-10, expected exactly 1; indices ", n) + idx +
                        " (g(pi) = 1 exactly for the central difference)"};
}

Outcome spectrum_ssp_values() {
    const SpectrumReport r = spectrum(make_ssprk3_central2(0.8), 100);
    double worst = 0.0;
    for (const auto& l : r.eigenvalues)
        if (std::abs(l) >= 1.0 - 1e-10) worst = std::max(worst, std::abs(l - 1.0));
    return {worst <= 1e-10, fmt("every unit-modulus eigenvalue equals 1: max |lambda-1|=%.3g", worst)};
}

Outcome spectrum_cn() {
    const SpectrumReport r = spectrum(make_cn_central4(0.8), 100);
    double worst = 0.0;
    for (const auto& l : r.eigenvalues) worst = std::max(worst, std::abs(std::abs(l) - 1.0));
    return {worst <= 1e-12, fmt("max ||lambda|-1|=%.3g <= 1e-12", worst)};
}

Outcome spectrum_ssp_closed_form() {
    const double mu = 0.8;
    const SpectrumReport r = spectrum(make_ssprk3_central2(mu), 100);
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
        const double w = 2 * pi * j / 100;
        const std::complex<double> g((1.0 - mu * mu / 4.0) + mu * mu / 4.0 * std::cos(2.0 * w),
                                     -(mu * mu * mu / 24.0 * std::sin(3.0 * w) + (mu - mu * mu * mu / 8.0) * std::sin(w)));
        worst = std::max(worst, std::abs(r.eigenvalues[j] - g));
    }
    return {worst <= 1e-12, fmt("max |lambda_j - g(2 pi j/m)|=%.3g <= 1e-12", worst)};
}

// 5. Lax-Wendroff scaling laws.
Outcome scaling_laws() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> ms{64, 128, 256, 512};
    const std::vector<double> tfs{1.0, 2.0, 4.0, 8.0};
    const auto recs = bivariate_sweep(SchemeId::lax_wendroff, initial_condition("sin"), IcStrategy::direct, ms,
                                      Ratio{4, 5}, 1.0, tfs);
    auto err = [&](int m, double tf) {
        for (const auto& r : recs)
            if (r.m == m && r.t_f_requested == tf) return r.evolution_error;
        throw Error(ErrorCode::not_found, "missing sweep record");
    };
    double order_lo = 1e9, order_hi = -1e9;
    for (double tf : tfs) {
        std::vector<ErrorRecord> at;
        for (const auto& r : recs)
            if (r.t_f_requested == tf) at.push_back(r);
        const double o = observed_order(at);
        order_lo = std::min(order_lo, o);
        order_hi = std::max(order_hi, o);
    }
    double ratio_lo = 1e9, ratio_hi = -1e9;
    for (std::size_t i = 0; i + 1 < tfs.size(); ++i) {
        const double r = err(512, tfs[i + 1]) / err(512, tfs[i]);
        ratio_lo = std::min(ratio_lo, r);
        ratio_hi = std::max(ratio_hi, r);
    }
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (double tf : tfs) {
        lo = std::max(lo, err(512, tf));
        hi = std::min(hi, err(64, tf));
    }
    const double target = std::sqrt(lo * hi);
    const CriticalH ch = critical_h(recs, target);
    const double secs = seconds_since(t0);
    const bool ok = order_lo >= 1.8 && order_hi <= 2.2 && ratio_lo >= 1.7 && ratio_hi <= 2.3 && ch.exponent >= -0.6 &&
                    ch.exponent <= -0.4 && secs < 30.0;
    return {ok, fmt("order in [%.4f, %.4f] within [1.8,2.2]; t_f doubling ratio at m=512 in [%.4f, %.4f] within [1.7,2.3]; ",
                    order_lo, order_hi, ratio_lo, ratio_hi) +
                    fmt("h* exponent %.4f within [-0.6,-0.4] (target %.3g); runtime %.2f s < 30 s", ch.exponent, target, secs)};
}

// 6. Counterexample: decaying eigenvector of the LLFLLF pattern.
Outcome counterexample() {
    const GridSpec g = make_grid(6);
    const RationalCfl c = make_cfl(3, 4, g);
    const BranchPattern pat = BranchPattern::parse("LLFLLF");
    const Eigen::MatrixXd M = build_pattern_matrix(g, c, pat);
    const DecayingEigenpair pair = decaying_eigenvector(M, g, c, pat);

    JetState s = pair.vector;
    bool realized = true;
    const std::int64_t steps = std::llround(5.0 / c.dt());
    for (std::int64_t n = 0; n < steps; ++n) {
        const StepResult r = jet_step(s, g, c);
        realized = realized && r.pattern == pat;
        s = r.state;
    }
    const double predicted = std::pow(pair.lambda, static_cast<double>(steps));
    Eigen::VectorXd lin = pair.vector.packed();
    for (std::int64_t n = 0; n < steps; ++n) lin = M * lin;
    const double factor = s.max_abs() / pair.vector.max_abs();
    const double rel_state = (s.packed() - lin).cwiseAbs().maxCoeff() / lin.cwiseAbs().maxCoeff();
    const double rel_factor = std::abs(factor - std::abs(predicted)) / std::abs(predicted);
    const FixedPointOnset onset = fixed_point_onset(pair.vector, g, c, 50, 1e-12);
    const bool ok = std::abs(pair.lambda) < 1.0 && steps == 40 && realized && rel_state <= 1e-8 &&
                    rel_factor <= 1e-8 && factor >= 1e-7 && factor <= 1e-5 && !onset.period;
    return {ok, fmt("lambda=%.10f, 40-step factor %.4g in [1e-7,1e-5], rel. dev. from matrix %.2g, from lambda^40 %.2g",
                    pair.lambda, factor, rel_state, rel_factor) +
                    (realized ? ", pattern realized every step" : ", PATTERN NOT REALIZED") +
                    (onset.period ? ", onset at period " + std::to_string(*onset.period)
                                  : std::string(", onset none within 50 periods") +
                                        (onset.decayed ? " (decayed below floor)" : ""))};
}

// 7. Exact L1 against midpoint quadrature.
PiecewiseLinearFn random_plf(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 50);
    std::uniform_real_distribution<double> pos(0.0, 1.0), val(-2.0, 2.0);
    std::vector<double> xs(static_cast<std::size_t>(count(rng)));
    for (auto& x : xs) x = pos(rng);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> vs(xs.size());
    for (auto& v : vs) v = val(rng);
    return PiecewiseLinearFn::from_points(xs, vs);
}

// Samples x_i in increasing order; walks the segment list instead of searching.
class Walker {
public:
    explicit Walker(const PiecewiseLinearFn& f) : segs_(f.segments()) {}
    double at(double x) {
        while (next_ < segs_.size() && segs_[next_].x <= x) ++next_;
        if (next_ == 0) return segs_.back().at(x + 1.0);
        return segs_[next_ - 1].at(x);
    }

private:
    const std::vector<Segment>& segs_;
    std::size_t next_ = 0;
};

Outcome l1_oracle() {
    std::mt19937_64 rng(77);
    constexpr int n = 1000000;
    double worst = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        const auto f = random_plf(rng);
        const auto g = random_plf(rng);
        Walker wf(f), wg(g);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) / n;
            s += std::abs(wf.at(x) - wg.at(x));
        }
        worst = std::max(worst, std::abs(l1_plf(f, g) - s / n));
    }
    return {worst <= 1e-6, fmt("1000 pairs, max |exact - midpoint(1e6)|=%.3g <= 1e-6", worst)};
}

// 8. Empirical limsup.
Outcome limsup() {
    const double up = empirical_limsup(LinearKind::upwind, 0.8, pi, 1000);
    double cn_min = 1e9;
    for (double w : {pi / 2, 1.0, 2.0}) cn_min = std::min(cn_min, empirical_limsup(LinearKind::cn_central4, 0.75, w, 10000));
    double zero = 0.0;
    for (LinearKind k : {LinearKind::upwind, LinearKind::lax_wendroff, LinearKind::ssprk3_central2, LinearKind::cn_central4})
        zero = std::max(zero, empirical_limsup(k, 0.8, 0.0, 10000));
    const bool ok = up >= 0.99 && cn_min >= std::sqrt(3.0) - 0.05 && zero == 0.0;
    return {ok, fmt("upwind(pi)=%.6f >= 0.99, min CN=%.6f >= %.6f, max at omega=0: %.3g", up, cn_min,
                    std::sqrt(3.0) - 0.05, zero)};
}

// 9. Long-time comparison at m=100, mu=9/10, t_f=1000.
Outcome long_time() {
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment jet = make_experiment(SchemeId::jet, "bump", IcStrategy::direct, 100, 9, 10);
    const std::int64_t n_ret = return_step_count(jet.cfl, jet.grid);
    const double period = static_cast<double>(n_ret) * jet.cfl.dt();
    const double tf = 1000.0;
    const FixedPointOnset onset = fixed_point_onset(std::get<JetState>(initial_state(jet)), jet.grid, jet.cfl, 5, 1e-12);

    double jet_var = std::numeric_limits<double>::infinity();
    if (onset.period) {
        std::vector<double> times;
        for (double t = *onset.period * period; t <= tf; t += period) times.push_back(t);
        times.push_back(tf);
        const MaxSeries ms = max_series(jet, times);
        const auto [lo, hi] = std::minmax_element(ms.max_value.begin(), ms.max_value.end());
        jet_var = *hi - *lo;
    }

    auto drop = [&](SchemeId id, double& gap) {
        const Experiment e = make_experiment(id, "bump", IcStrategy::direct, 100, 9, 10);
        const NodalState u0 = std::get<NodalState>(initial_state(e));
        gap = u0.max() - u0.mean();
        const MaxSeries ms = max_series(e, {0.0, tf});
        return ms.max_value.front() - ms.max_value.back();
    };
    double gap = 0.0;
    const double d_weno = drop(SchemeId::weno5, gap);
    const double d_vl = drop(SchemeId::lw_van_leer, gap);
    const double d_sb = drop(SchemeId::lw_superbee, gap);
    const double secs = seconds_since(t0);
    const bool ok = onset.period && *onset.period <= 5 && jet_var <= 1e-10 && d_weno >= 0.1 * gap &&
                    d_vl >= 0.1 * gap && d_sb < d_vl && secs < 60.0;
    return {ok, std::string("jet onset period ") + (onset.period ? std::to_string(*onset.period) : "none") +
                    fmt(" <= 5, jet max variation after onset %.3g <= 1e-10; drops / gap: WENO5 %.3f, van Leer %.3f, ",
                        jet_var, d_weno / gap, d_vl / gap) +
                    fmt("Superbee %.3f (>= 0.1, Superbee < van Leer); runtime %.2f s < 60 s", d_sb / gap, secs)};
}

}  // namespace

int main() {
    report("1", "exactness of the delta-initialized jet scheme", exactness);
    report("2", "non-defective states are fixed points", nondefective_lemma);
    report("3", "upwind decay to the mean", upwind_decay);
    report("4a", "upwind spectrum has one unit eigenvalue", spectrum_upwind);
    report("4b", "SSP-central2 spectrum has one unit eigenvalue", spectrum_ssp_count);
    report("4c", "SSP-central2 unit eigenvalues all equal 1", spectrum_ssp_values);
    report("4d", "CN-central4 spectrum on the unit circle", spectrum_cn);
    report("4e", "fused SSP-central2 stencil matches the closed-form amplification", spectrum_ssp_closed_form);
    report("5", "Lax-Wendroff scaling laws", scaling_laws);
    report("6", "LLFLLF counterexample", counterexample);
    report("7", "exact L1 against midpoint quadrature", l1_oracle);
    report("8", "empirical limsup", limsup);
    report("9", "long-time comparison", long_time);
    std::printf("summary: %d unexpected failure(s), %d known failure(s)\n", failures, known_failures);
    return failures == 0 ? 0 : 1;
}
