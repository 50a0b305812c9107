#include "jetadv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "jetadv/study.hpp"

namespace jetadv {

namespace {

struct RunConfig {
    std::string command;
    std::string scheme = "jet";
    std::string schemes = "jet,weno5,lw-superbee,lw-vanleer";
    std::string ic = "bump";
    std::string strategy = "delta";
    std::optional<int> m;
    std::optional<std::string> cfl;
    double a = 1.0;
    std::optional<double> tf;
    std::optional<long long> steps;
    std::optional<double> delta;
    std::string out;
    std::string profile;
    std::uint64_t seed = 1;
    std::string ms = "64,128,256,512";
    std::string tfs = "1,2,4,8";
    std::string pattern = "LLFLLF";
    int periods = 50;
    double tol = 1e-12;
    int samples = 11;
    int random = 0;
    int refinement = 3;
};

// Failures while turning flags into validated parameters are usage errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* what) {
    std::vector<T> out;
    for (const auto& item : split(s)) {
        try {
            std::size_t used = 0;
            if constexpr (std::is_same_v<T, int>)
                out.push_back(std::stoi(item, &used));
            else
                out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad value in --") + what + ": '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("--") + what + " is empty");
    return out;
}

// Validation wrapper: library errors raised while building parameters become usage errors.
template <typename F>
auto validated(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
        stream_ = file_ ? file_.get() : &fallback;
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::string header(const RunConfig& c, const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string h = "# jetadv " + c.command;
    for (const auto& [k, v] : fields) h += " " + k + "=" + v;
    return h + "\n";
}

struct Setup {
    GridSpec grid;
    RationalCfl cfl;
    std::string cfl_text;
};

Setup setup(const RunConfig& c, int default_m, const std::string& default_cfl) {
    return validated([&] {
        const GridSpec grid = make_grid(c.m.value_or(default_m));
        const std::string text = c.cfl.value_or(default_cfl);
        const Ratio r = parse_ratio(text);
        return Setup{grid, make_cfl(r.p, r.q, c.a, grid), text};
    });
}

Experiment experiment(const RunConfig& c, SchemeId scheme, const Setup& s) {
    return validated([&] {
        Experiment e{scheme, initial_condition(c.ic), parse_strategy(c.strategy), s.grid, s.cfl, c.delta};
        if (scheme == SchemeId::jet && e.strategy == IcStrategy::delta && c.delta) {
            const double h = s.grid.h();
            if (!(*c.delta > 0.0 && *c.delta < h / s.cfl.q())) throw Error(ErrorCode::invalid_delta, "need 0 < delta < h/q");
        }
        return e;
    });
}

int cmd_run(const RunConfig& c, std::ostream& out) {
    const SchemeId scheme = validated([&] { return parse_scheme(c.scheme); });
    const Setup s = setup(c, 100, "4/5");
    const Experiment e = experiment(c, scheme, s);
    if (c.tf && c.steps) throw UsageError("give either --tf or --steps, not both");
    if (c.steps && *c.steps < 0) throw UsageError("--steps must be non-negative");
    if (c.tf && !(*c.tf >= 0.0)) throw UsageError("--tf must be non-negative");

    std::int64_t steps = 0;
    double requested = 0.0;
    if (c.steps) {
        steps = *c.steps;
        requested = static_cast<double>(steps) * s.cfl.dt();
    } else {
        requested = c.tf.value_or(1.0);
        const std::int64_t n_ret = return_step_count(s.cfl, s.grid);
        steps = std::llround(requested / (static_cast<double>(n_ret) * s.cfl.dt())) * n_ret;
    }

    Trajectory traj(e);
    traj.advance(steps);
    ErrorRecord rec = measure_errors(e, traj.initial(), traj.state(), steps, c.refinement);
    rec.t_f_requested = requested;

    const auto fields = std::vector<std::pair<std::string, std::string>>{
        {"scheme", c.scheme}, {"ic", c.ic}, {"strategy", c.strategy}, {"m", std::to_string(s.grid.m())},
        {"cfl", s.cfl_text}, {"a", fmt_double(c.a)}, {"steps", std::to_string(steps)},
        {"delta", scheme == SchemeId::jet && e.strategy == IcStrategy::delta
                      ? fmt_double(c.delta.value_or(default_delta(s.grid)))
                      : "none"},
        {"refinement", std::to_string(c.refinement)}};
    Output o(c.out, out);
    *o << header(c, fields);
    write_records_csv(*o, {rec});
    if (!c.profile.empty()) {
        Output p(c.profile, out);
        *p << header(c, fields);
        write_csv(*p, interpolant(traj.state(), s.grid));
    }
    return exit_ok;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
    const SchemeId scheme = validated([&] { return parse_scheme(c.scheme); });
    const Setup s = setup(c, 100, "4/5");
    const CirculantScheme linear = validated([&] { return make_linear(linear_kind(scheme), s.cfl.mu()); });
    const SpectrumReport rep = validated([&] { return spectrum(linear, s.grid.m()); });
    Output o(c.out, out);
    *o << header(c, {{"scheme", c.scheme}, {"m", std::to_string(s.grid.m())}, {"cfl", s.cfl_text}});
    write_csv(*o, rep);
    *o << "# unit_set count=" << rep.unit_set.size() << " tolerance=" << rep.tolerance << " indices=";
    for (std::size_t i = 0; i < rep.unit_set.size(); ++i) *o << (i ? ";" : "") << rep.unit_set[i];
    *o << "\n";
    return exit_ok;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    const SchemeId scheme = validated([&] { return parse_scheme(c.scheme); });
    const auto ms = parse_list<int>(c.ms, "ms");
    const auto tfs = parse_list<double>(c.tfs, "tfs");
    const std::string cfl_text = c.cfl.value_or("4/5");
    const Ratio r = validated([&] { return parse_ratio(cfl_text); });
    const InitialCondition ic = validated([&] { return initial_condition(c.ic); });
    const IcStrategy strategy = validated([&] { return parse_strategy(c.strategy); });
    validated([&] {
        for (int m : ms) make_cfl(r.p, r.q, c.a, make_grid(m));
        return 0;
    });
    const auto records = bivariate_sweep(scheme, ic, strategy, ms, r, c.a, tfs);

    Output o(c.out, out);
    *o << header(c, {{"scheme", c.scheme}, {"ic", c.ic}, {"strategy", c.strategy}, {"cfl", cfl_text},
                     {"a", fmt_double(c.a)}, {"ms", c.ms}, {"tfs", c.tfs}});
    write_records_csv(*o, records);
    if (ms.size() >= 3) {
        for (double tf : tfs) {
            std::vector<ErrorRecord> at_tf;
            for (const auto& rec : records)
                if (rec.t_f_requested == tf) at_tf.push_back(rec);
            try {
                *o << "# observed_order t_f=" << fmt_double(tf) << " evolution=" << fmt_double(observed_order(at_tf))
                   << "\n";
            } catch (const Error&) {
                *o << "# observed_order t_f=" << fmt_double(tf) << " evolution=nan\n";
            }
        }
    }
    return exit_ok;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out) {
    const Setup s = setup(c, 6, "3/4");
    const BranchPattern pattern = validated([&] { return BranchPattern::parse(c.pattern); });
    const Eigen::MatrixXd M = validated([&] { return build_pattern_matrix(s.grid, s.cfl, pattern); });
    const DecayingEigenpair pair = decaying_eigenvector(M, s.grid, s.cfl, pattern);
    const double tf = c.tf.value_or(5.0);
    const std::int64_t steps = c.steps ? *c.steps : std::llround(tf / s.cfl.dt());

    Output o(c.out, out);
    *o << header(c, {{"m", std::to_string(s.grid.m())}, {"cfl", s.cfl_text}, {"pattern", pattern.str()},
                     {"steps", std::to_string(steps)}});
    *o << "# lambda=" << fmt_double(pair.lambda) << "\n";
    *o << "# pattern_realized=" << jet_step(pair.vector, s.grid, s.cfl).pattern.str() << "\n";
    *o << "n,t,max_abs,predicted\n";
    JetState state = pair.vector;
    const double amp0 = state.max_abs();
    char buf[160];
    for (std::int64_t n = 0; n <= steps; ++n) {
        if (n > 0) state = jet_step(state, s.grid, s.cfl).state;
        const double predicted = amp0 * std::pow(std::abs(pair.lambda), static_cast<double>(n));
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(n),
                      static_cast<double>(n) * s.cfl.dt(), state.max_abs(), predicted);
        *o << buf;
    }
    *o << "# amplitude_factor=" << fmt_double(state.max_abs() / amp0) << "\n";
    const FixedPointOnset onset = fixed_point_onset(pair.vector, s.grid, s.cfl, c.periods, c.tol);
    *o << "# fixed_point_onset=" << (onset.period ? std::to_string(*onset.period) : std::string("none"))
       << " decayed=" << (onset.decayed ? "true" : "false") << "\n";
    return exit_ok;
}

int cmd_maxtrack(const RunConfig& c, std::ostream& out) {
    std::vector<SchemeId> schemes;
    for (const auto& name : split(c.schemes)) schemes.push_back(validated([&] { return parse_scheme(name); }));
    if (schemes.empty()) throw UsageError("--schemes is empty");
    if (c.samples < 2) throw UsageError("--samples must be at least 2");
    const Setup s = setup(c, 100, "9/10");
    const double tf = c.tf.value_or(100.0);
    if (!(tf > 0.0)) throw UsageError("--tf must be positive");
    std::vector<double> times;
    for (int i = 0; i < c.samples; ++i) times.push_back(tf * i / (c.samples - 1));

    for (SchemeId id : schemes) {
        const Experiment e = experiment(c, id, s);
        const MaxSeries series = max_series(e, times);
        std::string path = c.out;
        if (!path.empty() && schemes.size() > 1) {
            const auto dot = path.rfind('.');
            const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
            const std::string ext = dot == std::string::npos ? ".csv" : path.substr(dot);
            path = stem + "_" + scheme_name(id) + ext;
        }
        Output o(path, out);
        *o << header(c, {{"scheme", scheme_name(id)}, {"ic", c.ic}, {"strategy", c.strategy},
                         {"m", std::to_string(s.grid.m())}, {"cfl", s.cfl_text}, {"tf", fmt_double(tf)},
                         {"samples", std::to_string(c.samples)}});
        write_max_series_csv(*o, series);
    }
    return exit_ok;
}

int cmd_fixedpoint(const RunConfig& c, std::ostream& out) {
    const Setup s = setup(c, 96, "3/4");
    if (c.periods < 1) throw UsageError("--periods must be positive");
    Output o(c.out, out);
    char buf[256];
    if (c.random > 0) {
        *o << header(c, {{"m", std::to_string(s.grid.m())}, {"cfl", s.cfl_text}, {"random", std::to_string(c.random)},
                         {"seed", std::to_string(c.seed)}, {"tol", fmt_double(c.tol)}});
        *o << "state,min_gap_subcells,defective,error,fixed\n";
        std::mt19937_64 rng(c.seed);
        for (int i = 0; i < c.random; ++i) {
            const JetState st = random_nondefective_state(s.grid, s.cfl.q(), rng);
            const Classification cls = classify(assemble_from_jet(st, s.grid), s.grid, s.cfl.q());
            const FixedPointCheck chk = fixed_point_check(st, s.grid, s.cfl, c.tol);
            std::snprintf(buf, sizeof buf, "%d,%lld,%d,%.17g,%d\n", i, static_cast<long long>(cls.min_gap_subcells),
                          cls.defective ? 1 : 0, chk.error, chk.fixed ? 1 : 0);
            *o << buf;
        }
        return exit_ok;
    }
    const Experiment e = experiment(c, SchemeId::jet, s);
    const JetState st = std::get<JetState>(initial_state(e));
    const Classification cls = classify(assemble_from_jet(st, s.grid), s.grid, s.cfl.q());
    const FixedPointOnset onset = fixed_point_onset(st, s.grid, s.cfl, c.periods, c.tol);
    *o << header(c, {{"ic", c.ic}, {"strategy", c.strategy}, {"m", std::to_string(s.grid.m())}, {"cfl", s.cfl_text},
                     {"periods", std::to_string(c.periods)}, {"tol", fmt_double(c.tol)}});
    *o << "n_ret,min_gap_subcells,defective,onset_period,decayed,periods_run,last_error\n";
    std::snprintf(buf, sizeof buf, "%lld,%lld,%d,%s,%d,%d,%.17g\n",
                  static_cast<long long>(return_step_count(s.cfl, s.grid)),
                  static_cast<long long>(cls.min_gap_subcells), cls.defective ? 1 : 0,
                  onset.period ? std::to_string(*onset.period).c_str() : "none", onset.decayed ? 1 : 0,
                  onset.periods_run, onset.last_error);
    *o << buf;
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Long-time advection laboratory: jet scheme and classical schemes on the periodic unit interval"};
    app.set_config("--config", "", "flat key=value file mirroring the flags; flags win");
    app.require_subcommand(1, 1);

    RunConfig c;
    app.add_option("--scheme", c.scheme, "jet, upwind, lw, ssp-central2, cn-central4, lw-vanleer, lw-superbee, weno5");
    app.add_option("--schemes", c.schemes, "comma-separated schemes (maxtrack)");
    app.add_option("--ic", c.ic, "initial condition: bump | sin");
    app.add_option("--strategy", c.strategy, "jet initialization: direct | delta");
    app.add_option("--m", c.m, "number of grid cells");
    app.add_option("--cfl", c.cfl, "CFL number as a rational literal p/q");
    app.add_option("--a", c.a, "advection speed");
    app.add_option("--tf", c.tf, "final time");
    app.add_option("--steps", c.steps, "number of time steps");
    app.add_option("--delta", c.delta, "kink offset for the delta strategy");
    app.add_option("--out", c.out, "output CSV path (stdout if omitted)");
    app.add_option("--profile", c.profile, "profile CSV path (run)");
    app.add_option("--seed", c.seed, "seed for randomized states");
    app.add_option("--ms", c.ms, "comma-separated grid sizes (sweep)");
    app.add_option("--tfs", c.tfs, "comma-separated final times (sweep)");
    app.add_option("--pattern", c.pattern, "branch pattern over {L,R,F} (counterexample)");
    app.add_option("--periods", c.periods, "maximum return periods (fixedpoint, counterexample)");
    app.add_option("--tol", c.tol, "fixed-point tolerance");
    app.add_option("--samples", c.samples, "sample count (maxtrack)");
    app.add_option("--random", c.random, "number of random non-defective states (fixedpoint)");
    app.add_option("--refinement", c.refinement, "bisections per sub-interval for total error quadrature");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"run", "evolve one configuration and report errors"},
        {"spectrum", "circulant eigenvalues of a linear scheme"},
        {"sweep", "bivariate (h, t_f) error sweep"},
        {"counterexample", "decaying eigenvector of a forced branch pattern"},
        {"maxtrack", "temporal evolution of the maximum"},
        {"fixedpoint", "fixed-point onset and defectiveness"}};
    for (const auto& [name, desc] : commands) app.add_subcommand(name, desc)->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? exit_ok : exit_usage;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (c.command == "run") return cmd_run(c, out);
        if (c.command == "spectrum") return cmd_spectrum(c, out);
        if (c.command == "sweep") return cmd_sweep(c, out);
        if (c.command == "counterexample") return cmd_counterexample(c, out);
        if (c.command == "maxtrack") return cmd_maxtrack(c, out);
        return cmd_fixedpoint(c, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

}  // namespace jetadv
