#include "jetadv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace jetadv {

Eigen::VectorXd JetState::packed() const {
    Eigen::VectorXd v(2 * phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) {
        v(2 * j) = phi[j];
        v(2 * j + 1) = psi[j];
    }
    return v;
}

JetState JetState::unpack(const Eigen::VectorXd& v) {
    const auto m = static_cast<std::size_t>(v.size() / 2);
    JetState s{std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t j = 0; j < m; ++j) {
        s.phi[j] = v(2 * j);
        s.psi[j] = v(2 * j + 1);
    }
    return s;
}

double JetState::max_abs() const {
    double r = 0.0;
    for (double v : phi) r = std::max(r, std::abs(v));
    for (double v : psi) r = std::max(r, std::abs(v));
    return r;
}

std::string BranchPattern::str() const {
    std::string s;
    s.reserve(cells.size());
    for (Branch b : cells) s.push_back(static_cast<char>(b));
    return s;
}

BranchPattern BranchPattern::parse(const std::string& text) {
    BranchPattern p;
    for (char ch : text) {
        if (ch == ' ') continue;
        if (ch != 'L' && ch != 'R' && ch != 'F')
            throw Error(ErrorCode::invalid_argument, std::string("pattern letters are L, R, F; got '") + ch + "'");
        p.cells.push_back(static_cast<Branch>(ch));
    }
    return p;
}

JetState init_direct(const RealFn& u0, const RealFn& du0, const GridSpec& grid) {
    const int m = grid.m();
    JetState s{std::vector<double>(m), std::vector<double>(m)};
    for (int j = 0; j < m; ++j) {
        s.phi[j] = u0(grid.x(j));
        s.psi[j] = du0(grid.x(j));
    }
    return s;
}

double default_delta(const GridSpec& grid) { return std::ldexp(grid.h(), -26); }

JetState init_delta(const RealFn& u0, const GridSpec& grid, double delta, int q) {
    if (q < 1) throw Error(ErrorCode::invalid_argument, "q must be positive");
    const double h = grid.h();
    if (!(delta > 0.0) || !(delta < h / q))
        throw Error(ErrorCode::invalid_delta, "need 0 < delta < h/q");
    const int m = grid.m();
    std::vector<double> samples(m);
    for (int j = 0; j < m; ++j) samples[j] = u0(grid.x(j));
    JetState s{std::vector<double>(m), std::vector<double>(m)};
    for (int j = 0; j < m; ++j) {
        const double slope = (samples[(j + 1) % m] - samples[j]) / h;
        s.phi[j] = samples[j] + slope * delta;
        s.psi[j] = slope;
    }
    return s;
}

PiecewiseLinearFn assemble_from_jet(const JetState& state, const GridSpec& grid) {
    const int m = grid.m();
    const double h = grid.h();
    std::vector<Segment> segs;
    segs.reserve(2 * static_cast<std::size_t>(m));
    for (int c = 0; c < m; ++c) {
        const int r = (c + 1) % m;
        const double xl = grid.x(c);
        const double xr = c + 1 == m ? 1.0 : grid.x(c + 1);
        const double phi_l = state.phi[c], psi_l = state.psi[c];
        const double phi_r = state.phi[r], psi_r = state.psi[r];
        double t = 0.0;
        if (hermite_kink_offset(phi_l, psi_l, phi_r, psi_r, h, t)) {
            const double xk = xl + t;
            if (xk <= xl) {
                segs.push_back({xl, phi_r - psi_r * h, psi_r});
            } else if (xk >= xr) {
                segs.push_back({xl, phi_l, psi_l});
            } else {
                segs.push_back({xl, phi_l, psi_l});
                segs.push_back({xk, phi_r - psi_r * (h - t), psi_r});
            }
        } else {
            segs.push_back({xl, phi_l, (phi_r - phi_l) / h});
        }
    }
    return PiecewiseLinearFn::from_segments(std::move(segs));
}

JetState evaluate_on_grid(const PiecewiseLinearFn& f, const GridSpec& grid) {
    const int m = grid.m();
    JetState s{std::vector<double>(m), std::vector<double>(m)};
    for (int j = 0; j < m; ++j) {
        s.phi[j] = f.value(grid.x(j));
        s.psi[j] = f.left_slope(grid.x(j));
    }
    return s;
}

namespace {

struct StepGeometry {
    double h;
    double foot;      // foot point offset from the cell's left end, (1-mu)h
    double travel;    // mu*h
    double one_minus_mu;
};

StepGeometry geometry(const GridSpec& grid, const RationalCfl& cfl) {
    const double qm = static_cast<double>(cfl.q()) * grid.m();
    return StepGeometry{grid.h(), (cfl.q() - cfl.p()) / qm, cfl.p() / qm,
                        static_cast<double>(cfl.q() - cfl.p()) / cfl.q()};
}

template <bool RecordPattern>
void step_into(const JetState& in, JetState& out, BranchPattern* pattern, const StepGeometry& g) {
    const auto m = in.phi.size();
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t c = j == 0 ? m - 1 : j - 1;
        const double phi_l = in.phi[c], psi_l = in.psi[c];
        const double phi_r = in.phi[j], psi_r = in.psi[j];
        double t = 0.0;
        Branch b;
        if (hermite_kink_offset(phi_l, psi_l, phi_r, psi_r, g.h, t)) {
            if (g.foot <= t) {
                out.phi[j] = phi_l + psi_l * g.foot;
                out.psi[j] = psi_l;
                b = Branch::left;
            } else {
                out.phi[j] = phi_r - psi_r * g.travel;
                out.psi[j] = psi_r;
                b = Branch::right;
            }
        } else {
            out.phi[j] = phi_l + (phi_r - phi_l) * g.one_minus_mu;
            out.psi[j] = (phi_r - phi_l) / g.h;
            b = Branch::fallback;
        }
        if constexpr (RecordPattern) pattern->cells[c] = b;
    }
}

}  // namespace

StepResult jet_step(const JetState& state, const GridSpec& grid, const RationalCfl& cfl) {
    if (state.m() != grid.m()) throw Error(ErrorCode::invalid_argument, "state size does not match grid");
    StepResult r{state, BranchPattern{std::vector<Branch>(state.phi.size(), Branch::fallback)}};
    step_into<true>(state, r.state, &r.pattern, geometry(grid, cfl));
    return r;
}

JetState jet_advance(JetState state, const GridSpec& grid, const RationalCfl& cfl, std::int64_t steps) {
    if (state.m() != grid.m()) throw Error(ErrorCode::invalid_argument, "state size does not match grid");
    const StepGeometry g = geometry(grid, cfl);
    JetState next = state;
    for (std::int64_t n = 0; n < steps; ++n) {
        step_into<false>(state, next, nullptr, g);
        std::swap(state, next);
    }
    return state;
}

Classification classify(const PiecewiseLinearFn& f, const GridSpec& grid, int q) {
    const std::int64_t n = static_cast<std::int64_t>(grid.m()) * q;
    // Kinks within this many sub-cell widths of a boundary count as on it.
    constexpr double boundary_snap = 1e-9;
    // Fallback secants and Hermite lines can disagree in the last bits.
    constexpr double slope_noise = 1e-10;
    Classification out{false, n, {}};
    for (double y : f.kinks(slope_noise)) {
        const double u = y * static_cast<double>(n);
        const double r = std::round(u);
        std::int64_t idx = std::abs(u - r) <= boundary_snap ? static_cast<std::int64_t>(r) - 1
                                                             : static_cast<std::int64_t>(std::floor(u));
        idx %= n;
        if (idx < 0) idx += n;
        out.kink_subcell_indices.push_back(idx);
    }
    auto& k = out.kink_subcell_indices;
    std::sort(k.begin(), k.end());
    if (k.empty()) return out;
    out.min_gap_subcells = k.front() + n - k.back() - 1;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) out.min_gap_subcells = std::min(out.min_gap_subcells, k[i + 1] - k[i] - 1);
    out.defective = out.min_gap_subcells < q - 1;
    return out;
}

FixedPointCheck fixed_point_check(const JetState& state, const GridSpec& grid, const RationalCfl& cfl, double tol) {
    const JetState back = jet_advance(state, grid, cfl, return_step_count(cfl, grid));
    const double err = l1_plf(assemble_from_jet(state, grid), assemble_from_jet(back, grid));
    return FixedPointCheck{err <= tol, err};
}

FixedPointOnset fixed_point_onset(const JetState& state, const GridSpec& grid, const RationalCfl& cfl,
                                  int max_periods, double tol, double decay_floor) {
    const std::int64_t period = return_step_count(cfl, grid);
    const double initial_norm = l1_norm(assemble_from_jet(state, grid));
    FixedPointOnset out;
    JetState current = state;
    PiecewiseLinearFn current_fn = assemble_from_jet(current, grid);
    for (int k = 0; k < max_periods; ++k) {
        if (initial_norm > 0.0 && l1_norm(current_fn) < decay_floor * initial_norm) {
            out.decayed = true;
            return out;
        }
        JetState next = jet_advance(current, grid, cfl, period);
        PiecewiseLinearFn next_fn = assemble_from_jet(next, grid);
        out.last_error = l1_plf(current_fn, next_fn);
        out.periods_run = k + 1;
        if (out.last_error <= tol) {
            out.period = k;
            return out;
        }
        current = std::move(next);
        current_fn = std::move(next_fn);
    }
    return out;
}

JetState random_nondefective_state(const GridSpec& grid, int q, std::mt19937_64& rng) {
    const std::int64_t n = static_cast<std::int64_t>(grid.m()) * q;
    std::uniform_int_distribution<std::int64_t> start_dist(0, n - 1);
    std::uniform_int_distribution<int> extra_dist(0, q);
    std::uniform_real_distribution<double> inside(0.05, 0.95);
    std::uniform_real_distribution<double> value(-1.0, 1.0);

    const std::int64_t first = start_dist(rng);
    std::vector<std::int64_t> idx{first};
    for (;;) {
        const std::int64_t next = idx.back() + q + extra_dist(rng);
        if (next > first + n - q) break;
        idx.push_back(next);
    }
    std::vector<std::pair<double, double>> pts;
    for (std::int64_t k : idx) pts.emplace_back(wrap_unit((static_cast<double>(k % n) + inside(rng)) / n), value(rng));
    std::sort(pts.begin(), pts.end());
    std::vector<double> xs, vs;
    for (const auto& [x, v] : pts) {
        xs.push_back(x);
        vs.push_back(v);
    }
    return evaluate_on_grid(PiecewiseLinearFn::from_points(xs, vs), grid);
}

Eigen::MatrixXd build_pattern_matrix(const GridSpec& grid, const RationalCfl& cfl, const BranchPattern& pattern) {
    const int m = grid.m();
    if (static_cast<int>(pattern.cells.size()) != m)
        throw Error(ErrorCode::pattern_mismatch, "pattern length " + std::to_string(pattern.cells.size()) +
                                                     " does not match m = " + std::to_string(m));
    const StepGeometry g = geometry(grid, cfl);
    const double mu = cfl.mu();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int j = 0; j < m; ++j) {
        const int c = (j + m - 1) % m;
        const int pj = 2 * j, sj = 2 * j + 1, pc = 2 * c, sc = 2 * c + 1;
        switch (pattern.cells[c]) {
        case Branch::left:
            M(pj, pc) += 1.0;
            M(pj, sc) += g.foot;
            M(sj, sc) += 1.0;
            break;
        case Branch::right:
            M(pj, pj) += 1.0;
            M(pj, sj) -= g.travel;
            M(sj, sj) += 1.0;
            break;
        case Branch::fallback:
            M(pj, pc) += mu;
            M(pj, pj) += g.one_minus_mu;
            M(sj, pj) += 1.0 / g.h;
            M(sj, pc) -= 1.0 / g.h;
            break;
        }
    }
    return M;
}

DecayingEigenpair decaying_eigenvector(const Eigen::MatrixXd& M, const GridSpec& grid, const RationalCfl& cfl,
                                       const BranchPattern& pattern) {
    if (M.rows() != M.cols() || M.rows() != 2 * grid.m())
        throw Error(ErrorCode::pattern_mismatch, "matrix size does not match the grid");
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::not_found, "eigen decomposition failed");
    const auto& values = es.eigenvalues();
    std::vector<Eigen::Index> candidates;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double re = values(i).real();
        const double im = values(i).imag();
        const double mod = std::abs(re);
        if (std::abs(im) <= 1e-10 * std::max(1.0, mod) && mod > 1e-10 && mod < 1.0 - 1e-10) candidates.push_back(i);
    }
    if (candidates.empty()) throw Error(ErrorCode::not_found, "no real eigenvalue with modulus in (0,1)");
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(values(a).real()) > std::abs(values(b).real()); });

    for (Eigen::Index i : candidates) {
        const double lambda = values(i).real();
        Eigen::VectorXd v = es.eigenvectors().col(i).real();
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        v /= v(arg);
        const JetState s = JetState::unpack(v);
        const StepResult r = jet_step(s, grid, cfl);
        if (!(r.pattern == pattern)) continue;
        const double residual = (r.state.packed() - lambda * v).cwiseAbs().maxCoeff();
        if (residual <= 1e-9) return DecayingEigenpair{lambda, s};
    }
    throw Error(ErrorCode::not_found, "no decaying eigenvector realizes pattern " + pattern.str());
}

void write_csv(std::ostream& out, const JetState& state, const GridSpec& grid) {
    out << "j,x,phi,psi\n";
    char buf[128];
    for (int j = 0; j < state.m(); ++j) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", j, grid.x(j), state.phi[j], state.psi[j]);
        out << buf;
    }
}

}  // namespace jetadv
