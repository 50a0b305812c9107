#include "jetadv/plf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace jetadv {

double wrap_unit(double x) noexcept {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

Shift Shift::lattice(std::int64_t subcells, std::int64_t lattice_size) {
    if (lattice_size <= 0) throw Error(ErrorCode::invalid_argument, "lattice size must be positive");
    std::int64_t num = subcells % lattice_size;
    if (num < 0) num += lattice_size;
    const std::int64_t g = std::gcd(num, lattice_size);
    return Shift{num / g, lattice_size / g, 0.0};
}

Shift Shift::operator+(const Shift& other) const {
    const std::int64_t den_lcm = std::lcm(den, other.den);
    std::int64_t n = (num * (den_lcm / den) + other.num * (den_lcm / other.den)) % den_lcm;
    const std::int64_t g = std::gcd(n, den_lcm);
    return Shift{n / g, den_lcm / g, residual + other.residual};
}

double Shift::value() const noexcept {
    return wrap_unit(static_cast<double>(num) / static_cast<double>(den) + residual);
}

PiecewiseLinearFn PiecewiseLinearFn::constant(double c) {
    return from_segments({Segment{0.0, c, 0.0}});
}

PiecewiseLinearFn PiecewiseLinearFn::from_segments(std::vector<Segment> segments) {
    if (segments.empty()) throw Error(ErrorCode::invalid_argument, "piecewise-linear function needs a segment");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const double x = segments[i].x;
        if (!(x >= 0.0 && x < 1.0)) throw Error(ErrorCode::invalid_argument, "segment start outside [0,1)");
        if (i > 0 && !(x > segments[i - 1].x))
            throw Error(ErrorCode::invalid_argument, "segment starts must be strictly increasing");
    }
    PiecewiseLinearFn f;
    f.base_ = std::move(segments);
    f.segs_ = f.base_;
    return f;
}

PiecewiseLinearFn PiecewiseLinearFn::from_points(const std::vector<double>& xs, const std::vector<double>& values) {
    if (xs.size() != values.size() || xs.empty())
        throw Error(ErrorCode::invalid_argument, "need matching, non-empty position and value lists");
    std::vector<Segment> segs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t k = (i + 1) % xs.size();
        const double next_x = k == 0 ? xs[0] + 1.0 : xs[k];
        const double len = next_x - xs[i];
        segs[i] = Segment{xs[i], values[i], len > 0.0 ? (values[k] - values[i]) / len : 0.0};
    }
    if (xs.size() == 1) segs[0].slope = 0.0;
    return from_segments(std::move(segs));
}

void PiecewiseLinearFn::materialize() {
    const double offset = static_cast<double>(shift_.num) / static_cast<double>(shift_.den) + shift_.residual;
    segs_ = base_;
    for (auto& s : segs_) s.x = wrap_unit(s.x + offset);
    std::sort(segs_.begin(), segs_.end(), [](const Segment& l, const Segment& r) { return l.x < r.x; });
    // Rounding can collapse two nearly coincident starts; the earlier one then has zero length.
    std::vector<Segment> unique;
    unique.reserve(segs_.size());
    for (const auto& s : segs_) {
        if (!unique.empty() && unique.back().x == s.x)
            unique.back() = s;
        else
            unique.push_back(s);
    }
    segs_ = std::move(unique);
}

PiecewiseLinearFn PiecewiseLinearFn::shifted(const Shift& s) const {
    PiecewiseLinearFn g;
    g.base_ = base_;
    g.shift_ = shift_ + s;
    g.materialize();
    return g;
}

std::size_t PiecewiseLinearFn::locate_left(double x) const {
    auto it = std::lower_bound(segs_.begin(), segs_.end(), x, [](const Segment& s, double v) { return s.x < v; });
    const auto k = static_cast<std::size_t>(it - segs_.begin());
    return k == 0 ? segs_.size() - 1 : k - 1;
}

double PiecewiseLinearFn::value(double x) const {
    const double y = wrap_unit(x);
    const Segment& s = segs_[locate_left(y)];
    return s.at(y < s.x ? y + 1.0 : y);
}

double PiecewiseLinearFn::left_slope(double x) const {
    return segs_[locate_left(wrap_unit(x))].slope;
}

double PiecewiseLinearFn::segment_end(std::size_t i) const {
    return i + 1 < segs_.size() ? segs_[i + 1].x : segs_[0].x + 1.0;
}

double PiecewiseLinearFn::segment_end_value(std::size_t i) const {
    return segs_[i].at(segment_end(i));
}

std::vector<double> PiecewiseLinearFn::kinks(double rel_tol) const {
    std::vector<double> out;
    const std::size_t n = segs_.size();
    double scale = 0.0;
    for (const auto& s : segs_) scale = std::max(scale, std::abs(s.slope));
    const double tol = rel_tol * scale;
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = segs_[(i + n - 1) % n].slope;
        if (std::abs(segs_[i].slope - prev) > tol) out.push_back(segs_[i].x);
    }
    return out;
}

double PiecewiseLinearFn::max_value() const {
    double best = segs_.front().value;
    for (std::size_t i = 0; i < segs_.size(); ++i) best = std::max({best, segs_[i].value, segment_end_value(i)});
    return best;
}

double PiecewiseLinearFn::min_value() const {
    double best = segs_.front().value;
    for (std::size_t i = 0; i < segs_.size(); ++i) best = std::min({best, segs_[i].value, segment_end_value(i)});
    return best;
}

PiecewiseLinearFn shift_periodic(const PiecewiseLinearFn& f, const Shift& s) { return f.shifted(s); }

PiecewiseLinearFn shift_periodic(const PiecewiseLinearFn& f, double s) { return f.shifted(Shift::real(s)); }

namespace {

// Line of f valid on a sub-interval containing `mid`, as a value function on [0,1].
struct LocalLine {
    const Segment* seg;
    double wrap;  // 1 if the interval sits before the segment's start (wrapped piece)
    double at(double y) const noexcept { return seg->at(y + wrap); }
};

LocalLine line_at(const PiecewiseLinearFn& f, double mid) {
    const auto& segs = f.segments();
    auto it = std::upper_bound(segs.begin(), segs.end(), mid, [](double v, const Segment& s) { return v < s.x; });
    const Segment* seg = it == segs.begin() ? &segs.back() : &*(it - 1);
    return LocalLine{seg, mid < seg->x ? 1.0 : 0.0};
}

std::vector<double> merged_breaks(const PiecewiseLinearFn& f, const PiecewiseLinearFn* g) {
    std::vector<double> pts{0.0};
    for (const auto& s : f.segments()) pts.push_back(s.x);
    if (g != nullptr)
        for (const auto& s : g->segments()) pts.push_back(s.x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(1.0);
    return pts;
}

// Exact integral of |d| for d linear on an interval of length len with end values da, db.
double abs_linear_integral(double da, double db, double len) noexcept {
    const double aa = std::abs(da);
    const double ab = std::abs(db);
    if ((da >= 0.0 && db >= 0.0) || (da <= 0.0 && db <= 0.0)) return 0.5 * (aa + ab) * len;
    // Sign change at the root; two triangles.
    return 0.5 * (aa * aa + ab * ab) / (aa + ab) * len;
}

}  // namespace

double l1_plf(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
    const auto pts = merged_breaks(f, &g);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (!(b > a)) continue;
        const double mid = 0.5 * (a + b);
        const LocalLine lf = line_at(f, mid);
        const LocalLine lg = line_at(g, mid);
        total += abs_linear_integral(lf.at(a) - lg.at(a), lf.at(b) - lg.at(b), b - a);
    }
    return total;
}

double l1_norm(const PiecewiseLinearFn& f) { return l1_plf(f, PiecewiseLinearFn::constant(0.0)); }

double l1_vs_function(const PiecewiseLinearFn& f, const std::function<double(double)>& u, int refinement) {
    if (refinement < 0) throw Error(ErrorCode::invalid_argument, "refinement must be non-negative");
    static constexpr std::array<double, 3> nodes{-0.7745966692414833770, 0.0, 0.7745966692414833770};
    static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const auto pts = merged_breaks(f, nullptr);
    const int pieces = 1 << refinement;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (!(b > a)) continue;
        const LocalLine line = line_at(f, 0.5 * (a + b));
        const double width = (b - a) / pieces;
        for (int k = 0; k < pieces; ++k) {
            const double lo = a + k * width;
            const double c = lo + 0.5 * width;
            double sum = 0.0;
            for (std::size_t g = 0; g < nodes.size(); ++g) {
                const double y = c + 0.5 * width * nodes[g];
                sum += weights[g] * std::abs(line.at(y) - u(y));
            }
            total += 0.5 * width * sum;
        }
    }
    return total;
}

double CellPiece::value(double x) const noexcept {
    if (kind == Kind::fallback) return phi_left + slope_left * (x - x_left);
    return x <= x_kink ? phi_left + slope_left * (x - x_left) : phi_right + slope_right * (x - x_right);
}

double CellPiece::left_slope(double x) const noexcept {
    if (kind == Kind::fallback) return slope_left;
    return x <= x_kink ? slope_left : slope_right;
}

bool hermite_kink_offset(double phi_l, double psi_l, double phi_r, double psi_r, double h, double& offset) noexcept {
    if (psi_l == psi_r) return false;
    const double t = (phi_l - phi_r + psi_r * h) / (psi_r - psi_l);
    if (!(t > 0.0 && t < h)) return false;
    offset = t;
    return true;
}

CellPiece cell_interpolant(double x_l, double x_r, double phi_l, double psi_l, double phi_r, double psi_r) {
    if (!(x_l < x_r)) throw Error(ErrorCode::invalid_cell, "need x_L < x_R");
    const double h = x_r - x_l;
    double t = 0.0;
    if (hermite_kink_offset(phi_l, psi_l, phi_r, psi_r, h, t))
        return CellPiece{CellPiece::Kind::genuine, x_l, x_r, x_l + t, phi_l, psi_l, phi_r, psi_r};
    const double secant = (phi_r - phi_l) / h;
    return CellPiece{CellPiece::Kind::fallback, x_l, x_r, 0.0, phi_l, secant, phi_r, secant};
}

void write_csv(std::ostream& out, const PiecewiseLinearFn& f) {
    out << "position,value\n";
    char buf[96];
    for (const auto& s : f.segments()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.x, s.value);
        out << buf;
    }
}

}  // namespace jetadv
