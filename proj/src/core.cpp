#include "jetadv/core.hpp"

#include <charconv>
#include <numeric>
#include <string>

namespace jetadv {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_grid: return "invalid grid";
    case ErrorCode::invalid_cfl: return "invalid CFL";
    case ErrorCode::invalid_cell: return "invalid cell";
    case ErrorCode::invalid_delta: return "invalid delta";
    case ErrorCode::grid_too_small: return "grid too small";
    case ErrorCode::pattern_mismatch: return "pattern mismatch";
    case ErrorCode::not_found: return "not found";
    case ErrorCode::unknown_scheme: return "unknown scheme";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::not_bracketed: return "not bracketed";
    case ErrorCode::too_few_records: return "too few records";
    case ErrorCode::invalid_argument: return "invalid argument";
    }
    return "error";
}

double GridSpec::x(int j) const noexcept {
    int r = j % m_;
    if (r < 0) r += m_;
    return static_cast<double>(r) / m_;
}

GridSpec make_grid(int m) {
    if (m < 2) throw Error(ErrorCode::invalid_grid, "need m >= 2, got " + std::to_string(m));
    return GridSpec(m);
}

RationalCfl make_cfl(int p, int q, double a, const GridSpec& grid) {
    if (p <= 0 || q <= 0 || p >= q)
        throw Error(ErrorCode::invalid_cfl, "need 0 < p/q < 1, got " + std::to_string(p) + "/" + std::to_string(q));
    if (std::gcd(p, q) != 1)
        throw Error(ErrorCode::invalid_cfl, "p and q must be coprime, got " + std::to_string(p) + "/" + std::to_string(q));
    if (!(a > 0.0)) throw Error(ErrorCode::invalid_cfl, "advection speed must be positive");
    const double dt = static_cast<double>(p) / (static_cast<double>(q) * grid.m() * a);
    return RationalCfl(p, q, a, dt);
}

std::int64_t lattice_size(const RationalCfl& cfl, const GridSpec& grid) {
    return static_cast<std::int64_t>(grid.m()) * cfl.q();
}

std::int64_t return_step_count(const RationalCfl& cfl, const GridSpec& grid) {
    const std::int64_t n = lattice_size(cfl, grid);
    return n / std::gcd(static_cast<std::int64_t>(cfl.p()), n);
}

std::int64_t subcell_offset_after(const RationalCfl& cfl, const GridSpec& grid, std::int64_t steps) {
    const std::int64_t n = lattice_size(cfl, grid);
    std::int64_t r = (steps % n) * cfl.p() % n;
    if (r < 0) r += n;
    return r;
}

Ratio parse_ratio(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos)
        throw Error(ErrorCode::invalid_cfl, "expected a rational literal p/q, got '" + text + "'");
    Ratio r{};
    const char* begin = text.data();
    const char* mid = begin + slash;
    const char* end = begin + text.size();
    auto [p_end, p_ec] = std::from_chars(begin, mid, r.p);
    auto [q_end, q_ec] = std::from_chars(mid + 1, end, r.q);
    if (p_ec != std::errc{} || q_ec != std::errc{} || p_end != mid || q_end != end)
        throw Error(ErrorCode::invalid_cfl, "expected a rational literal p/q, got '" + text + "'");
    return r;
}

}  // namespace jetadv
