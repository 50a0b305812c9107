#pragma once

#include <stdexcept>
#include <string>

namespace jetadv {

enum class ErrorCode {
    invalid_grid,
    invalid_cfl,
    invalid_cell,
    invalid_delta,
    grid_too_small,
    pattern_mismatch,
    not_found,
    unknown_scheme,
    unsupported,
    empty_input,
    not_bracketed,
    too_few_records,
    invalid_argument,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; callers switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace jetadv
