#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace polyshock {

// Absolute tolerance used by every equality/tie test in the library.
inline constexpr double kTol = 1e-12;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Errc {
    length_mismatch,
    non_increasing_states,
    non_convex,
    equal_states,
    inadmissible_up_jump,
    non_increasing_breakpoints,
    redundant_piece,
    empty_window,
    nonpositive_time,
    out_of_horizon,
    inadmissible_merge_internal,
    inadmissible_species,
    role_violation,
    not_covered,
    schema_error,
    validation_error,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

// Shortest round-trip decimal formatting; the canonical form for all file output.
std::string format_double(double x);

}  // namespace polyshock
