#pragma once

#include <stdexcept>
#include <string>

namespace nwlab {

/// Failure classes surfaced by the library. The CLI maps these onto process
/// exit codes: configuration and input problems exit 1, numerical failures
/// (positivity loss, non-finite state, no convergence, lost front) exit 3.
enum class errc {
  ordering_violated,    // need alpha > beta >= 0
  magnitude_violated,   // need gamma < 0 and gamma below its threshold
  non_finite_input,
  wrong_branch,
  non_positive_time,
  non_positive_sample,
  positivity_lost,
  non_finite_state,
  not_converged,
  index_out_of_range,
  bad_time_order,
  level_not_crossed,
  front_left_window,
  query_off_grid,
  parse_error,
  unknown_key,
  constraint_violation,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ordering_violated:    return "ordering_violated";
    case errc::magnitude_violated:   return "magnitude_violated";
    case errc::non_finite_input:     return "non_finite_input";
    case errc::wrong_branch:         return "wrong_branch";
    case errc::non_positive_time:    return "non_positive_time";
    case errc::non_positive_sample:  return "non_positive_sample";
    case errc::positivity_lost:      return "positivity_lost";
    case errc::non_finite_state:     return "non_finite_state";
    case errc::not_converged:        return "not_converged";
    case errc::index_out_of_range:   return "index_out_of_range";
    case errc::bad_time_order:       return "bad_time_order";
    case errc::level_not_crossed:    return "level_not_crossed";
    case errc::front_left_window:    return "front_left_window";
    case errc::query_off_grid:       return "query_off_grid";
    case errc::parse_error:          return "parse_error";
    case errc::unknown_key:          return "unknown_key";
    case errc::constraint_violation: return "constraint_violation";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace nwlab
