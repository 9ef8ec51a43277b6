#pragma once

#include <stdexcept>
#include <string>

namespace adlab {

/// Invalid user-supplied configuration (bad JSON, unknown key, out-of-range value).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition does not hold: degenerate spectrum, grid too
/// coarse for the requested oscillation rate, path touching a singular set.
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure detected after the fact: eigen residual out of tolerance,
/// lost unitarity, non-finite state.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_config(bool ok, const std::string& msg) {
  if (!ok) throw config_error(msg);
}

inline void require_pre(bool ok, const std::string& msg) {
  if (!ok) throw precondition_error(msg);
}

inline void require_num(bool ok, const std::string& msg) {
  if (!ok) throw numeric_error(msg);
}

}  // namespace adlab
