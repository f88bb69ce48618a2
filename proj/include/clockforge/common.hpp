#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace clockforge {

// Typed failures.  Each maps to one error condition named in the module
// contracts; callers can catch the base clockforge::error or a specific one.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_error : error {
  using error::error;
};
struct size_error : error {
  using error::error;
};
struct index_error : error {
  using error::error;
};
struct range_error : error {
  using error::error;
};
struct bracketing_failure : error {
  using error::error;
};
struct convergence_failure : error {
  using error::error;
};
struct not_conserved : error {
  using error::error;
};
struct case1_error : error {
  using error::error;
};
struct not_no_instance : error {
  using error::error;
};
struct path_invalid : error {
  using error::error;
};
struct integrator_tolerance : error {
  using error::error;
};

// Dimension cap for full-Hilbert-space constructions (default 2^20).
// Overridable through the CLOCKFORGE_MAX_DIM environment variable.
inline std::int64_t max_dimension() {
  if (const char* env = std::getenv("CLOCKFORGE_MAX_DIM")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::int64_t>(v);
  }
  return std::int64_t{1} << 20;
}

inline void require_dimension(std::int64_t dim, const std::string& what) {
  if (dim > max_dimension())
    throw size_error(what + ": dimension " + std::to_string(dim) +
                     " exceeds cap " + std::to_string(max_dimension()));
}

}  // namespace clockforge
