#pragma once

#include <cstddef>

#include "inertiakit/types.hpp"

namespace inertiakit::signal {

// Numerical time derivative: second-order central differences in the
// interior, second-order one-sided stencils at the two ends. Output is in
// input-units per second and has the input's length and time base.
inline SignalTrace finite_diff(const SignalTrace& trace) {
  check_trace(trace, "finite_diff");
  const std::size_t m = trace.size();
  if (m < 3) throw ConfigError("finite_diff: need at least 3 samples");

  const auto& x = trace.values;
  SignalTrace out;
  out.dt = trace.dt;
  out.t0 = trace.t0;
  out.values.resize(m);

  const double inv2dt = 1.0 / (2.0 * trace.dt);
  out.values[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) * inv2dt;
  for (std::size_t k = 1; k + 1 < m; ++k)
    out.values[k] = (x[k + 1] - x[k - 1]) * inv2dt;
  out.values[m - 1] = (3.0 * x[m - 1] - 4.0 * x[m - 2] + x[m - 3]) * inv2dt;
  return out;
}

}  // namespace inertiakit::signal
