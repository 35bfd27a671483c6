#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "inertiakit/types.hpp"

namespace inertiakit::signal {

// Gaussian sampler with a fixed algorithm (Box-Muller over mt19937_64) so
// that a seed produces the same stream on every platform and standard
// library. std::normal_distribution is implementation-defined and would
// break byte-identical reproducibility.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // uniforms in (0,1]; u1 > 0 keeps the log finite
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// i.i.d. zero-mean Gaussian noise, reproducible per seed. Input unchanged.
inline SignalTrace add_noise(const SignalTrace& trace, const NoiseSpec& spec) {
  check_trace(trace, "add_noise");
  check_noise(spec);
  SignalTrace out = trace;
  if (spec.sigma == 0.0) return out;
  GaussianSampler gauss(spec.seed);
  for (double& v : out.values) v += spec.sigma * gauss();
  return out;
}

}  // namespace inertiakit::signal
