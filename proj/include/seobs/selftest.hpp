#pragma once

// Numerical property suites run by `seobs selftest`.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "seobs/observer.hpp"

namespace seobs {

using InnovationFn = std::function<Innovation(const Pose&, const MeasurementSet&)>;

struct PropertyResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // worst residual observed
  double tolerance = 0.0;  // pass threshold on `worst`
};

struct SelftestOptions {
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  /// Innovation under test; defaults to seobs::innovation. Replacing it is the
  /// mutation hook used to confirm the suites can fail.
  InnovationFn innovation;
};

/// Central difference (h = 1e-6) of s -> C(exp(sU) Xhat, Y) against <Delta, U>.
/// Residual: |fd - <Delta,U>| / max(|<Delta,U>|, ||Delta|| ||U||).
PropertyResult check_gradient_oracle(std::mt19937_64& rng, std::size_t samples,
                                     const InnovationFn& fn);
/// Projected-sum form against the block form, max abs difference.
PropertyResult check_innovation_forms(std::mt19937_64& rng, std::size_t samples,
                                      const InnovationFn& fn);
/// Projection-form bias law against the component form, max abs difference.
PropertyResult check_bias_forms(std::mt19937_64& rng, std::size_t samples);
/// Delta(Xhat Q, rho(Q, Y)) = Delta(Xhat, Y) and the same for the cost.
PropertyResult check_equivariance(std::mt19937_64& rng, std::size_t samples,
                                  const InnovationFn& fn);
/// Two bias-free runs with equal E(0) and references, different X(0) and
/// inputs: max_t ||E1(t) - E2(t)|| over 10 s at dt = 1e-3.
PropertyResult check_error_autonomy(std::mt19937_64& rng);
/// Mean |dV_b/dt + ||Delta||^2| along the built-in Case 1 run with the
/// projection-form bias law.
PropertyResult check_lyapunov_identity();

std::vector<PropertyResult> run_selftest(const SelftestOptions& options);

}  // namespace seobs
