#pragma once

#include <string>
#include <vector>

namespace gradmom {

/// One property of the built-in validation suite.
struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;  ///< measured residual / short diagnostic
};

struct ValidateOptions {
  std::vector<std::string> only;     ///< run only properties whose name contains one of these
  double half_range_seed_scale = 1.0;  ///< fault-injection hook for tests
};

/// Run the cross-module property suite: orthonormality, recursion residual,
/// parity, half-range recurrence vs quadrature, half-space matrix norms,
/// Onsager s.p.d., boundary-operator structure, the bidiagonal norm
/// identity, collision-operator properties, upwind consistency, RK4 order
/// and a short stability run.
std::vector<PropertyResult> run_validation(const ValidateOptions& options = {});

}  // namespace gradmom
