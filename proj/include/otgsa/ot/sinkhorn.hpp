#pragma once

#include <stdexcept>

#include "otgsa/ot/measure.hpp"

namespace otgsa::ot {

struct SinkhornOptions {
  double epsilon = 1e-2;
  int max_iter = 10000;
  double tol = 1e-9;  // L1 marginal violation at convergence
};

struct SinkhornDiagnostics {
  int iterations = 0;
  double marginal_violation = 0.0;
};

class SinkhornError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entropy-regularized coupling via log-domain scaling updates. The reported
// cost is <k, pi> without the entropy term. Throws SinkhornError when the
// marginal violation has not reached `tol` within `max_iter` sweeps.
TransportPlan solve_sinkhorn(const DiscreteMeasure& source,
                             const DiscreteMeasure& target,
                             const SinkhornOptions& options = {},
                             SinkhornDiagnostics* diagnostics = nullptr);

// Serial reference for the OpenMP kernel; bit-identical results expected.
TransportPlan solve_sinkhorn_serial(const DiscreteMeasure& source,
                                    const DiscreteMeasure& target,
                                    const SinkhornOptions& options = {},
                                    SinkhornDiagnostics* diagnostics = nullptr);

}  // namespace otgsa::ot
