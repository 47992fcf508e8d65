#ifndef EOT_SOLVE_RESULT_HPP
#define EOT_SOLVE_RESULT_HPP

#include "eot/op_counter.hpp"
#include "eot/types.hpp"

#include <cstdint>
#include <vector>

namespace eot {

/// Output of a single entropic solver run.
struct SolveResult {
  TransportPlan plan;
  Vector lambda;                         // last dual anchor (PDASMD) or log_v (Sinkhorn)
  std::int64_t epochs_run = 0;           // outer epochs; equals iterations for Sinkhorn variants
  std::int64_t iterations = 0;           // inner iterations / scaling updates
  std::vector<double> residual_history;  // marginal residual, once per epoch or check
  std::vector<double> gap_history;       // duality-gap surrogate (PDASMD only)
  OpCounter ops;
  bool converged = false;
};

/// epsilon-solution of unregularized OT plus the run that produced it.
struct ApproxResult {
  TransportPlan plan;  // feasible for (p, q)
  ApproxParams params;
  SolveResult solve;
  OpCounter ops;  // solver plus rounding
  bool converged = false;
};

}  // namespace eot

#endif  // EOT_SOLVE_RESULT_HPP
