#ifndef EOT_ROUNDING_HPP
#define EOT_ROUNDING_HPP

#include "eot/op_counter.hpp"
#include "eot/types.hpp"

namespace eot {

// Projects a nonnegative near-plan onto U(p, q) in three passes: shrink rows
// that carry too much mass, shrink columns likewise, then add the rank-one
// correction err_p err_q^T / ||err_p||_1. Rows or columns with zero mass keep
// scaling factor 1. The l1 change is at most twice the input marginal residual.
Matrix round_to_feasible(const Matrix& x, const Vector& p, const Vector& q, OpCounter* ops = nullptr);

TransportPlan round_to_feasible(const TransportPlan& x, const SimplexVector& p, const SimplexVector& q,
                                OpCounter* ops = nullptr);

}  // namespace eot

#endif  // EOT_ROUNDING_HPP
