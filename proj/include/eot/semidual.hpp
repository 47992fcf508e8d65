#ifndef EOT_SEMIDUAL_HPP
#define EOT_SEMIDUAL_HPP

#include "eot/op_counter.hpp"
#include "eot/types.hpp"

namespace eot {

// Semi-dual of entropic OT in the variable lambda (column potentials). The
// row potentials tau are eliminated in closed form and never stored:
//
//   phi(lambda) = -<q', lambda> - eta sum_i p'_i log p'_i
//                 + eta sum_i p'_i logsumexp_j((lambda_j - C_ij)/eta)
//               = (1/n) sum_i phi_i(lambda),
//   phi_i(lambda) = n p'_i [ -<q', lambda> - eta log p'_i + eta logsumexp_j((lambda_j - C_ij)/eta) ].
//
// All kernels subtract the row maximum before exponentiating.

using ConstVecRef = Eigen::Ref<const Vector>;

/// Row-i softmax of (lambda - C_i.)/eta written into out (resized to n).
void softmax_row(Index i, ConstVecRef lambda, const EntropicProblem& prob, Vector& out, OpCounter* ops = nullptr);

Vector tau_of_lambda(ConstVecRef lambda, const EntropicProblem& prob);

double semidual_value(ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops = nullptr);
double semidual_component_value(Index i, ConstVecRef lambda, const EntropicProblem& prob);

Vector semidual_component_grad(Index i, ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops = nullptr);

/// grad phi(lambda) = -q' + sum_i p'_i softmax_i, O(n^2).
Vector semidual_full_grad(ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops = nullptr);

/// Value and gradient in one pass over the cost matrix.
double semidual_value_and_grad(ConstVecRef lambda, const EntropicProblem& prob, Vector& grad,
                               OpCounter* ops = nullptr);

/// X(lambda)_ij = p'_i softmax_j((lambda_j - C_ij)/eta); rows sum to p'.
Matrix primal_from_dual(ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops = nullptr);

struct SmoothnessProfile {
  Vector per_component;  // L_i
  double mean = 0.0;     // (sum L_i)/n
  NormKind norm_kind = NormKind::LInf;

  /// Sampling weight L_i/(n mean) of component i.
  double sampling_weight(Index i) const {
    return per_component[i] / (static_cast<double>(per_component.size()) * mean);
  }
};

/// L_i = n p'_i/eta for L2 and 5 n p'_i/eta for LInf.
SmoothnessProfile smoothness_constants(const EntropicProblem& prob, NormKind norm_kind);

}  // namespace eot

#endif  // EOT_SEMIDUAL_HPP
