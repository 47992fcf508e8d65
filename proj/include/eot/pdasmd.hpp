#ifndef EOT_PDASMD_HPP
#define EOT_PDASMD_HPP

#include "eot/rng.hpp"
#include "eot/semidual.hpp"
#include "eot/solve_result.hpp"
#include "eot/types.hpp"

#include <cstdint>
#include <vector>

namespace eot {

/// Primal-dual accelerated stochastic proximal mirror descent on the semi-dual.
///
/// The mirror map is w(z) = |z|^2/2 for both geometries, so the mirror and
/// proximal steps have closed forms. `norm_kind` selects the geometry of the
/// proximal step and the smoothness constants (L_bar = 1/eta for L2, 5/eta
/// for LInf).
struct SolverConfig {
  NormKind norm_kind = NormKind::LInf;
  std::int64_t inner_loops = 0;  // 0 selects ceil(n/B)
  std::int64_t max_epochs = 0;   // 0 selects default_max_epochs()
  std::int64_t batch = 1;
  std::uint64_t seed = 0;
  double stop_residual = 0.0;  // target on ||A x - b||_1
  double stop_gap = 0.0;       // target on f(x) + phi(lambda)
};

struct Schedule {
  double tau1;
  double tau2;
  double alpha;
};

/// tau1 = 2/(s+4), tau2 = 1/(2B), alpha = 1/(9 tau1 L_bar).
Schedule schedule(std::int64_t s, double l_bar, std::int64_t batch);

/// Inverse-CDF sampler over the component weights L_i/(n L_bar).
class ComponentSampler {
 public:
  explicit ComponentSampler(const SmoothnessProfile& profile);

  Index draw(Rng& rng) const;
  void draw(Rng& rng, std::int64_t count, std::vector<Index>& out) const;
  const Vector& weights() const noexcept { return weights_; }

 private:
  Vector weights_;
  std::vector<double> cumulative_;
};

std::vector<Index> sample_components(const SmoothnessProfile& profile, std::int64_t batch, Rng& rng);

/// mu + (1/B) sum_{i in I} (grad phi_i(v) - grad phi_i(v_tilde)) / (n p_i).
Vector reduced_gradient(ConstVecRef v, ConstVecRef v_tilde, ConstVecRef mu, const std::vector<Index>& indices,
                        const SmoothnessProfile& profile, const EntropicProblem& prob, OpCounter* ops = nullptr);

/// argmin_z { V_{z_k}(z)/alpha + <grad, z> } = z - alpha grad.
Vector mirror_step_z(ConstVecRef z, ConstVecRef grad, double alpha);

/// argmin_y { (9 L_bar/2) |y - v|_H^2 + <grad, y> }.
/// L2: v - grad/(9 L_bar). LInf: v - (|grad|_1/(9 L_bar)) sign(grad), sign(0) = -1.
Vector prox_step_y(ConstVecRef v, ConstVecRef grad, double l_bar, NormKind norm_kind);

std::int64_t default_inner_loops(Index n, std::int64_t batch);

/// Ten times the epoch count at which the convergence bound meets both stop
/// targets, with the log factors of the dual radius dropped.
std::int64_t default_max_epochs(const EntropicProblem& prob, NormKind norm_kind, std::int64_t inner_loops,
                                double stop_residual, double stop_gap);

/// Single-sample variant. Requires cfg.batch == 1.
SolveResult pdasmd_solve(const EntropicProblem& prob, const SolverConfig& cfg);

/// Batched variant: B components per inner step and tau2 = 1/(2B).
SolveResult pdasmd_batch_solve(const EntropicProblem& prob, const SolverConfig& cfg);

/// Full-trajectory hook for tests: called after each inner step with (k, v, y, z).
struct TraceSink {
  virtual ~TraceSink() = default;
  virtual void on_inner(std::int64_t k, const Vector& v, const Vector& y, const Vector& z) = 0;
};

SolveResult pdasmd_batch_solve(const EntropicProblem& prob, const SolverConfig& cfg, TraceSink* trace);

/// epsilon-solution of OT: derive (eta, eps'), smooth the marginals, run
/// PDASMD(-B) until residual <= eps'/2 and gap <= eps/4, round onto U(p, q).
ApproxResult approximate_ot(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q, double eps,
                            SolverConfig cfg);

}  // namespace eot

#endif  // EOT_PDASMD_HPP
