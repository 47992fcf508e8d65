#ifndef EOT_BENCH_HPP
#define EOT_BENCH_HPP

#include "eot/op_counter.hpp"
#include "eot/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace eot {

// ---------------------------------------------------------------------------
// Synthetic marginals

struct ImageMarginal {
  Index side = 0;
  Matrix pixels;  // side x side, strictly positive
  SimplexVector normalized;
  Index fg_row = 0, fg_col = 0, fg_side = 0;  // foreground square
};

/// Square foreground (side floor(s sqrt 0.2), pixels ~ U[0,3]) placed
/// uniformly on a U[0,1] background; normalized, floored by 1e-6/n and
/// renormalized.
ImageMarginal gen_synthetic_image(Index side, std::uint64_t seed);

struct OtInstance {
  SimplexVector p;
  SimplexVector q;
  CostMatrix cost;
};

/// l1 distance between pixel locations as ground cost.
OtInstance image_pair_to_problem(const ImageMarginal& a, const ImageMarginal& b);

/// Random dense instance: costs ~ U[0,1], marginals from U(0,1] weights.
OtInstance random_instance(Index n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exact small-instance oracle

inline constexpr Index kExactOtMaxSize = 32;

/// Optimal value of min <C,X> over U(p,q) for n <= 32: closed form for
/// n = 2, transportation simplex with Bland's rule otherwise.
double exact_ot_small(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q);

/// Transportation simplex on arbitrary dense data; returns an optimal plan.
Matrix transportation_simplex(const Matrix& cost, const Vector& supply, const Vector& demand);

// ---------------------------------------------------------------------------
// Experiments

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares fit of ln y against ln x.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

enum class Algo { PdasmdL2, PdasmdLInf, Sinkhorn, StochasticSinkhorn };

const char* to_string(Algo algo);
Algo parse_algo(const std::string& name);

struct ExperimentRecord {
  std::string algo;
  std::int64_t n = 0;
  std::int64_t batch = 1;
  double eps = 0.0;  // absolute accuracy used
  std::uint64_t ops_total = 0;
  std::int64_t iterations = 0;
  double residual = 0.0;  // final marginal residual of the entropic solver
  double cost = 0.0;      // <C, X_hat> of the rounded plan
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  bool converged = false;
};

struct ExperimentOptions {
  bool eps_relative = true;  // eps is a fraction of ||C||_inf
  int jobs = 1;
  bool wall_clock = false;  // measure wall time (otherwise 0, keeping output byte-stable)
};

/// One generated image pair of the given side (n = side^2), reproducible from seed.
OtInstance image_instance(Index side, std::uint64_t seed);

ExperimentRecord run_cell(Algo algo, Index side, std::int64_t batch, double eps, std::uint64_t seed,
                          const ExperimentOptions& opts);

std::vector<ExperimentRecord> run_scaling_experiment(const std::vector<Index>& sides, double eps, Algo algo,
                                                     const std::vector<std::uint64_t>& seeds,
                                                     const ExperimentOptions& opts = {});

std::vector<ExperimentRecord> run_batch_experiment(Index side, const std::vector<std::int64_t>& batches, double eps,
                                                   const std::vector<std::uint64_t>& seeds,
                                                   const ExperimentOptions& opts = {});

std::vector<ExperimentRecord> run_eps_experiment(Index side, const std::vector<double>& eps_list,
                                                 const std::vector<Algo>& algos,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 const ExperimentOptions& opts = {});

/// Sorts by (algo, n, B, eps, seed).
void sort_records(std::vector<ExperimentRecord>& records);

inline constexpr const char* kCsvHeader = "algo,n,B,eps,ops_total,iterations,residual,cost,seed,wall_ms";

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);

/// Averages ops_total over records sharing the same x(record) and fits the
/// log-log slope of the mean against x.
SlopeFit slope_of_mean_ops(const std::vector<ExperimentRecord>& records,
                           const std::function<double(const ExperimentRecord&)>& x_of);

}  // namespace eot

#endif  // EOT_BENCH_HPP
