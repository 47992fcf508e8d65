#ifndef EOT_TYPES_HPP
#define EOT_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace eot {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
// Plans and costs are stored dense and row-major.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kSimplexTol = 1e-12;
inline constexpr double kFeasibleTol = 1e-9;

enum class ErrorCode {
  NegativeEntry,
  SumNotOne,
  NonFinite,
  ShapeMismatch,
  TooSmallProblem,
  ZeroCost,
  BadEpsPrime,
  BadParameter,
  IndexOutOfRange,
  DegenerateRow,
  AllZero,
  TooLarge,
  DegenerateInput,
  FileNotFound,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Probability vector: nonnegative entries summing to one (within 1e-12).
/// Construction validates; there is no silent renormalization.
class SimplexVector {
 public:
  SimplexVector() = default;
  explicit SimplexVector(Vector values);

  const Vector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  double operator[](Index i) const { return values_[i]; }
  double min_entry() const { return values_.minCoeff(); }

 private:
  Vector values_;
};

SimplexVector validate_simplex(const Vector& values);

/// Square nonnegative ground cost with its cached max entry.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  double max_abs() const noexcept { return max_abs_; }
  Index size() const noexcept { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
  double max_abs_ = 0.0;
};

/// Nonnegative n x n coupling with total mass at most 1 + 1e-9.
class TransportPlan {
 public:
  TransportPlan() = default;
  explicit TransportPlan(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  Index size() const noexcept { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  Vector row_sums() const { return entries_.rowwise().sum(); }
  Vector col_sums() const { return entries_.colwise().sum().transpose(); }

 private:
  Matrix entries_;
};

/// Entropy-regularized OT instance consumed by every solver. Marginals are
/// the smoothed (strictly positive) ones.
class EntropicProblem {
 public:
  EntropicProblem(CostMatrix cost, SimplexVector p, SimplexVector q, double eta);

  const CostMatrix& cost() const noexcept { return cost_; }
  const SimplexVector& p() const noexcept { return p_; }
  const SimplexVector& q() const noexcept { return q_; }
  double eta() const noexcept { return eta_; }
  Index size() const noexcept { return cost_.size(); }

 private:
  CostMatrix cost_;
  SimplexVector p_;
  SimplexVector q_;
  double eta_;
};

struct ApproxParams {
  double eps = 0.0;
  double eps_prime = 0.0;
  double eta = 0.0;
};

enum class NormKind { L2, LInf };

const char* to_string(NormKind kind);

}  // namespace eot

#endif  // EOT_TYPES_HPP
