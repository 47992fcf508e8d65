#include "eot/types.hpp"

#include <cmath>
#include <sstream>

namespace eot {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooSmallProblem: return "TooSmallProblem";
    case ErrorCode::ZeroCost: return "ZeroCost";
    case ErrorCode::BadEpsPrime: return "BadEpsPrime";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

const char* to_string(NormKind kind) { return kind == NormKind::L2 ? "l2" : "linf"; }

SimplexVector::SimplexVector(Vector values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw Error(ErrorCode::NonFinite, "simplex vector has non-finite entries");
  if (values_.size() > 0 && values_.minCoeff() < 0.0) {
    std::ostringstream os;
    os << "min entry " << values_.minCoeff();
    throw Error(ErrorCode::NegativeEntry, os.str());
  }
  const double s = values_.sum();
  if (std::abs(s - 1.0) > kSimplexTol) {
    std::ostringstream os;
    os.precision(17);
    os << "entries sum to " << s;
    throw Error(ErrorCode::SumNotOne, os.str());
  }
}

SimplexVector validate_simplex(const Vector& values) { return SimplexVector(values); }

CostMatrix::CostMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw Error(ErrorCode::ShapeMismatch, "cost matrix must be square");
  if (!entries_.allFinite()) throw Error(ErrorCode::NonFinite, "cost matrix has non-finite entries");
  if (entries_.size() > 0) {
    if (entries_.minCoeff() < 0.0) throw Error(ErrorCode::NegativeEntry, "cost matrix has negative entries");
    max_abs_ = entries_.maxCoeff();
  }
}

// The total-mass bound is not enforced here: Sinkhorn scalings produce
// unnormalized intermediate plans. Solver outputs are checked in tests.
TransportPlan::TransportPlan(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw Error(ErrorCode::ShapeMismatch, "transport plan must be square");
  if (!entries_.allFinite()) throw Error(ErrorCode::NonFinite, "transport plan has non-finite entries");
  if (entries_.size() > 0 && entries_.minCoeff() < 0.0)
    throw Error(ErrorCode::NegativeEntry, "transport plan has negative entries");
}

EntropicProblem::EntropicProblem(CostMatrix cost, SimplexVector p, SimplexVector q, double eta)
    : cost_(std::move(cost)), p_(std::move(p)), q_(std::move(q)), eta_(eta) {
  if (p_.size() != cost_.size() || q_.size() != cost_.size())
    throw Error(ErrorCode::ShapeMismatch, "marginal length differs from cost dimension");
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) throw Error(ErrorCode::BadParameter, "eta must be positive");
  if (p_.size() > 0 && (p_.min_entry() <= 0.0 || q_.min_entry() <= 0.0))
    throw Error(ErrorCode::BadParameter, "entropic problem needs strictly positive marginals");
}

}  // namespace eot
