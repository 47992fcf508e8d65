#include "eot/io.hpp"

#include <fstream>

namespace eot::io {

namespace {

Vector vector_field(const nlohmann::json& j, const char* key, Index expected) {
  if (!j.contains(key) || !j.at(key).is_array()) throw Error(ErrorCode::ParseError, std::string("missing array '") + key + "'");
  const auto& arr = j.at(key);
  if (static_cast<Index>(arr.size()) != expected)
    throw Error(ErrorCode::ParseError, std::string("array '") + key + "' has the wrong length");
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const auto& e = arr[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw Error(ErrorCode::ParseError, std::string("non-numeric entry in '") + key + "'");
    v[i] = e.get<double>();
  }
  return v;
}

Index size_field(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer())
    throw Error(ErrorCode::ParseError, "missing integer field 'n'");
  const auto n = j.at("n").get<std::int64_t>();
  if (n < 1) throw Error(ErrorCode::ParseError, "'n' must be positive");
  return static_cast<Index>(n);
}

Matrix square_field(const nlohmann::json& j, const char* key, Index n) {
  const Vector flat = vector_field(j, key, n * n);
  return Eigen::Map<const Matrix>(flat.data(), n, n);
}

std::vector<double> flatten(const Matrix& m) { return {m.data(), m.data() + m.size()}; }
std::vector<double> flatten(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

OtInstance problem_from_json(const nlohmann::json& j) {
  const Index n = size_field(j);
  Matrix cost = square_field(j, "cost", n);
  SimplexVector p(vector_field(j, "p", n));
  SimplexVector q(vector_field(j, "q", n));
  return {std::move(p), std::move(q), CostMatrix(std::move(cost))};
}

nlohmann::json problem_to_json(const OtInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.cost.size();
  j["cost"] = flatten(inst.cost.entries());
  j["p"] = flatten(inst.p.values());
  j["q"] = flatten(inst.q.values());
  return j;
}

OtInstance read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return problem_from_json(j);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

void write_problem(const std::string& path, const OtInstance& inst) { write_json(path, problem_to_json(inst)); }

nlohmann::json plan_to_json(const TransportPlan& plan) {
  nlohmann::json j;
  j["n"] = plan.size();
  j["plan"] = flatten(plan.entries());
  return j;
}

TransportPlan plan_from_json(const nlohmann::json& j) {
  const Index n = size_field(j);
  return TransportPlan(square_field(j, "plan", n));
}

}  // namespace eot::io
