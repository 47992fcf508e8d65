#ifndef EOT_IO_HPP
#define EOT_IO_HPP

#include "eot/bench.hpp"
#include "eot/types.hpp"

#include "json.hpp"

#include <string>

namespace eot::io {

// Problem files: { "n": int, "cost": [n*n, row-major], "p": [n], "q": [n] }.
// Plan files use the same layout with the matrix under "plan".

OtInstance problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const OtInstance& inst);

OtInstance read_problem(const std::string& path);
void write_problem(const std::string& path, const OtInstance& inst);

nlohmann::json plan_to_json(const TransportPlan& plan);
TransportPlan plan_from_json(const nlohmann::json& j);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace eot::io

#endif  // EOT_IO_HPP
