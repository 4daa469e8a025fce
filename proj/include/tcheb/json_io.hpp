#pragma once

#include <string>

#include <json.hpp>

#include "tcheb/complete_class.hpp"
#include "tcheb/moment_space.hpp"
#include "tcheb/regression_models.hpp"

namespace tcheb {

using Json = nlohmann::ordered_json;

/// Rounds to 15 significant digits; non-finite values become null.
Json number(double value);
Json number_array(const Eigen::VectorXd& values);

/// {"model", "theta", "interval", "p1"[, "degree"]}. Throws SchemaError.
ModelSpec parse_model_spec(const Json& j);
Json to_json(const ModelSpec& spec);

/// {"points", "weights"[, "interval"]}. A missing interval defaults to the
/// model's. Weights summing to one within weight_sum_tolerance are
/// renormalized. Throws SchemaError or DomainError.
Design parse_design(const Json& j, const Interval& interval, double weight_sum_tolerance = 1e-9);
Json to_json(const Design& design);
std::string design_csv(const Design& design);

Json to_json(const CheckReport& report);
Json to_json(const PreconditionReport& report);
Json to_json(const ReductionReport& report);
Json to_json(const DominationReport& report);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tcheb
