#include "tcheb/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tcheb/errors.hpp"

namespace tcheb {

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return std::strtod(buf, nullptr);
}

Json number_array(const Eigen::VectorXd& values) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) out.push_back(number(values[i]));
  return out;
}

namespace {

Json vector_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

template <typename T>
T field(const Json& j, const char* name, const char* what) {
  if (!j.contains(name)) throw SchemaError(std::string(what) + ": missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string(what) + ": field '" + name + "' has the wrong type");
  }
}

std::vector<double> number_list(const Json& j, const char* name, const char* what) {
  const auto v = field<std::vector<double>>(j, name, what);
  for (double x : v)
    if (!std::isfinite(x)) throw SchemaError(std::string(what) + ": non-finite entry in '" + name + "'");
  return v;
}

std::pair<double, double> interval_field(const Json& j, const char* what) {
  const auto iv = number_list(j, "interval", what);
  if (iv.size() != 2) throw SchemaError(std::string(what) + ": 'interval' must have two entries");
  return {iv[0], iv[1]};
}

}  // namespace

ModelSpec parse_model_spec(const Json& j) {
  if (!j.is_object()) throw SchemaError("model spec must be a JSON object");
  ModelSpec spec;
  spec.model = field<std::string>(j, "model", "model spec");
  const auto theta = number_list(j, "theta", "model spec");
  spec.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  std::tie(spec.lower, spec.upper) = interval_field(j, "model spec");
  if (j.contains("p1")) {
    const auto p1 = field<long long>(j, "p1", "model spec");
    if (p1 < 1) throw SchemaError("model spec: 'p1' must be positive");
    spec.p1 = static_cast<std::size_t>(p1);
  }
  if (spec.model == "polynomial") {
    const auto degree = j.contains("degree") ? field<long long>(j, "degree", "model spec")
                                             : static_cast<long long>(theta.size()) - 1;
    if (degree < 1) throw SchemaError("model spec: 'degree' must be at least 1");
    spec.degree = static_cast<std::size_t>(degree);
  }
  return spec;
}

Json to_json(const ModelSpec& spec) {
  Json j;
  j["model"] = spec.model;
  j["theta"] = number_array(spec.theta);
  j["interval"] = Json::array({number(spec.lower), number(spec.upper)});
  j["p1"] = spec.p1;
  if (spec.model == "polynomial") j["degree"] = spec.degree;
  return j;
}

Design parse_design(const Json& j, const Interval& interval, double weight_sum_tolerance) {
  if (!j.is_object()) throw SchemaError("design must be a JSON object");
  const auto points = number_list(j, "points", "design");
  const auto weights = number_list(j, "weights", "design");
  if (points.size() != weights.size()) throw SchemaError("design: 'points' and 'weights' differ in length");
  if (points.empty()) throw SchemaError("design: no support points");
  if (j.contains("interval")) {
    const auto [a, b] = interval_field(j, "design");
    if (a != interval.lower() || b != interval.upper())
      throw SchemaError("design: interval differs from the model's design interval");
  }
  return Design::make(interval, points, weights, Design::Options{1e-10, weight_sum_tolerance});
}

Json to_json(const Design& design) {
  Json j;
  j["points"] = vector_json(design.points());
  j["weights"] = vector_json(design.weights());
  j["interval"] = Json::array({number(design.interval().lower()), number(design.interval().upper())});
  return j;
}

std::string design_csv(const Design& design) {
  std::ostringstream out;
  out << "point,weight\n";
  char buf[64];
  for (std::size_t i = 0; i < design.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", design.points()[i], design.weights()[i]);
    out << buf;
  }
  return out.str();
}

Json to_json(const CheckReport& report) {
  Json j;
  j["verified"] = report.verified;
  j["tuples_checked"] = report.tuples_checked;
  j["indeterminate"] = report.indeterminate;
  j["min_determinant"] = number(report.min_determinant);
  j["witness"] = report.witness ? vector_json(*report.witness) : Json(nullptr);
  return j;
}

Json to_json(const PreconditionReport& report) {
  Json j;
  j["direction"] = to_string(report.direction);
  j["passed"] = report.passed;
  j["base_flipped"] = report.base_flipped;
  j["base"] = to_json(report.base);
  Json aug = Json::array();
  for (const auto& a : report.augmented) aug.push_back(Json{{"q", number_array(a.q)}, {"report", to_json(a.report)}});
  j["augmented"] = aug;
  if (!report.passed) j["failure"] = report.failure;
  return j;
}

Json to_json(const ReductionReport& report) {
  Json j;
  j["input"] = to_json(report.input);
  j["output"] = to_json(report.output);
  j["direction"] = to_string(report.direction);
  j["branch"] = to_string(report.branch);
  j["input_index"] = number(report.input_index.value());
  j["k"] = report.k;
  j["moments_in"] = number_array(report.moments_in.coordinates);
  j["moments_out"] = number_array(report.moments_out.coordinates);
  j["loewner_min_eigenvalue"] = number(report.loewner_min_eigenvalue);
  Json qs = Json::array();
  for (const auto& q : report.q_checks) qs.push_back(Json{{"q", number_array(q.q)}, {"gain", number(q.gain)}});
  j["q_checks"] = qs;
  j["residual_norm"] = number(report.residual_norm);
  j["refined"] = report.refined;
  return j;
}

Json to_json(const DominationReport& report) {
  Json j;
  j["difference_spectrum"] = number_array(report.difference_spectrum);
  j["dominates"] = report.dominates;
  j["tolerance"] = number(report.tolerance);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace tcheb
