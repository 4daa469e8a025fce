#include "tcheb/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "tcheb/errors.hpp"
#include "tcheb/json_io.hpp"

namespace tcheb {

namespace fs = std::filesystem;

const std::vector<std::string>& tolerance_names() {
  static const std::vector<std::string> names{"boundary", "design_weight_sum", "indeterminate_ratio",
                                              "loewner", "lp_feasibility", "newton"};
  return names;
}

namespace {

std::string command_name(Command c) {
  switch (c) {
    case Command::Check:
      return "check";
    case Command::Moments:
      return "moments";
    case Command::Reduce:
      return "reduce";
    case Command::Dominate:
      return "dominate";
    case Command::Optimize:
      return "optimize";
  }
  return "unknown";
}

struct Settings {
  ReductionOptions reduction;
  double weight_sum_tolerance = 1e-9;
};

Settings settings_from(const RunConfig& config) {
  Settings s;
  s.reduction.principal.grid_size = config.grid_size;
  s.reduction.check.seed = config.seed;
  for (const auto& hook : config.test_hooks) {
    if (hook == "flip-kth") s.reduction.flip_kth = true;
    else throw ConfigurationError("unknown test hook '" + hook + "'");
  }
  for (const auto& [name, value] : config.tolerance_overrides) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw ConfigurationError("tolerance '" + name + "' must be finite and nonnegative");
    if (name == "boundary") s.reduction.principal.boundary_tolerance = value;
    else if (name == "design_weight_sum") s.weight_sum_tolerance = value;
    else if (name == "indeterminate_ratio") s.reduction.check.indeterminate_ratio = value;
    else if (name == "loewner") s.reduction.loewner_tolerance = value;
    else if (name == "lp_feasibility") s.reduction.principal.feasibility_tolerance = value;
    else if (name == "newton") s.reduction.principal.newton.tolerance = value;
    else throw ConfigurationError("unknown tolerance '" + name + "'");
  }
  return s;
}

struct Loaded {
  ModelSpec spec;
  RegressionModel model;
};

Loaded load_model(const std::string& path) {
  const ModelSpec spec = parse_model_spec(read_json_file(path));
  RegressionModel model = make_catalog_model(spec);
  if (static_cast<std::size_t>(spec.theta.size()) != model.p)
    throw SchemaError("model spec: '" + spec.model + "' expects " + std::to_string(model.p) + " entries in 'theta'");
  return Loaded{spec, std::move(model)};
}

Direction resolve_direction(const RunConfig& config, const PsiSystem& psi, const Settings& s) {
  if (config.direction) return *config.direction;
  const bool upper = check_preconditions(psi, Direction::Upper, s.reduction).passed;
  spdlog::info("direction auto: upper precondition {}", upper ? "holds" : "fails");
  return upper ? Direction::Upper : Direction::Lower;
}

struct Outcome {
  Json report;
  std::optional<Design> design;
  int status = 0;
};

Outcome execute(const RunConfig& config, const Settings& s, const Loaded& m, const std::optional<std::string>& design_path) {
  Outcome out;
  Json& r = out.report;
  r["command"] = command_name(config.command);
  r["model"] = to_json(m.spec);
  const Eigen::VectorXd& theta = m.spec.theta;
  auto load_design = [&](const std::string& path) { return parse_design(read_json_file(path), m.model.design_interval, s.weight_sum_tolerance); };

  switch (config.command) {
    case Command::Check: {
      const PsiSystem psi = psi_system(m.model, theta);
      r["k"] = psi.system.size();
      r["labels"] = psi.labels;
      std::vector<Direction> dirs;
      if (config.direction) dirs.push_back(*config.direction);
      else dirs = {Direction::Upper, Direction::Lower};
      Json checks = Json::object();
      bool any = false;
      for (auto d : dirs) {
        const auto pre = check_preconditions(psi, d, s.reduction);
        spdlog::debug("{} precondition: {}", to_string(d), pre.passed ? "passed" : pre.failure);
        any = any || pre.passed;
        checks[to_string(d)] = to_json(pre);
      }
      r["directions"] = checks;
      r["passed"] = any;
      out.status = any ? 0 : 2;
      break;
    }
    case Command::Moments: {
      const Design d = load_design(*design_path);
      const PsiSystem psi = psi_system(m.model, theta);
      r["design"] = to_json(d);
      r["k"] = psi.system.size();
      r["labels"] = psi.labels;
      r["moments"] = number_array(moment_point(psi.system, d).coordinates);
      r["index"] = number(design_index(d).value());
      break;
    }
    case Command::Reduce: {
      const Design d = load_design(*design_path);
      const Direction dir = resolve_direction(config, psi_system(m.model, theta), s);
      const ReductionReport rep = reduce_design(m.model, theta, d, dir, s.reduction);
      spdlog::info("reduced {} points to {} ({} branch)", rep.input.size(), rep.output.size(), to_string(rep.branch));
      r["report"] = to_json(rep);
      out.design = rep.output;
      break;
    }
    case Command::Dominate: {
      const Design d = load_design(*design_path);
      Design first = d;
      Design second = d;
      if (config.against_path) {
        second = load_design(*config.against_path);
      } else {
        const Direction dir = resolve_direction(config, psi_system(m.model, theta), s);
        first = reduce_design(m.model, theta, d, dir, s.reduction).output;
        r["direction"] = to_string(dir);
      }
      r["xi1"] = to_json(first);
      r["xi2"] = to_json(second);
      r["report"] = to_json(verify_domination(m.model, theta, first, second, s.reduction.loewner_tolerance));
      break;
    }
    case Command::Optimize: {
      const Direction dir = resolve_direction(config, psi_system(m.model, theta), s);
      OptimizeOptions opt;
      opt.seed = config.seed;
      opt.restarts = config.restarts;
      opt.reduction = s.reduction;
      const OptimizeResult res = optimize_in_class(m.model, theta, config.criterion, dir, opt);
      r["direction"] = to_string(dir);
      r["criterion"] = to_string(config.criterion);
      r["value"] = number(res.value);
      r["structure"] = Json{{"num_points", res.structure.num_points},
                            {"includes_a", res.structure.includes_a},
                            {"includes_b", res.structure.includes_b}};
      r["design"] = to_json(res.design);
      out.design = res.design;
      break;
    }
  }
  return out;
}

Json error_json(const std::string& code, const std::string& message) {
  return Json{{"error", Json{{"code", code}, {"message", message}}}};
}

int status_of(const Error& e) { return e.code() == ErrorCode::Precondition ? 2 : 1; }

void emit(const std::string& path, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) std::cout << text << std::flush;
  else write_text_file(path, text);
}

// Runs one input and writes its report; returns the exit status.
int run_one(const RunConfig& config, const std::optional<std::string>& design_path, const std::string& out_path,
            const std::optional<std::string>& csv_path) {
  Outcome outcome;
  try {
    const Settings s = settings_from(config);
    const Loaded m = load_model(config.model_spec_path);
    outcome = execute(config, s, m, design_path);
  } catch (const Error& e) {
    spdlog::debug("{}: {}", to_string(e.code()), e.what());
    outcome.report = error_json(to_string(e.code()), e.what());
    outcome.status = status_of(e);
  } catch (const std::exception& e) {
    outcome.report = error_json(to_string(ErrorCode::Internal), e.what());
    outcome.status = 1;
  }
  try {
    emit(out_path, outcome.report);
    if (outcome.design && csv_path) write_text_file(*csv_path, design_csv(*outcome.design));
  } catch (const Error& e) {
    std::cout << error_json(to_string(e.code()), e.what()).dump(2) << "\n";
    return 1;
  }
  return outcome.status;
}

std::optional<std::string> default_csv(const RunConfig& config, const std::string& out_path) {
  if (config.csv_path) return config.csv_path;
  if (out_path.empty()) return std::nullopt;
  return fs::path(out_path).replace_extension(".csv").string();
}

void configure_logging() {
  static const auto logger = [] {
    auto l = spdlog::stderr_logger_st("tcheb");
    l->set_pattern("[%l] %v");
    return l;
  }();
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("TCHEB_LOG");
  const std::string level = env ? env : "";
  if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else if (level == "info") spdlog::set_level(spdlog::level::info);
  else spdlog::set_level(spdlog::level::warn);
}

}  // namespace

int run(const RunConfig& config) {
  configure_logging();
  const bool needs_design =
      config.command == Command::Moments || config.command == Command::Reduce || config.command == Command::Dominate;

  if (config.batch_dir) {
    std::vector<fs::path> inputs;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(*config.batch_dir, ec))
      if (entry.is_regular_file() && entry.path().extension() == ".json") inputs.push_back(entry.path());
    if (ec || config.output_path.empty()) {
      emit("", error_json(to_string(ErrorCode::Io), ec ? "cannot read batch directory '" + *config.batch_dir + "'"
                                                       : "--batch requires --out <directory>"));
      return 1;
    }
    std::sort(inputs.begin(), inputs.end());
    fs::create_directories(config.output_path, ec);
    int status = 0;
    for (const auto& in : inputs) {
      const fs::path base = fs::path(config.output_path) / in.stem();
      spdlog::info("batch input {}", in.string());
      const int s = run_one(config, in.string(), base.string() + ".json", base.string() + ".csv");
      status = std::max(status, s);
    }
    return status;
  }

  if (needs_design && !config.design_path) {
    emit(config.output_path, error_json(to_string(ErrorCode::Configuration),
                                        command_name(config.command) + " requires --design"));
    return 1;
  }
  return run_one(config, config.design_path, config.output_path, default_csv(config, config.output_path));
}

int cli_main(int argc, const char* const* argv) {
  RunConfig config;
  std::vector<std::string> rest;
  // --tol.<name>=<value> and --tol.<name> <value> are consumed up front.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--tol.", 0) != 0) {
      rest.push_back(arg);
      continue;
    }
    std::string name = arg.substr(6);
    std::string value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (i + 1 < argc) {
      value = argv[++i];
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      config.tolerance_overrides[name] = v;
    } catch (const std::exception&) {
      std::cout << error_json(to_string(ErrorCode::Configuration), "bad value for --tol." + name).dump(2) << "\n";
      return 1;
    }
  }

  CLI::App app{"Complete-class reduction of designs for nonlinear regression models"};
  app.require_subcommand(1);
  std::string direction = "auto";
  std::string criterion = "d";
  std::string design;
  std::string against;
  std::string csv;
  std::string batch;
  const std::map<std::string, Command> commands{{"check", Command::Check},
                                                {"moments", Command::Moments},
                                                {"reduce", Command::Reduce},
                                                {"dominate", Command::Dominate},
                                                {"optimize", Command::Optimize}};
  const std::map<std::string, std::string> help{{"check", "Chebyshev preconditions for both directions"},
                                                {"moments", "moment point and index of a design"},
                                                {"reduce", "dominating design of the complete class"},
                                                {"dominate", "Loewner comparison of two designs"},
                                                {"optimize", "locally optimal design inside the class"}};
  for (const auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--model", config.model_spec_path, "model spec JSON")->required();
    sub->add_option("--design", design, "design JSON");
    sub->add_option("--against", against, "second design for dominate");
    sub->add_option("--direction", direction, "upper, lower or auto")
        ->check(CLI::IsMember({"upper", "lower", "auto"}));
    sub->add_option("--out", config.output_path, "report path (directory with --batch)");
    sub->add_option("--csv", csv, "design table path");
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--grid", config.grid_size, "LP grid size")->check(CLI::Range(3, 1000000));
    sub->add_option("--restarts", config.restarts, "optimizer restarts")->check(CLI::Range(1, 100000));
    sub->add_option("--criterion", criterion, "d or a")->check(CLI::IsMember({"d", "a", "D", "A"}));
    sub->add_option("--batch", batch, "directory of design JSON files");
    sub->add_option("--test-hook", config.test_hooks, "testing only");
    sub->callback([&config, cmd = cmd] { config.command = cmd; });
  }

  std::vector<std::string> reversed(rest.rbegin(), rest.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json(to_string(ErrorCode::Configuration), e.what()).dump(2) << "\n";
    return 1;
  }
  if (!design.empty()) config.design_path = design;
  if (!against.empty()) config.against_path = against;
  if (!csv.empty()) config.csv_path = csv;
  if (!batch.empty()) config.batch_dir = batch;
  if (direction == "upper") config.direction = Direction::Upper;
  if (direction == "lower") config.direction = Direction::Lower;
  config.criterion = (criterion == "a" || criterion == "A") ? Criterion::A : Criterion::D;
  return run(config);
}

}  // namespace tcheb
