#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcheb/complete_class.hpp"

namespace tcheb {

enum class Command { Check, Moments, Reduce, Dominate, Optimize };

struct RunConfig {
  Command command = Command::Check;
  std::string model_spec_path;
  std::optional<std::string> design_path;
  // Second design for Dominate; without it the input is compared with its
  // own reduction.
  std::optional<std::string> against_path;
  // nullopt: Upper when its precondition holds, else Lower.
  std::optional<Direction> direction;
  // Empty: report goes to standard output.
  std::string output_path;
  std::optional<std::string> csv_path;
  std::optional<std::string> batch_dir;
  std::uint64_t seed = 0;
  std::size_t grid_size = 2001;
  std::size_t restarts = 20;
  Criterion criterion = Criterion::D;
  std::map<std::string, double> tolerance_overrides;
  std::vector<std::string> test_hooks;
};

/// Names accepted by --tol.<name>=<value>.
const std::vector<std::string>& tolerance_names();

/// Exit status: 0 success, 2 precondition failure, 1 anything else. Reports
/// and JSON error objects go to the output path or standard output.
int run(const RunConfig& config);

/// Parses the command line (including --tol.<name>=<value>) and calls run.
int cli_main(int argc, const char* const* argv);

}  // namespace tcheb
