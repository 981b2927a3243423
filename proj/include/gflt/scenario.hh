#pragma once

#include "gflt/coorbit.hh"
#include "gflt/gabor.hh"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Batch front-end: scenario configs parsed from a line-based "key = value"
// text format, executed as a sequence of diagnostic tasks that write one CSV
// per task plus a JSON summary. Outputs are byte-identical across repeated
// runs of the same config with the same tool version.

namespace gflt {

// configuration or validation problem; the CLI maps this to exit code 2
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind { gabor, synthetic, explicit_file };

enum class TaskKind {
  bounds,
  dual,
  gram_factorization,
  localization,
  decay,
  coorbit,
  equivalence,
  pairing,
};

// polynomial weight (1+|x|)^exponent paired with a sequence exponent p
struct WeightSpec {
  double p = 2.0;
  double exponent = 0.0;
};

struct Scenario {
  std::string name = "scenario";
  ModelKind model = ModelKind::synthetic;

  // gabor model
  Eigen::Index L = 0;
  std::string window = "gaussian";
  Eigen::Index grid_x = 0;  // number of lattice points per axis
  Eigen::Index grid_w = 0;

  // synthetic model
  std::string generator = "dense_gaussian";
  Eigen::Index count = 0;
  Eigen::Index n = 0;

  // explicit model
  std::string frame_file;

  std::optional<std::uint64_t> seed;  // mandatory for synthetic
  AlgebraSpec algebra = AlgebraSpec::jaffard(2.0);
  std::vector<WeightSpec> weights = {{2.0, 0.0}};
  std::vector<TaskKind> tasks;
  std::string output_dir = "out";
};

// parse and fully validate; throws ScenarioError with the offending line
Scenario parse_scenario(const std::string& text);

// canonical task-name list, and lookups between names and kinds
const std::vector<std::string>& task_names();
TaskKind task_from_name(const std::string& name);
std::string task_name(TaskKind task);

std::string version_string();

// execute the scenario's tasks in order, writing <task>.csv files and
// summary.json under output_dir; progress lines go to log unless quiet.
// Returns 0 on success and 3 when any task failed (the failures are also
// recorded in the summary).
int run_scenario(const Scenario& scenario, bool quiet, std::ostream& log);

// CLI override helpers: replace the task list / seed / output dir
void apply_task_filter(Scenario& scenario, const std::vector<std::string>& names);

}  // namespace gflt
