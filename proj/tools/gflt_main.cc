#include "gflt/scenario.hh"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

// exit codes: 0 success, 2 configuration error, 3 task failure
constexpr int kConfigError = 2;

int run_command(const std::string& config_path, const std::string& output_dir,
                const std::vector<std::uint64_t>& seed_override,
                const std::vector<std::string>& tasks, bool quiet) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config '" << config_path << "'\n";
    return kConfigError;
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    gflt::Scenario scenario = gflt::parse_scenario(text.str());
    if (!seed_override.empty()) scenario.seed = seed_override.back();
    if (!output_dir.empty()) scenario.output_dir = output_dir;
    gflt::apply_task_filter(scenario, tasks);
    return gflt::run_scenario(scenario, quiet, std::cout);
  } catch (const gflt::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-valued frame localization toolkit"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  std::vector<std::uint64_t> seed_override;
  std::vector<std::string> tasks;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "execute the tasks of a scenario config");
  run->add_option("config", config_path, "path to a scenario config file")->required();
  run->add_option("--output-dir", output_dir, "override the config's output_dir");
  run->add_option("--seed-override", seed_override, "override the config's seed");
  run->add_option("--tasks", tasks, "comma-separated subset of tasks to run")->delimiter(',');
  run->add_flag("--quiet", quiet, "suppress per-task progress output");

  CLI::App* list_tasks = app.add_subcommand("list_tasks", "print the available task names");
  CLI::App* version = app.add_subcommand("version", "print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (run->parsed()) return run_command(config_path, output_dir, seed_override, tasks, quiet);
  if (list_tasks->parsed()) {
    for (const std::string& name : gflt::task_names()) std::cout << name << "\n";
    return 0;
  }
  if (version->parsed()) {
    std::cout << gflt::version_string() << "\n";
    return 0;
  }
  return kConfigError;
}
