#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "axns/config.hpp"
#include "axns/runner.hpp"
#include "axns/snapshot_io.hpp"

namespace {

using axns::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric Navier-Stokes solver with swirl and a rescaling microscope"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output_dir, "Override output_dir from the configuration");
  };

  bool resume = false;
  auto* simulate = app.add_subcommand("simulate", "Time-step the configured data and write snapshots");
  add_common(simulate);
  simulate->add_flag("--resume", resume, "Continue from the last stored snapshot");

  std::string snapshot_dir;
  bool dump_cubes = false;
  auto* microscope = app.add_subcommand("microscope", "Zoom into almost-maximal points of a stored run");
  add_common(microscope);
  microscope->add_option("-s,--snapshots", snapshot_dir, "Snapshot directory (default: <output>/snapshots)");
  microscope->add_flag("--dump-cubes", dump_cubes, "Write every rescaled cube to <output>/cubes");

  bool skip_convergence = false;
  auto* validate = app.add_subcommand("validate", "Run, then check invariants and the Lamb-Oseen study");
  add_common(validate);
  validate->add_flag("--skip-convergence", skip_convergence, "Skip the Lamb-Oseen refinement study");

  auto* sweep = app.add_subcommand("sweep", "Simulate and zoom every point of the configured sweep");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::Usage);
  }

  try {
    axns::RunConfig config = axns::load_config(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (*simulate) return code(axns::run_simulate(config, resume, std::cout));
    if (*microscope) {
      const std::filesystem::path dir =
          snapshot_dir.empty() ? axns::RunPaths{config.output_dir}.snapshots() : std::filesystem::path(snapshot_dir);
      return code(axns::run_microscope(config, dir, dump_cubes, std::cout));
    }
    if (*validate) return code(axns::run_validate(config, skip_convergence, std::cout));
    if (*sweep) return code(axns::run_sweep(config, std::cout));
  } catch (const axns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return code(ExitCode::Usage);
  } catch (const axns::SnapshotFormatError& e) {
    std::cerr << "snapshot error: " << e.what() << '\n';
    return code(ExitCode::Usage);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::Numerical);
  }
  return code(ExitCode::Usage);
}
