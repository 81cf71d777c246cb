// Batch front end: parse a run configuration, execute curvature sweeps,
// pinching estimation, or the verification suite, and emit a deterministic
// machine-readable report.
//
// Exit status: 0 all checks pass, 1 check failure, 2 configuration error,
// 3 engine error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kgeom/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kgeom - numerical engine for Calabi-ansatz disc and ball bundle metrics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::string format_override;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  int samples_override = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    cmd->add_option("--samples", samples_override, "override the config sample count");
    cmd->add_option("--output", output_override, "report path ('-' = stdout)");
    cmd->add_option("--format", format_override, "report format (json|csv)");
  };

  CLI::App* curvature = app.add_subcommand("curvature", "pointwise curvature sweep");
  CLI::App* pinch = app.add_subcommand("pinch", "multi-start curvature bound estimation");
  CLI::App* verify = app.add_subcommand("verify", "run the residual verification suite");
  CLI::App* models = app.add_subcommand("models", "list the model catalog");
  for (CLI::App* cmd : {curvature, pinch, verify, models}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "kgeom: config-error: " << e.what() << "\n";
    return 2;
  }

  std::string command;
  for (const auto* cmd : {curvature, pinch, verify, models})
    if (cmd->parsed()) command = cmd->get_name();

  try {
    kgeom::RunConfig config = kgeom::parse_config_file(config_path);
    if (seed_given) config.seed = seed_override;
    if (samples_override > 0) config.samples = samples_override;
    if (!output_override.empty()) config.output = output_override;
    if (!format_override.empty()) config.format = format_override;
    kgeom::validate_config(config);

    const kgeom::Report report = kgeom::run_command(config, command);
    kgeom::write_report(report, config.output, config.format);

    if (!report.checks.empty() && !report.all_passed()) {
      std::cerr << "kgeom: check-failure: " << report.failed_checks()
                << " verification checks exceeded tolerance\n";
      return 1;
    }
    return 0;
  } catch (const kgeom::ConfigError& e) {
    std::cerr << "kgeom: " << e.what() << "\n";
    return 2;
  } catch (const kgeom::UnknownModel& e) {
    std::cerr << "kgeom: config-error: " << e.what() << "\n";
    return 2;
  } catch (const kgeom::BadParams& e) {
    std::cerr << "kgeom: config-error: " << e.what() << "\n";
    return 2;
  } catch (const kgeom::ParseError& e) {
    std::cerr << "kgeom: config-error: " << e.what() << "\n";
    return 2;
  } catch (const kgeom::Error& e) {
    std::cerr << "kgeom: engine-error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "kgeom: engine-error: " << e.what() << "\n";
    return 3;
  }
}
