// Command-line front end: data goes to stdout, diagnostics to stderr.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "twoaxis/presets.hpp"
#include "twoaxis/quadrature.hpp"
#include "twoaxis/report.hpp"
#include "twoaxis/scenario.hpp"

using namespace twoaxis;

namespace {

Scenario read_config(const std::string& path)
{
  if (path == "-") {
    return parse_scenario(std::cin, "<stdin>");
  }
  return load_scenario(path);
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Two-axis Gaussian noise coherence calculator"};
  app.require_subcommand(1);
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "Print the canonical scenario and exit");

  std::string config_path;
  auto add_config_command = [&](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("config", config_path, "Scenario file ('-' for stdin)")->required();
    return cmd;
  };
  auto* coherence_cmd = add_config_command("coherence", "Coherence W(t) as CSV");
  auto* t2_cmd = add_config_command("t2", "Dephasing time per evaluation mode");
  auto* sweep_cmd = add_config_command("sweep", "T2 over the [sweep] axis");
  auto* mc_cmd = add_config_command("mc", "Analytic W beside a Monte Carlo estimate");
  auto* psd_cmd = add_config_command("psd-check", "Closed-form variances against quadrature");

  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "Reproduce a published figure panel");
  preset_cmd->add_option("name", preset_name, "Preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (preset_cmd->parsed()) {
      if (dump_config) {
        for (const auto& curve : make_preset(preset_name).curves) {
          std::cout << "# curve " << curve.label << "\n";
          dump_scenario(curve.scenario, std::cout);
        }
        return exit_ok;
      }
      return run_preset(preset_name, std::cout);
    }

    const Scenario s = read_config(config_path);
    if (dump_config) {
      dump_scenario(s, std::cout);
      return exit_ok;
    }
    if (coherence_cmd->parsed()) {
      run_coherence(s, std::cout);
    } else if (t2_cmd->parsed()) {
      run_t2(s, std::cout);
    } else if (sweep_cmd->parsed()) {
      run_t2_sweep(s, std::cout);
    } else if (mc_cmd->parsed()) {
      const McSummary summary = run_mc(s, std::cout);
      if (summary.breaches > 0) {
        std::cerr << "twoaxis: " << summary.breaches
                  << " grid point(s) exceed the Monte Carlo tolerance (max |dW| = "
                  << summary.max_deviation << ")\n";
        return exit_mc_breach;
      }
    } else if (psd_cmd->parsed()) {
      const double worst = run_psd_check(s, std::cout);
      std::cerr << "twoaxis: largest relative discrepancy " << worst << "\n";
      if (worst > 1e-6) {
        return exit_numerical;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "twoaxis: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "twoaxis: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalError& e) {
    std::cerr << "twoaxis: numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}
