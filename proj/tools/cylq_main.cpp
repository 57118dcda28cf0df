#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cylq/commands.hpp"
#include "cylq/config.hpp"

namespace {

// Flag values as strings, applied after the config file so that flags win.
struct FlagValues {
  std::string config;
  std::vector<std::pair<std::string, std::string>> settings;
};

void add_common(CLI::App* cmd, FlagValues& flags) {
  cmd->add_option("--config", flags.config, "flat key = value file");
  const std::pair<const char*, const char*> keys[] = {
      {"a", "circle length"},          {"k", "quasi-momentum in [0, 2pi/a)"}, {"hbar", "Planck constant"},
      {"band", "operator band N"},     {"grid", "circle grid size M"},        {"p_cutoff", "momentum cutoff"},
      {"omega", "coherent width"},     {"out", "output path"},                {"format", "json or csv"},
      {"suite", "verification suite"}, {"function", "observable expression"}, {"pair", "second observable"},
      {"state", "q,p,omega"}};
  for (const auto& [key, help] : keys) {
    const std::string name = key;
    cmd->add_option_function<std::string>(
        "--" + name, [&flags, name](const std::string& v) { flags.settings.emplace_back(name, v); }, help);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformation quantization on the cylinder"};
  app.require_subcommand(1);
  FlagValues flags;
  CLI::App* quantize = app.add_subcommand("quantize", "Weyl-quantize an observable and write the operator JSON");
  CLI::App* verify = app.add_subcommand("verify", "run the identity suites");
  CLI::App* sweep = app.add_subcommand("sweep", "semiclassical sweep of coherent-state expectations");
  for (CLI::App* cmd : {quantize, verify, sweep}) add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cylq::kExitUsage;
  }

  cylq::RunConfig cfg;
  try {
    if (!flags.config.empty()) cylq::load_config_file(cfg, flags.config);
    for (const auto& [key, value] : flags.settings) cylq::apply_setting(cfg, key, value);
    cylq::validate(cfg);
  } catch (const cylq::ConfigError& e) {
    std::cerr << "cylq: " << e.what() << "\n";
    return cylq::kExitUsage;
  }

  try {
    if (quantize->parsed()) return cylq::cmd_quantize(cfg, std::cout, std::cerr);
    if (verify->parsed()) return cylq::cmd_verify(cfg, std::cout, std::cerr);
    return cylq::cmd_sweep(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "cylq: " << e.what() << "\n";
    return cylq::kExitUsage;
  }
}
