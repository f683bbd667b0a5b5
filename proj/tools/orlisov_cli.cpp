#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>

#include "orlisov/cli.hpp"
#include "orlisov/errors.hpp"

int main(int argc, char** argv) {
  namespace cli = orlisov::cli;

  CLI::App app{"Orlicz fractional modular toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  cli::Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--out", out, "output directory");
  };

  auto* young = app.add_subcommand("young-audit", "audit the Young function");
  add_common(young);

  auto* modular = app.add_subcommand("modular", "evaluate modulars and norms of one function");
  add_common(modular);
  modular->add_option("--fixture", opt.fixture, "built-in fixture: zero, bubble, hat, linear");
  modular->add_option("--function", opt.function_csv, "nodal values CSV")->check(CLI::ExistingFile);
  modular->add_option("--refine", opt.refine, "extra refinement levels")->check(CLI::Range(0, 4));

  auto* verify = app.add_subcommand("verify", "run the property suite");
  add_common(verify);
  verify->add_option("--property", opt.properties, "property or group prefix (repeatable)");

  auto* solve = app.add_subcommand("solve", "compute the two solutions");
  add_common(solve);
  solve->add_flag("--force", opt.force, "run past a refused gate, flagging the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::config_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    orlisov::RunConfig cfg = orlisov::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    std::filesystem::create_directories(cfg.out);
    return cli::run(command, cfg, opt, std::cout);
  } catch (const orlisov::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::check_failed;
  }
}
