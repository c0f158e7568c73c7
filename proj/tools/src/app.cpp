// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "plasmahom/cli/app.hpp"
#include "plasmahom/io.hpp"

namespace plasmahom::cli
{

namespace
{

json load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ValidationError({"cannot open configuration '" + path + "'"});
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  json config = json::parse(buffer.str(), nullptr, false);
  if (config.is_discarded())
  {
    throw ValidationError({"'" + path + "' is not valid JSON"});
  }
  return config;
}

void print_line(std::ostream &out, const json &doc)
{
  out << doc.dump() << std::endl;
}

}  // namespace

int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"plasmahom: effective permittivity of plasmonic crystals"};
  app.require_subcommand(1);

  std::string run_path;
  std::vector<std::string> overrides;
  auto *run = app.add_subcommand("run", "Run the task of a configuration file");
  run->add_option("config", run_path, "JSON configuration")->required();
  run->add_option("--set", overrides, "Override a value: dotted.key=value");

  std::string validate_path;
  std::vector<std::string> validate_overrides;
  auto *validate = app.add_subcommand("validate", "Check a configuration without solving");
  validate->add_option("config", validate_path, "JSON configuration")->required();
  validate->add_option("--set", validate_overrides, "Override a value: dotted.key=value");

  auto *version = app.add_subcommand("version", "Print the version");

  try
  {
    std::vector<std::string> args;
    for (int k = argc - 1; k > 0; --k)
    {
      args.emplace_back(argv[k]);
    }
    app.parse(args);
  }
  catch (const CLI::CallForHelp &)
  {
    out << app.help();
    return kExitOk;
  }
  catch (const CLI::ParseError &e)
  {
    err << e.what() << "\n";
    print_line(out, {{"status", "validation_error"}, {"issues", {e.what()}}});
    return kExitValidation;
  }

  if (version->parsed())
  {
    print_line(out, {{"version", kVersion}, {"schema_version", kSchemaVersion}});
    return kExitOk;
  }

  const bool is_run = run->parsed();
  const std::string path = is_run ? run_path : validate_path;
  const auto &sets = is_run ? overrides : validate_overrides;
  json config;
  try
  {
    config = load_config(path);
    for (const auto &s : sets)
    {
      apply_override(config, s);
    }
  }
  catch (const ValidationError &e)
  {
    for (const auto &i : e.issues())
    {
      err << "error: " << i << "\n";
    }
    print_line(out, {{"status", "validation_error"}, {"issues", e.issues()}});
    return kExitValidation;
  }

  const auto issues = validate_config(config);
  if (!is_run)
  {
    print_line(out, {{"valid", issues.empty()}, {"issues", issues}});
    return issues.empty() ? kExitOk : kExitValidation;
  }
  if (!issues.empty())
  {
    for (const auto &i : issues)
    {
      err << "error: " << i << "\n";
    }
    print_line(out, {{"status", "validation_error"}, {"issues", issues}});
    return kExitValidation;
  }

  const auto base = std::filesystem::absolute(path).parent_path();
  try
  {
    RunOutcome outcome = execute(config, base);
    outcome.summary["overrides"] = sets;
    print_line(out, outcome.summary);
    if (outcome.exit_code != kExitOk)
    {
      err << "error: " << outcome.summary.value("error", "solver failure") << "\n";
    }
    return outcome.exit_code;
  }
  catch (const ValidationError &e)
  {
    for (const auto &i : e.issues())
    {
      err << "error: " << i << "\n";
    }
    print_line(out, {{"status", "validation_error"}, {"issues", e.issues()}});
    return kExitValidation;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << "\n";
    print_line(out, {{"status", "solver_failure"}, {"error", e.what()}});
    return kExitSolver;
  }
}

}  // namespace plasmahom::cli
