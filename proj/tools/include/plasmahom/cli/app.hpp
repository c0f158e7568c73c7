// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_CLI_APP_HPP
#define PLASMAHOM_CLI_APP_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "plasmahom/analysis.hpp"
#include "plasmahom/errors.hpp"
#include "plasmahom/geometry.hpp"
#include "plasmahom/macrosolver.hpp"
#include "plasmahom/materials.hpp"

namespace plasmahom::cli
{

using json = nlohmann::json;

enum ExitCode : int
{
  kExitOk = 0,
  kExitValidation = 2,
  kExitSolver = 3
};

inline constexpr int kSchemaVersion = 1;

// Thrown for malformed configurations and overrides; carries every issue found.
class ValidationError : public Error
{
public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string> &issues() const { return issues_; }

private:
  std::vector<std::string> issues_;
};

// Full schema and cross-field validation without running solvers.
std::vector<std::string> validate_config(const json &config);

// "a.b.c=value": value parsed as JSON when possible, otherwise taken as a string.
void apply_override(json &config, const std::string &assignment);

cplx parse_complex(const json &value, const std::string &where);
json complex_json(cplx value);

GeometrySpec geometry_from_config(const json &config);
// Material at one frequency (Drude block evaluated at omega when present).
MaterialSpec material_at(const json &config, double omega);
MacroProblem macro_from_config(const json &task);

// Hash of the canonical configuration text.
std::string config_hash(const json &config);

struct RunOutcome
{
  int exit_code = kExitOk;
  json summary;
};

// Executes the task of an already validated configuration; outputs go to
// output.directory resolved against base_dir.
RunOutcome execute(const json &config, const std::filesystem::path &base_dir);

// Entry point shared by the executable and the tests.
int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace plasmahom::cli

#endif  // PLASMAHOM_CLI_APP_HPP
