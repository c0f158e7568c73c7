// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "plasmahom/cli/app.hpp"
#include "plasmahom/io.hpp"

namespace fs = std::filesystem;
namespace cli = plasmahom::cli;
using cli::json;

namespace
{
class TempDir
{
public:
  TempDir()
  {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("plasmahom_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path &path() const { return path_; }

private:
  fs::path path_;
};

struct Result
{
  int code = 0;
  std::string out, err;
  json summary() const { return json::parse(out.substr(0, out.find('\n'))); }
};

Result invoke(const std::vector<std::string> &args)
{
  std::vector<const char *> argv{"plasmahom"};
  for (const auto &a : args)
  {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  Result r;
  r.code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_config(const fs::path &dir, const json &config,
                         const std::string &name = "config.json")
{
  const fs::path p = dir / name;
  std::ofstream(p) << config.dump(2);
  return p.string();
}

std::string read_file(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json sweep_config()
{
  return json::parse(R"({
    "schema_version": 1,
    "geometry": {"kind": "ribbon"},
    "material": {"drude": {"E_F_tilde": 1.0, "d_tilde": 20.72}},
    "solver": {"h": 0.1, "parallelism": 2},
    "task": {"type": "sweep", "omega_min": 1.0, "omega_max": 3.5, "points": 40,
             "entry": "eps11", "fit": true},
    "output": {"directory": "out"}
  })");
}

std::size_t file_count(const fs::path &dir)
{
  if (!fs::exists(dir))
  {
    return 0;
  }
  return static_cast<std::size_t>(
      std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}
}  // namespace

TEST(Cli, Version)
{
  const auto r = invoke({"version"});
  EXPECT_EQ(r.code, cli::kExitOk);
  const auto s = r.summary();
  EXPECT_EQ(s.at("version"), plasmahom::kVersion);
  EXPECT_EQ(s.at("schema_version"), cli::kSchemaVersion);
}

TEST(Cli, ValidConfigHasNoIssues)
{
  TempDir tmp;
  const auto path = write_config(tmp.path(), sweep_config());
  const auto r = invoke({"validate", path});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  EXPECT_TRUE(r.summary().at("valid").get<bool>());
  EXPECT_TRUE(r.summary().at("issues").empty());
}

TEST(Cli, TubeRadiusOutOfBounds)
{
  json c = sweep_config();
  c["geometry"] = {{"kind", "tube"}, {"radius", 0.6}};
  const auto issues = cli::validate_config(c);
  ASSERT_FALSE(issues.empty());
  EXPECT_NE(issues.front().find("geometry"), std::string::npos) << issues.front();
}

TEST(Cli, UnsortedGridMonotonicity)
{
  json c = sweep_config();
  c["task"].erase("omega_min");
  c["task"].erase("omega_max");
  c["task"].erase("points");
  c["task"]["grid"] = {1.0, 2.0, 1.5};
  const auto issues = cli::validate_config(c);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues.front().find("monotonicity"), std::string::npos) << issues.front();
}

TEST(Cli, UnknownKeysAreListed)
{
  json c = sweep_config();
  c["solver"]["hh"] = 0.1;
  c["bogus"] = 1;
  const auto issues = cli::validate_config(c);
  ASSERT_EQ(issues.size(), 2u);
  std::string all;
  for (const auto &i : issues)
  {
    all += i + "\n";
  }
  EXPECT_NE(all.find("unknown keys: bogus"), std::string::npos) << all;
  EXPECT_NE(all.find("unknown keys: hh"), std::string::npos) << all;
}

TEST(Cli, MissingSchemaVersion)
{
  json c = sweep_config();
  c.erase("schema_version");
  EXPECT_FALSE(cli::validate_config(c).empty());
}

TEST(Cli, MalformedJsonExitsTwoWithoutOutputs)
{
  TempDir tmp;
  const fs::path p = tmp.path() / "broken.json";
  std::ofstream(p) << R"({"schema_version": 1, "task": {"type": "sweep",)";
  const auto r = invoke({"run", p.string()});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_EQ(r.summary().at("status"), "validation_error");
  EXPECT_EQ(file_count(tmp.path()), 1u);
}

TEST(Cli, InvalidConfigRunExitsTwoWithoutOutputs)
{
  TempDir tmp;
  json c = sweep_config();
  c["geometry"]["width"] = 1.5;
  const auto path = write_config(tmp.path(), c);
  const auto r = invoke({"run", path});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_FALSE(fs::exists(tmp.path() / "out"));
}

TEST(Cli, SweepRunWritesArtifactsWithProvenance)
{
  TempDir tmp;
  const auto path = write_config(tmp.path(), sweep_config());
  const auto r = invoke({"run", path});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto s = r.summary();
  EXPECT_EQ(s.at("status"), "ok");
  const std::string hash = s.at("config_hash");
  EXPECT_EQ(hash.size(), 16u);
  const fs::path out = tmp.path() / "out";
  for (const char *name : {"sweep.csv", "sweep_fit.json", "sweep.svg"})
  {
    ASSERT_TRUE(fs::exists(out / name)) << name;
    const auto text = read_file(out / name);
    EXPECT_NE(text.find(hash), std::string::npos) << name;
    EXPECT_NE(text.find(plasmahom::kVersion), std::string::npos) << name;
  }
  const auto fit = json::parse(read_file(out / "sweep_fit.json"));
  EXPECT_EQ(fit.at("config_hash"), hash);
  for (const auto &entry : fs::directory_iterator(out))
  {
    EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos);
  }
}

TEST(Cli, RerunsAreByteIdentical)
{
  TempDir tmp;
  const auto path = write_config(tmp.path(), sweep_config());
  ASSERT_EQ(invoke({"run", path}).code, cli::kExitOk);
  const fs::path out = tmp.path() / "out";
  const auto csv = read_file(out / "sweep.csv");
  const auto fit = read_file(out / "sweep_fit.json");
  ASSERT_EQ(invoke({"run", path}).code, cli::kExitOk);
  EXPECT_EQ(read_file(out / "sweep.csv"), csv);
  EXPECT_EQ(read_file(out / "sweep_fit.json"), fit);
}

TEST(Cli, OverrideIsAppliedAndEchoed)
{
  TempDir tmp;
  json c = sweep_config();
  c["task"]["points"] = 12;
  const auto path = write_config(tmp.path(), c);
  const auto r = invoke({"run", path, "--set", "solver.h=0.05"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto s = r.summary();
  ASSERT_EQ(s.at("overrides").size(), 1u);
  EXPECT_EQ(s.at("overrides")[0], "solver.h=0.05");
  json applied = c;
  applied["solver"]["h"] = 0.05;
  EXPECT_EQ(s.at("config_hash"), cli::config_hash(applied));
  EXPECT_NE(s.at("config_hash"), cli::config_hash(c));
}

TEST(Cli, OverrideParsing)
{
  json c = sweep_config();
  cli::apply_override(c, "solver.tol=1e-9");
  EXPECT_DOUBLE_EQ(c["solver"]["tol"].get<double>(), 1e-9);
  cli::apply_override(c, "geometry.kind=tube");
  EXPECT_EQ(c["geometry"]["kind"], "tube");
  cli::apply_override(c, "material.eps_bulk=[2, 0.1]");
  EXPECT_EQ(cli::parse_complex(c["material"]["eps_bulk"], "x"), plasmahom::cplx(2.0, 0.1));
  EXPECT_THROW(cli::apply_override(c, "no_equals_sign"), cli::ValidationError);
}

TEST(Cli, ConfigHashIgnoresKeyOrderAndWhitespace)
{
  const json a = json::parse(R"({"a": 1, "b": [1, 2]})");
  const json b = json::parse(R"({ "b":[1,2],
                                  "a":1 })");
  EXPECT_EQ(cli::config_hash(a), cli::config_hash(b));
}

TEST(Cli, EnzTask)
{
  TempDir tmp;
  const json c = json::parse(R"({
    "schema_version": 1,
    "task": {"type": "enz", "eps_bar": [1, 0], "sigma_bar_d": [0.01, 1.0],
             "lambda_bar_d": [0, 0], "omega": 2.0, "spacing": 1.0},
    "output": {"directory": "out"}
  })");
  const auto r = invoke({"run", write_config(tmp.path(), c)});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  EXPECT_TRUE(fs::exists(tmp.path() / "out" / "enz.json"));
}

TEST(Cli, ZeroPermittivityRegionAdvisesLossFloor)
{
  TempDir tmp;
  const json c = json::parse(R"({
    "schema_version": 1,
    "task": {"type": "macro", "lx": 4, "ly": 4, "nx": 40, "ny": 40, "omega": 6.283,
             "pml": {"cells": 8},
             "sources": [{"kind": "current_patch", "x": 2, "y": 2, "radius": 0.2}],
             "regions": [{"x0": 0, "x1": 4, "y0": 3, "y1": 3.5, "eps": [0, 1, 1]}]},
    "output": {"directory": "out"}
  })");
  const auto path = write_config(tmp.path(), c);
  const auto v = invoke({"validate", path});
  EXPECT_EQ(v.code, cli::kExitValidation);
  const auto issues = cli::validate_config(c);
  ASSERT_FALSE(issues.empty());
  EXPECT_NE(issues.front().find("loss"), std::string::npos) << issues.front();
}

TEST(Cli, MacroTaskWritesFieldDump)
{
  TempDir tmp;
  const json c = json::parse(R"({
    "schema_version": 1,
    "task": {"type": "macro", "lx": 4, "ly": 4, "nx": 40, "ny": 40, "omega": 6.283,
             "pml": {"cells": 8},
             "sources": [{"kind": "current_patch", "x": 2, "y": 2, "radius": 0.2}]},
    "output": {"directory": "out"}
  })");
  const auto r = invoke({"run", write_config(tmp.path(), c)});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  EXPECT_EQ(read_file(tmp.path() / "out" / "field.bin").substr(0, 4), "PHMF");
}

TEST(Cli, MissingConfigFile)
{
  const auto r = invoke({"run", "/nonexistent/plasmahom.json"});
  EXPECT_EQ(r.code, cli::kExitValidation);
}

TEST(Cli, ExecutableRunsVersion)
{
  const std::string cmd = std::string(PLASMAHOM_CLI_PATH) + " version > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}
