//------------------------------------------------------------------------------
//
//   Copyright 2026 The dutchclock Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Command-line front end: golden tables, scenario runs, simulation,
// estimation from logs and the invariant suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dutchclock/scenario.hpp"
#include "dutchclock/tables.hpp"
#include "dutchclock/verify.hpp"

namespace fs = std::filesystem;
using namespace dutchclock;

namespace {

constexpr char const *kOutDirEnv = "DUTCHCLOCK_OUT_DIR";

struct Common
{
  std::optional<std::uint64_t> seed;
  std::optional<int>           sessions;
  std::optional<double>        tol;
  std::string                  outDir;
  std::string                  preset;
};

fs::path out_dir(Common const &c, std::string const &fallback)
{
  if (!c.outDir.empty())
  {
    return c.outDir;
  }
  if (char const *env = std::getenv(kOutDirEnv); env && *env)
  {
    return env;
  }
  return fallback;
}

void add_common(CLI::App *sub, Common &c)
{
  sub->add_option("--seed", c.seed, "base seed for simulation and bootstrap");
  sub->add_option("--sessions", c.sessions, "simulated sessions per cell")->check(CLI::PositiveNumber);
  sub->add_option("--tol", c.tol, "override equality tolerances")->check(CLI::PositiveNumber);
  sub->add_option("--out-dir", c.outDir,
                  fmt::format("output directory, '-' for stdout where supported (default ${} or .)",
                              kOutDirEnv));
}

ScenarioConfig resolve(std::string const &path, Common const &c)
{
  if (path.empty() && c.preset.empty())
  {
    throw InvalidInput("give a config path or --preset");
  }
  auto cfg = path.empty() ? preset(c.preset) : load_config(path);
  if (c.seed)
  {
    cfg.simulation.sim.baseSeed = *c.seed;
  }
  if (c.sessions)
  {
    cfg.simulation.sim.sessionsPerCell = *c.sessions;
  }
  if (c.tol)
  {
    cfg.tol = c.tol;
  }
  return cfg;
}

std::vector<std::string> strings(std::vector<std::string_view> const &xs)
{
  return {xs.begin(), xs.end()};
}

void list_files(fs::path const &dir, std::vector<std::string> const &files)
{
  for (auto const &f : files)
  {
    std::cerr << (dir / f).string() << '\n';
  }
}

int cmd_table(std::string const &name, Common const &c, int bootstrap)
{
  TableOptions opt;
  opt.seed      = c.seed.value_or(opt.seed);
  opt.sessions  = c.sessions.value_or(opt.sessions);
  opt.bootstrap = bootstrap;
  auto const t  = make_table(name, opt);
  for (auto const &w : t.warnings)
  {
    std::cerr << "warning: " << w << '\n';
  }
  if (c.outDir == "-")
  {
    write_csv(std::cout, t);
    return 0;
  }
  auto const dir = out_dir(c, ".");
  fs::create_directories(dir);
  std::ofstream os(dir / (name + ".csv"), std::ios::binary);
  write_csv(os, t);
  list_files(dir, {name + ".csv"});
  return 0;
}

int cmd_scenario(std::string const &path, Common const &c, bool simulateOnly)
{
  auto cfg = resolve(path, c);
  if (simulateOnly)
  {
    cfg.stages = {Stage::Simulate, Stage::Estimate};
  }
  auto const dir = out_dir(c, cfg.outDir.empty() ? "out/" + cfg.name : cfg.outDir);
  list_files(dir, run_scenario(cfg, dir));
  return 0;
}

int cmd_estimate(std::string const &logs, Common const &c, double lambda, int bootstrap)
{
  std::ifstream in(logs);
  if (!in)
  {
    throw InvalidInput(fmt::format("cannot open session log '{}'", logs));
  }
  auto const recs = read_session_log(in);
  if (recs.empty())
  {
    throw InvalidInput("session log has no rows");
  }
  auto const dir = out_dir(c, ".");
  fs::create_directories(dir);
  auto const cells = estimate_cells(recs, {bootstrap, c.seed.value_or(20260101)});
  list_files(dir, write_estimate_outputs(cells, lambda, dir));
  return 0;
}

int cmd_verify(std::string const &path, Common const &c, int points, bool inject)
{
  VerifyOptions opt;
  // --tol wins over the config file
  opt.tol = c.tol ? c.tol : (path.empty() ? std::nullopt : load_config(path).tol);
  opt.points                = points;
  opt.seed                  = c.seed.value_or(opt.seed);
  opt.injectPaymentSignFlip = inject;
  auto const r              = run_verify(opt);
  write_report(std::cout, r);
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Dutch clock versus posted-price matching: tables, scenarios, simulation"};
  app.require_subcommand(1);
  Common common;

  std::string tableName;
  int         bootstrap = 1000;
  auto       *table     = app.add_subcommand("table", "reproduce a reference table as CSV");
  table->add_option("name", tableName, "table name")
      ->required()
      ->check(CLI::IsMember(strings(table_names())));
  table->add_option("--bootstrap", bootstrap, "bootstrap resamples")->check(CLI::Range(2, 1000000));
  add_common(table, common);

  std::string configPath;
  auto       *scenario = app.add_subcommand("scenario", "run the stages of a config file");
  auto       *simulate = app.add_subcommand("simulate", "run the simulate and estimate stages only");
  for (auto *sub : {scenario, simulate})
  {
    sub->add_option("config", configPath, "JSON config file");
    sub->add_option("--preset", common.preset, "start from a shipped preset instead of a file")
        ->check(CLI::IsMember(strings(preset_names())));
    add_common(sub, common);
  }

  std::string logPath;
  double      lambda   = 0.10;
  auto       *estimate = app.add_subcommand("estimate", "estimate reduced forms from a session log");
  estimate->add_option("logs", logPath, "session log CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("--lambda", lambda, "driver waiting cost for dominance tests");
  estimate->add_option("--bootstrap", bootstrap, "bootstrap resamples")->check(CLI::Range(2, 1000000));
  add_common(estimate, common);

  int   points = 1000;
  bool  inject = false;
  auto *verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--points", points, "random configurations per suite")->check(CLI::PositiveNumber);
  verify->add_flag("--inject-sign-flip", inject, "reverse the payment inequality (must fail)");
  verify->add_option("config", configPath, "config file whose tolerances apply");
  add_common(verify, common);

  std::string presetName;
  auto       *show = app.add_subcommand("preset", "print a shipped preset as JSON");
  show->add_option("name", presetName)
      ->required()
      ->check(CLI::IsMember(strings(preset_names())));

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*table)
    {
      return cmd_table(tableName, common, bootstrap);
    }
    if (*scenario || *simulate)
    {
      return cmd_scenario(configPath, common, static_cast<bool>(*simulate));
    }
    if (*estimate)
    {
      return cmd_estimate(logPath, common, lambda, bootstrap);
    }
    if (*verify)
    {
      return cmd_verify(configPath, common, points, inject);
    }
    std::cout << dump_config(preset(presetName));
    return 0;
  }
  catch (std::exception const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
