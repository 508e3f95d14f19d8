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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dutchclock/simulator.hpp"
#include "dutchclock/types.hpp"

namespace dutchclock {

/// Validation failure; the message starts with the JSON path of the field.
class ConfigError : public InvalidInput
{
public:
  ConfigError(std::string path, std::string const &what);
  std::string const &path() const { return path_; }

private:
  std::string path_;
};

enum class Stage
{
  ReducedForms,
  Dominance,
  Equilibrium,
  Outcomes,
  Simulate,
  Estimate
};

std::string_view to_string(Stage s);

/// Sweeps applied on top of the mechanism list. Empty means "use the
/// mechanism's own value".
struct Grids
{
  std::vector<double> theta;
  std::vector<double> delta;  // exponential Dutch clocks
  std::vector<double> rho;    // exponential Dutch start prices
  std::vector<double> phi;    // immediate posted friction
  std::vector<double> pbar;   // posted prices
  std::vector<double> lambda{0.02, 0.05};
  std::vector<double> kappa{0.02};
  std::vector<double> s{0.5};
};

struct SimulationSettings
{
  SimConfig              sim;
  // take the per-driver meeting rate from the analytic primitives
  bool                   muFromPrimitives = false;
  std::vector<Cell>      cells{{20, 20}, {20, 40}, {40, 20}, {40, 40}};
  std::vector<Mechanism> mechanisms;
  double                 lambda    = 0.10;
  int                    bootstrap = 1000;
};

struct ScenarioConfig
{
  std::string            name = "custom";
  MarketPrimitives       primitives;
  EntryPrimitives        entry;
  std::vector<Mechanism> mechanisms;
  Grids                  grids;
  SimulationSettings     simulation;
  std::vector<Stage>     stages;
  std::string            outDir;
  std::optional<double>  tol;

  bool runs(Stage s) const;
  /// Mechanisms after the delta/rho/phi/pbar grids are applied.
  std::vector<Mechanism> expanded_mechanisms() const;
  /// Simulator settings with derived fields filled in.
  SimConfig sim_config() const;
};

/// Parses and validates. Unknown keys are rejected.
ScenarioConfig parse_config(std::string_view json);
ScenarioConfig load_config(std::string const &path);

/// Canonical JSON form; parse_config(dump_config(c)) reproduces c.
std::string dump_config(ScenarioConfig const &cfg);

std::vector<std::string_view> preset_names();
ScenarioConfig                preset(std::string_view name);

}  // namespace dutchclock
