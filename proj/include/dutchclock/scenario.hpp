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

#include <filesystem>
#include <string>
#include <vector>

#include "dutchclock/config.hpp"
#include "dutchclock/estimators.hpp"

namespace dutchclock {

/// Estimates of simulated sessions, grouped by thickness cell.
struct CellEstimates
{
  Cell                         cell;
  std::vector<EstimatedBundle> bundles;  // one per mechanism, in first-seen order
};

/// Groups records by (D, R) and mechanism and estimates each group.
std::vector<CellEstimates> estimate_cells(std::vector<SessionRecord> const &recs,
                                          BootstrapOptions const &opt);

/// Writes cells.csv, sim_dominance.csv, sim_lambda.csv and, when at least
/// three D levels share an R, monotonicity.csv. Returns the file names.
std::vector<std::string> write_estimate_outputs(std::vector<CellEstimates> const &cells,
                                                double lambda, std::filesystem::path const &dir);

/// Runs the configured stages and writes one CSV per stage plus the
/// resolved config. Returns the files written, in order.
std::vector<std::string> run_scenario(ScenarioConfig const &cfg, std::filesystem::path const &dir);

}  // namespace dutchclock
