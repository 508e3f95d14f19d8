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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dutchclock/config.hpp"
#include "dutchclock/estimators.hpp"

namespace dutchclock {

/// A table cell: a number (NaN prints as NA) or free text.
using TableValue = std::variant<double, std::string>;

struct Table
{
  std::string                          name;
  std::vector<std::string>             columns;
  std::vector<std::vector<TableValue>> rows;
  std::vector<std::string>             warnings;

  std::size_t column(std::string_view c) const;  // throws when missing
  double      number(std::size_t row, std::string_view c) const;
  std::string text(std::size_t row, std::string_view c) const;
};

/// Numbers use 6 significant digits.
std::string format_value(TableValue const &v);
void        write_csv(std::ostream &os, Table const &t);

struct TableOptions
{
  int           sessions  = 200;  // simulated tables, per cell
  std::uint64_t seed      = 20260101;
  int           bootstrap = 1000;
};

std::vector<std::string_view> table_names();

/// Builds one of the named tables. Simulated tables use the shipped presets
/// with sessions and seed taken from opt.
Table make_table(std::string_view name, TableOptions const &opt = {});

// Pieces shared with the scenario runner and the acceptance checks.

/// Text shown in a break-even cell: "<=0" when Dutch dominates for every
/// waiting cost or the ceiling threshold binds, "---" when it never does,
/// otherwise the floor threshold.
std::string regime_cell(DominanceVerdict const &v);

/// Pooled estimates of every simulated mechanism of a preset, one bundle per
/// (cell, mechanism) plus one pooled across cells per mechanism.
struct SimulatedVariant
{
  ScenarioConfig                            config;
  std::vector<CellRecords>                  cells;
  std::vector<std::vector<EstimatedBundle>> byCell;  // [cell][mechanism]
  std::vector<EstimatedBundle>              pooled;  // [mechanism]
};

SimulatedVariant simulate_variant(ScenarioConfig const &cfg, int bootstrap);

}  // namespace dutchclock
