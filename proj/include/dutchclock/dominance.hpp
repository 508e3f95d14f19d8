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
#include <string_view>

#include "dutchclock/microfoundation.hpp"

namespace dutchclock {

/// Gaps below this magnitude count as ties and resolve toward weak dominance.
inline constexpr double kTieTolerance = 1e-12;

struct GapReport
{
  double deltaPi  = 0.0;  // q_FP pi_FP - q_DA pi_DA
  double deltaTau = 0.0;  // tau_FP - tau_DA
  double riderA   = 0.0;  // pbar_FP - pbar_DA
  double riderB   = 0.0;  // tauR_FP/qR_FP - tauR_DA/qR_DA
};

enum class DominanceCase
{
  AllLambda,
  FloorThreshold,
  NeverDominates,
  CeilingThreshold
};

enum class Side
{
  Driver,
  Rider
};

enum class Benchmark
{
  Immediate,
  Batch
};

struct DominanceVerdict
{
  DominanceCase         kase = DominanceCase::AllLambda;
  std::optional<double> threshold;
  Side                  side      = Side::Driver;
  Benchmark             benchmark = Benchmark::Immediate;

  /// Whether the Dutch mechanism dominates at waiting cost w.
  bool dominates_at(double w) const;
};

std::string_view to_string(DominanceCase c);

/// Posted price that equalizes the time-averaged acceptance rate with an
/// exponential clock starting at rho.
double arm_posted_price(double rho, double delta, double T);

/// Gaps of a posted benchmark against the Dutch bundle at the same thickness.
/// Rider gaps are NaN when either side has no matches.
GapReport gaps(ReducedFormBundle const &da, ReducedFormBundle const &fp);

DominanceVerdict classify_driver(GapReport const &g, Benchmark b = Benchmark::Immediate);
DominanceVerdict classify_rider(GapReport const &g, Benchmark b = Benchmark::Immediate);

/// Rider floor threshold written directly in bundle terms.
std::optional<double> kappa_star(ReducedFormBundle const &da, ReducedFormBundle const &fp);

/// Driver margin against the batch benchmark; positive means Dutch dominates.
double batch_margin(double lambda, ReducedFormBundle const &da, ReducedFormBundle const &fpb);

/// Rider break-even waiting cost against batch; empty when tauR_DA >= T or a
/// price is undefined.
std::optional<double> rider_kappa0(ReducedFormBundle const &da, ReducedFormBundle const &fpb,
                                   double T);

/// Break-even summary used by the empirical tables.
struct ThresholdReport
{
  DominanceVerdict verdict;
  double           rawRatio = 0.0;  // deltaPi / deltaTau, NaN when deltaTau == 0
};

ThresholdReport lambda_threshold(double deltaPi, double deltaTau,
                                 Benchmark b = Benchmark::Immediate);

}  // namespace dutchclock
