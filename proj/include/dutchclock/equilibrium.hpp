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

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dutchclock/microfoundation.hpp"

namespace dutchclock {

using Point2     = std::array<double, 2>;  // (D, R)
using EntryMap   = std::function<Point2(double D, double R)>;
using DriverMap  = std::function<double(double D)>;

/// Thrown when the damped iteration runs out of budget.
class ConvergenceError : public NumericalError
{
public:
  ConvergenceError(std::string const &what, Point2 last, std::vector<double> history)
    : NumericalError(what)
    , last_{last}
    , history_{std::move(history)}
  {
  }
  Point2 const              &last() const { return last_; }
  std::vector<double> const &residual_history() const { return history_; }

private:
  Point2              last_;
  std::vector<double> history_;
};

struct EntryMapEvaluation
{
  double            cutoffD = 0.0;
  double            cutoffR = 0.0;  // +inf when riders never match
  double            phiD    = 0.0;
  double            phiR    = 0.0;
  ReducedFormBundle bundle;
};

struct EquilibriumResult
{
  double                Dstar      = 0.0;
  double                Rstar      = 0.0;
  int                   iterations = 0;
  double                residual   = 0.0;
  std::optional<double> contractionK;
  double                omega     = 0.0;    // damping that converged
  bool                  collapsed = false;  // no interior equilibrium; no trade
};

struct TwoSidedOptions
{
  double omega         = 0.5;
  double relTol        = 1e-9;  // on the l1 residual, relative to Dbar + Rbar
  int    maxIterations = 100000;
  int    contractionGrid = 0;   // > 0 also estimates the Jacobian bound
};

struct OneSidedOptions
{
  int    signGrid = 65;
  double relWidth = 1e-13;  // bisection stops at this bracket width / Dbar
  double relTol   = 1e-9;
};

double driver_cutoff(ReducedFormBundle const &rf, double lambda);
double rider_cutoff(ReducedFormBundle const &rf, double kappa);

/// Reduced forms at prim.D, prim.R, then both cutoffs and implied masses.
EntryMapEvaluation entry_map(MarketPrimitives const &prim, Mechanism const &mech,
                             EntryPrimitives const &entry);

/// Entry map with masses clamped to [eps, bound], eps = 1e-9 * bound.
EntryMap  make_entry_map(MarketPrimitives const &base, Mechanism const &mech,
                         EntryPrimitives const &entry);
/// Driver entry at fixed rider mass; only driver objects are evaluated.
DriverMap make_driver_map(MarketPrimitives const &base, Mechanism const &mech,
                          EntryPrimitives const &entry, double R);

EquilibriumResult solve_one_sided(DriverMap const &phi, double Dbar,
                                  OneSidedOptions const &opt = {});
EquilibriumResult solve_one_sided(MarketPrimitives const &base, Mechanism const &mech,
                                  EntryPrimitives const &entry, double R,
                                  OneSidedOptions const &opt = {});

EquilibriumResult solve_two_sided(EntryMap const &phi, double Dbar, double Rbar,
                                  TwoSidedOptions const &opt = {});
EquilibriumResult solve_two_sided(MarketPrimitives const &base, Mechanism const &mech,
                                  EntryPrimitives const &entry, TwoSidedOptions const &opt = {});

/// Damped iteration that retries with heavier damping (0.5, 0.2, 0.05), then
/// a root search on the rider-to-driver ratio (omega 0). When no ratio lets
/// both sides enter at a fixed point the no-trade point is returned with
/// collapsed set.
EquilibriumResult solve_two_sided_robust(MarketPrimitives const &base, Mechanism const &mech,
                                         EntryPrimitives const &entry);

/// Supremum over a gridN x gridN interior grid of the largest column l1 norm
/// of the central-difference Jacobian.
double contraction_check(EntryMap const &phi, double Dbar, double Rbar, int gridN);

struct MonotoneIterationOptions
{
  double omega         = 1.0;  // 1 iterates the map itself
  double relTol        = 1e-12;
  int    maxIterations = 10000;
};

struct MonotoneIterationResult
{
  std::vector<Point2> path;
  Point2              limit{};
  bool                converged          = false;
  bool                subsequencesMonotone = false;
  bool                firstStepUp        = false;
  std::string         diagnostic;
};

MonotoneIterationResult monotone_iteration(EntryMap const &phi, Point2 start, double Dbar,
                                           double Rbar, MonotoneIterationOptions const &opt = {});

struct PropagationRow
{
  double R, DstarDA, DstarFP, vbarDA, vbarFP;
};

struct PropagationReport
{
  std::vector<PropagationRow> rows;
  bool                        holds = true;
};

/// Compares rider cutoffs at each mechanism's one-sided driver equilibrium
/// along a rider-mass grid.
PropagationReport propagation_check(MarketPrimitives const &base, Mechanism const &da,
                                    Mechanism const &fp, EntryPrimitives const &entry,
                                    std::vector<double> const &Rgrid);

}  // namespace dutchclock
