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

#include "dutchclock/equilibrium.hpp"

namespace dutchclock {

double revenue(double alpha, double m, double pbarM);

/// Dutch against a posted benchmark at each mechanism's own thickness.
struct RevenueReport
{
  double revDA          = 0.0;
  double revFP          = 0.0;
  double ratio          = 0.0;
  double entryGain      = 0.0;  // D*_DA / D*_FP
  double matchRateRatio = 0.0;  // q_DA / q_FP
  double priceGain      = 0.0;  // pbar_DA / pbar_FP

  /// Every channel weakly favours Dutch, which forces ratio >= 1.
  bool channels_favor_dutch() const
  {
    return entryGain >= 1.0 && matchRateRatio >= 1.0 && priceGain >= 1.0;
  }
};

RevenueReport revenue_report(double alpha, double DstarDA, ReducedFormBundle const &da,
                             double DstarFP, ReducedFormBundle const &fp);

/// Largest clock speed that still guarantees a Dutch average price of at
/// least pbar. Empty when p0 < pbar.
std::optional<double> slow_clock_bound(double p0, double pbar, double T);

enum class WelfareCase
{
  AllSurplus,     // dominance for every s >= 0
  SurplusFloor,   // dominance iff s >= threshold
  SurplusCeiling, // dominance iff s <= threshold
  Never
};

std::string_view to_string(WelfareCase c);

struct WelfareReport
{
  double WDA = 0.0;
  double WFP = 0.0;
  double volumeTerm     = 0.0;  // s (m_DA - m_FP)
  double driverWaitTerm = 0.0;  // -lambda (D_DA tau_DA - D_FP tau_FP)
  double riderWaitTerm  = 0.0;  // -kappa (R_DA tauR_DA - R_FP tauR_FP)
  double deltaWait      = 0.0;  // aggregate waiting-cost change, DA minus FP
  double deltaM         = 0.0;
  WelfareCase           kase = WelfareCase::AllSurplus;
  std::optional<double> threshold;  // s* (ceiling) or s** (floor)

  double deltaW() const { return WDA - WFP; }
  bool   dominates() const { return WDA >= WFP; }
};

/// Welfare level up to the mechanism-independent constant.
double welfare(double s, double lambda, double kappa, double D, double R,
               ReducedFormBundle const &rf);

/// Both mechanisms at the same (D, R).
WelfareReport welfare_fixed(ReducedFormBundle const &da, ReducedFormBundle const &fp,
                            MarketPrimitives const &prim, double lambda, double kappa, double s);

/// Each mechanism at its own equilibrium thickness.
WelfareReport welfare_equilibrium(EquilibriumResult const &eqDA, ReducedFormBundle const &da,
                                  EquilibriumResult const &eqFP, ReducedFormBundle const &fp,
                                  double lambda, double kappa, double s);

/// Two-sided equilibria for both mechanisms, then the revenue comparison.
RevenueReport equilibrium_revenue(MarketPrimitives const &base, EntryPrimitives const &entry,
                                  Mechanism const &da, Mechanism const &fp);

/// Start-price ratio p0/pbar at which the equilibrium revenue ratio first
/// crosses 1 from below, scanning p0 = pbar * {0.7, 0.8, ..., 1.6} within
/// (0, 1]. Empty when no crossing is bracketed.
std::optional<double> revenue_frontier(MarketPrimitives const &base, EntryPrimitives const &entry,
                                       double pbar, double delta);

}  // namespace dutchclock
