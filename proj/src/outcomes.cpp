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

#include "dutchclock/outcomes.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "dutchclock/dominance.hpp"

namespace dutchclock {
namespace {

constexpr double kTie = 1e-12;

void classify_welfare(WelfareReport &w)
{
  if (w.deltaWait <= kTie && w.deltaM >= -kTie)
  {
    w.kase = WelfareCase::AllSurplus;
  }
  else if (w.deltaWait > kTie && w.deltaM > kTie)
  {
    w.kase      = WelfareCase::SurplusFloor;
    w.threshold = w.deltaWait / w.deltaM;
  }
  else if (w.deltaWait <= kTie && w.deltaM < -kTie)
  {
    w.kase      = WelfareCase::SurplusCeiling;
    w.threshold = std::max(0.0, w.deltaWait / w.deltaM);
  }
  else
  {
    w.kase = WelfareCase::Never;
  }
}

WelfareReport compare(double s, double lambda, double kappa, double DDA, double RDA,
                      ReducedFormBundle const &da, double DFP, double RFP,
                      ReducedFormBundle const &fp)
{
  WelfareReport w;
  w.WDA            = welfare(s, lambda, kappa, DDA, RDA, da);
  w.WFP            = welfare(s, lambda, kappa, DFP, RFP, fp);
  w.deltaM         = da.m - fp.m;
  w.volumeTerm     = s * w.deltaM;
  w.driverWaitTerm = -lambda * (DDA * da.tau - DFP * fp.tau);
  w.riderWaitTerm  = -kappa * (RDA * da.tauR - RFP * fp.tauR);
  w.deltaWait      = -(w.driverWaitTerm + w.riderWaitTerm);
  classify_welfare(w);
  return w;
}

double price_or_throw(ReducedFormBundle const &rf, char const *who)
{
  if (!rf.pbarM)
  {
    throw InvalidInput(fmt::format("{} has an empty match set; revenue ratio undefined", who));
  }
  return *rf.pbarM;
}

}  // namespace

double revenue(double alpha, double m, double pbarM)
{
  if (!(m >= 0.0))
  {
    throw InvalidInput(fmt::format("match volume must be >= 0, got {}", m));
  }
  return alpha * m * pbarM;
}

RevenueReport revenue_report(double alpha, double DstarDA, ReducedFormBundle const &da,
                             double DstarFP, ReducedFormBundle const &fp)
{
  double const pDA = price_or_throw(da, "Dutch mechanism");
  double const pFP = price_or_throw(fp, "benchmark");
  RevenueReport r;
  r.revDA          = revenue(alpha, DstarDA * da.q, pDA);
  r.revFP          = revenue(alpha, DstarFP * fp.q, pFP);
  r.ratio          = r.revDA / r.revFP;
  r.entryGain      = DstarDA / DstarFP;
  r.matchRateRatio = da.q / fp.q;
  r.priceGain      = pDA / pFP;
  return r;
}

std::optional<double> slow_clock_bound(double p0, double pbar, double T)
{
  if (!(pbar > 0.0) || !(T > 0.0))
  {
    throw InvalidInput("slow_clock_bound needs pbar > 0 and T > 0");
  }
  if (p0 < pbar)
  {
    return std::nullopt;
  }
  return std::log(p0 / pbar) / T;
}

std::string_view to_string(WelfareCase c)
{
  switch (c)
  {
  case WelfareCase::AllSurplus:
    return "all";
  case WelfareCase::SurplusFloor:
    return "floor";
  case WelfareCase::SurplusCeiling:
    return "ceiling";
  case WelfareCase::Never:
    break;
  }
  return "never";
}

double welfare(double s, double lambda, double kappa, double D, double R,
               ReducedFormBundle const &rf)
{
  return rf.m * s - lambda * D * rf.tau - kappa * R * rf.tauR;
}

WelfareReport welfare_fixed(ReducedFormBundle const &da, ReducedFormBundle const &fp,
                            MarketPrimitives const &prim, double lambda, double kappa, double s)
{
  return compare(s, lambda, kappa, prim.D, prim.R, da, prim.D, prim.R, fp);
}

WelfareReport welfare_equilibrium(EquilibriumResult const &eqDA, ReducedFormBundle const &da,
                                  EquilibriumResult const &eqFP, ReducedFormBundle const &fp,
                                  double lambda, double kappa, double s)
{
  return compare(s, lambda, kappa, eqDA.Dstar, eqDA.Rstar, da, eqFP.Dstar, eqFP.Rstar, fp);
}

RevenueReport equilibrium_revenue(MarketPrimitives const &base, EntryPrimitives const &entry,
                                  Mechanism const &da, Mechanism const &fp)
{
  auto const eDA = solve_two_sided(base, da, entry);
  auto const eFP = solve_two_sided(base, fp, entry);
  auto const rDA = reduced_form(base.at(eDA.Dstar, eDA.Rstar), da, entry.valueDist);
  auto const rFP = reduced_form(base.at(eFP.Dstar, eFP.Rstar), fp, entry.valueDist);
  return revenue_report(base.alpha, eDA.Dstar, rDA, eFP.Dstar, rFP);
}

std::optional<double> revenue_frontier(MarketPrimitives const &base, EntryPrimitives const &entry,
                                       double pbar, double delta)
{
  Mechanism const fp = PostedImmediate{pbar, 0.0};
  auto const      eFP = solve_two_sided(base, fp, entry);
  auto const      rFP = reduced_form(base.at(eFP.Dstar, eFP.Rstar), fp, entry.valueDist);
  double const    revFP = revenue(base.alpha, eFP.Dstar * rFP.q, price_or_throw(rFP, "benchmark"));

  auto gap = [&](double p0) {
    Mechanism const da  = DutchExp{p0, delta};
    auto const      eDA = solve_two_sided(base, da, entry);
    auto const rDA = reduced_form(base.at(eDA.Dstar, eDA.Rstar), da, entry.valueDist);
    double const revDA = rDA.pbarM ? revenue(base.alpha, eDA.Dstar * rDA.q, *rDA.pbarM) : 0.0;
    return revDA / revFP - 1.0;
  };

  double prevP = 0.0, prevG = 0.0;
  bool   havePrev = false;
  for (int k = 7; k <= 16; ++k)
  {
    double const p0 = pbar * k / 10.0;
    if (p0 > 1.0)
    {
      break;
    }
    double const g = gap(p0);
    if (havePrev && prevG < 0.0 && g >= 0.0)
    {
      std::uintmax_t iters = 60;
      auto const     tol   = boost::math::tools::eps_tolerance<double>(30);
      auto const [a, b] = boost::math::tools::toms748_solve(gap, prevP, p0, prevG, g, tol, iters);
      return 0.5 * (a + b) / pbar;
    }
    prevP    = p0;
    prevG    = g;
    havePrev = true;
  }
  return std::nullopt;
}

}  // namespace dutchclock
