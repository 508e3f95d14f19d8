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

#include "dutchclock/dominance.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace dutchclock {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Dutch dominates iff w * slope >= level. Four sign patterns.
DominanceVerdict classify(double level, double slope, Side side, Benchmark b)
{
  DominanceVerdict v;
  v.side      = side;
  v.benchmark = b;
  if (!std::isfinite(level) || !std::isfinite(slope))
  {
    throw InvalidInput(fmt::format("non-finite gaps ({}, {})", level, slope));
  }
  bool const levelOk = level <= kTieTolerance;    // holds at w = 0
  bool const slopeOk = slope >= -kTieTolerance;   // does not worsen with w
  if (levelOk && slopeOk)
  {
    v.kase = DominanceCase::AllLambda;
  }
  else if (!levelOk && slope > kTieTolerance)
  {
    v.kase      = DominanceCase::FloorThreshold;
    v.threshold = level / slope;
  }
  else if (level < -kTieTolerance && slope < -kTieTolerance)
  {
    v.kase      = DominanceCase::CeilingThreshold;
    v.threshold = level / slope;
  }
  else
  {
    v.kase = DominanceCase::NeverDominates;
  }
  return v;
}

}  // namespace

bool DominanceVerdict::dominates_at(double w) const
{
  switch (kase)
  {
  case DominanceCase::AllLambda:
    return true;
  case DominanceCase::FloorThreshold:
    return w >= *threshold;
  case DominanceCase::CeilingThreshold:
    return w <= *threshold;
  case DominanceCase::NeverDominates:
    break;
  }
  return false;
}

std::string_view to_string(DominanceCase c)
{
  switch (c)
  {
  case DominanceCase::AllLambda:
    return "all";
  case DominanceCase::FloorThreshold:
    return "floor";
  case DominanceCase::CeilingThreshold:
    return "ceiling";
  case DominanceCase::NeverDominates:
    break;
  }
  return "never";
}

double arm_posted_price(double rho, double delta, double T)
{
  if (!(rho > 0.0 && rho <= 1.0) || !(delta >= 0.0) || !(T > 0.0))
  {
    throw InvalidInput(fmt::format("arm_posted_price: bad inputs rho={} delta={} T={}", rho, delta, T));
  }
  return rho * decay_integral(delta, T) / T;
}

GapReport gaps(ReducedFormBundle const &da, ReducedFormBundle const &fp)
{
  GapReport g;
  g.deltaPi  = fp.expected_earnings() - da.expected_earnings();
  g.deltaTau = fp.tau - da.tau;
  if (da.pbarM && fp.pbarM && da.qR > 0.0 && fp.qR > 0.0)
  {
    g.riderA = *fp.pbarM - *da.pbarM;
    g.riderB = fp.tauR / fp.qR - da.tauR / da.qR;
  }
  else
  {
    g.riderA = kNaN;
    g.riderB = kNaN;
  }
  return g;
}

DominanceVerdict classify_driver(GapReport const &g, Benchmark b)
{
  return classify(g.deltaPi, g.deltaTau, Side::Driver, b);
}

DominanceVerdict classify_rider(GapReport const &g, Benchmark b)
{
  // A + kappa B >= 0  <=>  kappa B >= -A
  return classify(-g.riderA, g.riderB, Side::Rider, b);
}

std::optional<double> kappa_star(ReducedFormBundle const &da, ReducedFormBundle const &fp)
{
  if (!da.pbarM || !fp.pbarM)
  {
    return std::nullopt;
  }
  double const den = da.qR * fp.tauR - fp.qR * da.tauR;
  if (den == 0.0)
  {
    return std::nullopt;
  }
  return (*da.pbarM - *fp.pbarM) * da.qR * fp.qR / den;
}

double batch_margin(double lambda, ReducedFormBundle const &da, ReducedFormBundle const &fpb)
{
  return da.expected_earnings() - fpb.expected_earnings() + lambda * (fpb.tau - da.tau);
}

std::optional<double> rider_kappa0(ReducedFormBundle const &da, ReducedFormBundle const &fpb,
                                   double T)
{
  if (!da.pbarM || !fpb.pbarM || !(da.tauR < T))
  {
    return std::nullopt;
  }
  return (*da.pbarM - *fpb.pbarM) * da.qR / (T - da.tauR);
}

ThresholdReport lambda_threshold(double deltaPi, double deltaTau, Benchmark b)
{
  ThresholdReport r;
  r.verdict  = classify(deltaPi, deltaTau, Side::Driver, b);
  r.rawRatio = deltaTau != 0.0 ? deltaPi / deltaTau : kNaN;
  return r;
}

}  // namespace dutchclock
