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

#include <cmath>
#include <random>

#include "doctest.h"
#include "dutchclock/dominance.hpp"
#include "dutchclock/outcomes.hpp"

using namespace dutchclock;

namespace {

Distribution const kU01{Uniform{0.0, 1.0}};

ReducedFormBundle bundle(double m, double tau, double tauR)
{
  ReducedFormBundle b;
  b.q     = m / 80.0;
  b.m     = m;
  b.tau   = tau;
  b.tauR  = tauR;
  b.qR    = b.q;
  b.pi    = 0.4;
  b.pbarM = 0.5;
  return b;
}

}  // namespace

TEST_CASE("revenue")
{
  CHECK(revenue(0.0, 79.92, 0.63) == 0.0);
  CHECK(revenue(0.2, 79.92, 0.63) == doctest::Approx(10.06992).epsilon(1e-12));
  CHECK_THROWS_AS(revenue(0.2, -1.0, 0.5), InvalidInput);
}

TEST_CASE("three-channel revenue identity")
{
  std::mt19937_64                        rng(3);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  for (int i = 0; i < 200; ++i)
  {
    ReducedFormBundle da = bundle(0.0, 1.0, 1.0), fp = da;
    da.q     = U(rng);
    fp.q     = U(rng);
    da.pbarM = U(rng);
    fp.pbarM = U(rng);
    double const Dda = 80 * U(rng), Dfp = 80 * U(rng), alpha = U(rng);
    auto const   r = revenue_report(alpha, Dda, da, Dfp, fp);
    CHECK(r.entryGain * r.matchRateRatio * r.priceGain ==
          doctest::Approx(r.ratio).epsilon(1e-9));
    CHECK(r.revDA == doctest::Approx(alpha * Dda * da.q * *da.pbarM).epsilon(1e-14));
  }
  ReducedFormBundle empty = bundle(1.0, 1.0, 1.0);
  empty.pbarM.reset();
  CHECK_THROWS_AS(revenue_report(0.2, 10, empty, 10, bundle(1.0, 1.0, 1.0)), InvalidInput);
}

TEST_CASE("slow clock bound")
{
  CHECK(*slow_clock_bound(0.7, 0.5, 30.0) == doctest::Approx(0.011216).epsilon(1e-4));
  CHECK(*slow_clock_bound(0.9, 0.3, 30.0) == doctest::Approx(std::log(3.0) / 30.0));
  CHECK(*slow_clock_bound(0.5, 0.5, 30.0) == 0.0);
  CHECK_FALSE(slow_clock_bound(0.4, 0.5, 30.0).has_value());

  // at the bound the terminal price equals pbar, so the average sits above it
  MarketPrimitives const p  = MarketPrimitives{}.at(80, 80);
  double const           dm = *slow_clock_bound(0.7, 0.5, p.T);
  CHECK(*avg_price_DA(p, DutchExp{0.7, dm}, kU01) >= 0.5);
}

TEST_CASE("Dutch average price stays between terminal and start price")
{
  std::mt19937_64                        rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 500; ++i)
  {
    auto const      p  = MarketPrimitives{}.at(5 + 150 * U(rng), 5 + 150 * U(rng));
    double const    p0 = 0.2 + 0.8 * U(rng);
    Mechanism const m  = i % 2 == 0 ? Mechanism{DutchExp{p0, 0.1 * U(rng)}}
                                    : Mechanism{DutchLinear{p0, 0.03 * U(rng), 0.1 * U(rng)}};
    auto const pbar = avg_price_DA(p, m, kU01);
    if (!pbar)
    {
      continue;
    }
    CHECK(*pbar >= price_path(m, p.T) - 1e-10);
    CHECK(*pbar <= p0 + 1e-10);
  }
}

TEST_CASE("welfare decomposition and cases")
{
  MarketPrimitives const p = MarketPrimitives{}.at(80, 80);

  auto same = welfare_fixed(bundle(70, 5, 10), bundle(70, 5, 10), p, 0.02, 0.02, 0.5);
  CHECK(same.deltaW() == 0.0);
  CHECK(same.kase == WelfareCase::AllSurplus);

  // faster and more volume: every s
  auto a = welfare_fixed(bundle(72, 4, 9), bundle(70, 5, 10), p, 0.02, 0.03, 0.5);
  CHECK(a.kase == WelfareCase::AllSurplus);
  CHECK(a.deltaW() == doctest::Approx(a.volumeTerm + a.driverWaitTerm + a.riderWaitTerm).epsilon(1e-9));
  CHECK(a.deltaWait == doctest::Approx(0.02 * 80 * -1 + 0.03 * 80 * -1));

  // slower but more volume: floor
  auto b = welfare_fixed(bundle(72, 6, 10), bundle(70, 5, 10), p, 0.02, 0.02, 0.5);
  CHECK(b.kase == WelfareCase::SurplusFloor);
  CHECK(*b.threshold == doctest::Approx(0.02 * 80 / 2.0));

  // slower and no volume gain: never
  auto c = welfare_fixed(bundle(70, 6, 10), bundle(70, 5, 10), p, 0.02, 0.02, 5.0);
  CHECK(c.kase == WelfareCase::Never);
  CHECK_FALSE(c.dominates());

  // volume reversal: ceiling at the break-even surplus
  auto const da = bundle(69, 4, 8), fp = bundle(70, 5, 10);
  auto const d  = welfare_fixed(da, fp, p, 0.02, 0.02, 0.5);
  REQUIRE(d.kase == WelfareCase::SurplusCeiling);
  double const sStar = (0.02 * 80 * (5.0 - 4.0) + 0.02 * 80 * (10.0 - 8.0)) / (70.0 - 69.0);
  CHECK(*d.threshold == doctest::Approx(sStar));
  CHECK(welfare_fixed(da, fp, p, 0.02, 0.02, 0.99 * sStar).dominates());
  CHECK_FALSE(welfare_fixed(da, fp, p, 0.02, 0.02, 1.01 * sStar).dominates());
}

TEST_CASE("welfare verdict agrees with the raw comparison on computed bundles")
{
  std::mt19937_64                        rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i)
  {
    auto const p  = MarketPrimitives{}.at(5 + 150 * U(rng), 5 + 150 * U(rng));
    auto const da = reduced_form(p, DutchExp{0.4 + 0.6 * U(rng), 0.1 * U(rng)}, kU01);
    auto const fp = reduced_form(p, PostedImmediate{0.2 + 0.7 * U(rng), 3 * U(rng)}, kU01);
    double const lambda = 0.05 * U(rng), kappa = 0.05 * U(rng);
    auto const   ref    = welfare_fixed(da, fp, p, lambda, kappa, 1.0);
    for (double s : {0.0, 0.1, 0.5, 1.0, 3.0})
    {
      auto const w = welfare_fixed(da, fp, p, lambda, kappa, s);
      CHECK(w.deltaW() ==
            doctest::Approx(w.volumeTerm + w.driverWaitTerm + w.riderWaitTerm).epsilon(1e-9));
      bool predicted = false;
      switch (ref.kase)
      {
      case WelfareCase::AllSurplus:
        predicted = true;
        break;
      case WelfareCase::SurplusFloor:
        predicted = s >= *ref.threshold;
        break;
      case WelfareCase::SurplusCeiling:
        predicted = s <= *ref.threshold;
        break;
      case WelfareCase::Never:
        predicted = false;
        break;
      }
      if (std::abs(w.deltaW()) > 1e-9)
      {
        CHECK(predicted == w.dominates());
      }
    }
  }
}

TEST_CASE("Dutch beats batch clearing on welfare at fixed thickness")
{
  std::mt19937_64                        rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i)
  {
    auto const   p     = MarketPrimitives{}.at(5 + 150 * U(rng), 5 + 150 * U(rng));
    double const p0    = 0.3 + 0.7 * U(rng);
    double const delta = 0.001 + 0.1 * U(rng);
    double const pbar  = arm_posted_price(p0, delta, p.T);
    auto const   da    = reduced_form(p, DutchExp{p0, delta}, kU01);
    auto const   fb    = reduced_form(p, PostedBatch{pbar}, kU01);
    double const lambda = 0.001 + 0.05 * U(rng), kappa = 0.001 + 0.05 * U(rng);
    for (double s : {0.0, 0.5, 2.0})
    {
      CHECK(welfare_fixed(da, fb, p, lambda, kappa, s).deltaW() > 0.0);
    }
  }
}

TEST_CASE("equilibrium welfare")
{
  MarketPrimitives const base;
  EntryPrimitives const  e;
  Mechanism const        m  = DutchExp{0.7, 0.02};
  auto const             eq = solve_two_sided(base, m, e);
  auto const             rf = reduced_form(base.at(eq.Dstar, eq.Rstar), m, kU01);
  auto const             w  = welfare_equilibrium(eq, rf, eq, rf, 0.02, 0.02, 0.5);
  CHECK(w.deltaWait == 0.0);
  CHECK(w.deltaW() == 0.0);

  EquilibriumResult big = eq, small = eq;
  big.Dstar   = 20;
  big.Rstar   = 20;
  small.Dstar = 10;
  small.Rstar = 10;
  auto const v = welfare_equilibrium(big, bundle(19, 4, 8), small, bundle(9, 4, 8), 0.02, 0.02, 0.5);
  CHECK(v.deltaWait == doctest::Approx(0.02 * (20 * 4 - 10 * 4) + 0.02 * (20 * 8 - 10 * 8)));
  CHECK(v.kase == WelfareCase::SurplusFloor);
  CHECK(*v.threshold == doctest::Approx(v.deltaWait / 10.0));
  // zero volume gain with a positive waiting-cost change
  auto const c = welfare_equilibrium(big, bundle(9, 4, 8), small, bundle(9, 4, 8), 0.02, 0.02, 0.5);
  CHECK(c.kase == WelfareCase::Never);
}

TEST_CASE("revenue dominance whenever its hypotheses verify")
{
  std::mt19937_64                        rng(23);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  MarketPrimitives const                 base;
  int                                    verified = 0;
  for (int i = 0; i < 60; ++i)
  {
    EntryPrimitives e;
    e.costDist         = Distribution{Uniform{0.0, 0.3 + 1.7 * U(rng)}};
    e.lambda           = 0.1 * U(rng);
    double const    R  = 10 + 70 * U(rng);
    double const    p0 = 0.5 + 0.5 * U(rng);
    double const    pb = 0.3 + 0.5 * U(rng);
    Mechanism const da = DutchExp{p0, 0.08 * U(rng)};
    Mechanism const fp = PostedImmediate{pb, 3 * U(rng)};
    if (p0 < pb)
    {
      continue;
    }
    bool   hyp   = true;
    double prevM = -1.0;
    for (int k = 1; k <= 40 && hyp; ++k)
    {
      auto const p   = base.at(2.0 * k, R);
      auto const rDA = reduced_form(p, da, e.valueDist);
      auto const rFP = reduced_form(p, fp, e.valueDist);
      hyp = classify_driver(gaps(rDA, rFP)).dominates_at(e.lambda) && rDA.m >= prevM &&
            rFP.m >= 0.0;
      prevM = rDA.m;
    }
    if (!hyp)
    {
      continue;
    }
    auto const sDA = solve_one_sided(base, da, e, R);
    auto const sFP = solve_one_sided(base, fp, e, R);
    auto const rDA = reduced_form(base.at(sDA.Dstar, R), da, e.valueDist);
    auto const rFP = reduced_form(base.at(sFP.Dstar, R), fp, e.valueDist);
    if (!rDA.pbarM || !rFP.pbarM || *rDA.pbarM < pb)
    {
      continue;
    }
    ++verified;
    auto const r = revenue_report(base.alpha, sDA.Dstar, rDA, sFP.Dstar, rFP);
    CHECK(r.ratio >= 1.0 - 1e-9);
  }
  CHECK(verified >= 3);
}

TEST_CASE("revenue frontier under default entry primitives")
{
  MarketPrimitives const base;
  EntryPrimitives        e;
  e.kappa = 0.005;
  for (double pbar : {0.3, 0.5, 0.7})
  {
    auto const f = revenue_frontier(base, e, pbar, 0.02);
    REQUIRE(f.has_value());
    CHECK(*f >= 0.95);
    CHECK(*f <= 1.25);
  }
}
