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

#include "dutchclock/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "dutchclock/estimators.hpp"
#include "dutchclock/outcomes.hpp"

namespace dutchclock {
namespace {

Distribution const kU01{Uniform{0.0, 1.0}};

class Suite
{
public:
  Suite(std::string name, double tol)
  {
    r_.name = std::move(name);
    r_.tol  = tol;
  }

  void check(bool ok, std::string const &what)
  {
    ++r_.checks;
    if (!ok)
    {
      if (r_.failures++ == 0)
      {
        r_.firstFailure = what;
      }
    }
  }

  void near(double err, std::string const &what)
  {
    r_.worst = std::max(r_.worst, err);
    check(err <= r_.tol, fmt::format("{} (error {:.3g})", what, err));
  }

  SuiteResult result() && { return std::move(r_); }

private:
  SuiteResult r_;
};

struct Draw
{
  std::mt19937_64 rng;
  double          operator()(double lo, double hi) { return lo + (hi - lo) * uniform_open01(rng); }
};

MarketPrimitives at_theta(double theta)
{
  MarketPrimitives p;
  p.R = theta;
  return p;
}

// Batch benchmark at the acceptance-rate-matched price. rho stays below 0.9:
// with rho near 1 and a slow clock early acceptance is near zero, trades bunch
// late at low prices and the Dutch payment drops below the batch price.
SuiteResult arm_batch(VerifyOptions const &opt)
{
  Suite s("arm-batch", opt.tol.value_or(1e-8));
  Draw  u{std::mt19937_64(opt.seed)};
  for (int i = 0; i < opt.points; ++i)
  {
    double const theta = u(0.3, 3.0), rho = u(0.4, 0.9), delta = u(1e-3, 0.1);
    auto const   prim  = at_theta(theta);
    auto const   da    = reduced_form(prim, DutchExp{rho, delta}, kU01);
    auto const   fpb   = reduced_form(prim, PostedBatch{arm_posted_price(rho, delta, prim.T)}, kU01);
    auto const   where = fmt::format("theta={:.4g} rho={:.4g} delta={:.4g}", theta, rho, delta);

    s.near(std::abs(da.q - fpb.q), "match probabilities differ at " + where);
    double const gap = *da.pi - *fpb.pi;
    s.check(opt.injectPaymentSignFlip ? -gap > 0.0 : gap > 0.0, "payment inequality fails at " + where);
    s.check(da.tau < prim.T, "Dutch contracts no earlier than the horizon at " + where);
    double const lambda = u(1e-4, 0.2), kappa = u(1e-4, 0.2), surplus = u(1e-3, 2.0);
    s.check(batch_margin(lambda, da, fpb) > 0.0, "driver margin not positive at " + where);
    s.check(welfare_fixed(da, fpb, prim, lambda, kappa, surplus).deltaW() > 0.0,
            "batch welfare not below Dutch at " + where);
  }
  return std::move(s).result();
}

// Closed-form verdicts against the raw earnings-minus-waiting comparison.
SuiteResult verdicts(VerifyOptions const &opt)
{
  Suite s("dominance-verdicts", 0.0);
  Draw  u{std::mt19937_64(opt.seed + 1)};
  int const n = std::max(1, opt.points / 4);
  for (int i = 0; i < n; ++i)
  {
    auto const prim = at_theta(u(0.3, 3.0));
    auto const da   = reduced_form(prim, DutchExp{u(0.4, 1.0), u(0.0, 0.1)}, kU01);
    auto const fp   = reduced_form(prim, PostedImmediate{u(0.3, 0.8), u(0.0, 3.0)}, kU01);
    auto const g    = gaps(da, fp);
    auto const v    = classify_driver(g);
    for (double lambda : {0.0, 0.01, 0.03, 0.07, 0.15, 0.4})
    {
      double const margin = lambda * g.deltaTau - g.deltaPi;
      if (std::abs(margin) < 1e-9)
      {
        continue;
      }
      s.check(v.dominates_at(lambda) == (margin > 0.0),
              fmt::format("verdict {} disagrees at lambda={}", to_string(v.kase), lambda));
    }
  }
  return std::move(s).result();
}

SuiteResult price_bounds(VerifyOptions const &opt)
{
  Suite s("price-bounds", 0.0);
  Draw  u{std::mt19937_64(opt.seed + 2)};
  int const n = std::max(1, opt.points / 4);
  for (int i = 0; i < n; ++i)
  {
    auto const      prim = at_theta(u(0.3, 3.0));
    double const    p0   = u(0.3, 1.0);
    Mechanism const m    = i % 2 ? Mechanism{DutchExp{p0, u(0.0, 0.1)}}
                                 : Mechanism{DutchLinear{p0, u(0.0, 0.03), u(0.0, 0.5 * p0)}};
    auto const avg = avg_price_DA(prim, m, kU01);
    if (!avg)
    {
      continue;
    }
    double const lo = price_path(m, prim.T);
    s.check(*avg >= lo - 1e-12 && *avg <= p0 + 1e-12,
            fmt::format("average price {} outside [{}, {}] for {}", *avg, lo, p0, describe(m)));
  }
  return std::move(s).result();
}

SuiteResult revenue_identity(VerifyOptions const &opt)
{
  Suite s("revenue-decomposition", opt.tol.value_or(1e-12));
  Draw  u{std::mt19937_64(opt.seed + 3)};
  int const n = std::max(1, opt.points / 4);
  for (int i = 0; i < n; ++i)
  {
    auto const prim = at_theta(u(0.3, 3.0));
    auto const da   = reduced_form(prim, DutchExp{u(0.4, 1.0), u(0.0, 0.1)}, kU01);
    auto const fp   = reduced_form(prim, PostedImmediate{u(0.3, 0.8), 0.0}, kU01);
    auto const r    = revenue_report(prim.alpha, u(1.0, 100.0), da, u(1.0, 100.0), fp);
    s.near(std::abs(r.ratio - r.entryGain * r.matchRateRatio * r.priceGain) / r.ratio,
           "revenue ratio differs from its factors");
  }
  return std::move(s).result();
}

SuiteResult simulator_records(VerifyOptions const &opt)
{
  Suite     s("simulator-records", 0.0);
  SimConfig cfg;
  cfg.sessionsPerCell = std::max(1, opt.points / 20);
  cfg.baseSeed        = opt.seed;
  std::vector<Mechanism> const mechs{DutchLinear{20.0, 1.5, 2.0}, PostedImmediate{10.0, 2.0},
                                     PostedBatch{10.0}};
  auto const cells = run_grid(cfg, {{20, 20}, {20, 40}, {40, 20}, {40, 40}}, mechs);
  for (auto const &c : cells)
  {
    for (std::size_t j = 0; j < c.sessions[0].size(); ++j)
    {
      for (auto const &m : c.sessions)
      {
        auto const why = check_record(m[j], cfg.alpha, cfg.horizon);
        s.check(why.empty(), why);
        s.check(m[j].drawHash == c.sessions[0][j].drawHash, "draws differ across mechanisms");
      }
    }
  }
  return std::move(s).result();
}

SuiteResult estimator_roundtrip(VerifyOptions const &opt)
{
  Suite     s("estimator-roundtrip", 0.0);
  SimConfig cfg;
  cfg.sessionsPerCell = std::max(2, opt.points / 50);
  cfg.baseSeed        = opt.seed;
  auto const cells    = run_grid(cfg, {{20, 40}}, {DutchLinear{9.0, 1.0, 5.0}, PostedImmediate{10.0, 2.0}});
  std::vector<SessionRecord> recs;
  for (auto const &m : cells[0].sessions)
  {
    recs.insert(recs.end(), m.begin(), m.end());
  }
  std::stringstream ss;
  write_session_log(ss, recs);
  auto const back = read_session_log(ss);
  for (auto const *mech : {"DA", "FPi"})
  {
    BootstrapOptions const bo{50, opt.seed};
    auto const a = estimate_bundle(select(recs, mech, {20, 40, 0.0}), bo);
    auto const b = estimate_bundle(select(back, mech, {20, 40, 0.0}), bo);
    s.check(std::memcmp(&a.est, &b.est, sizeof a.est) == 0, "point estimates change on reload");
    s.check(std::memcmp(&a.se, &b.se, sizeof a.se) == 0, "standard errors change on reload");
  }
  return std::move(s).result();
}

}  // namespace

bool VerifyReport::ok() const
{
  return std::all_of(suites.begin(), suites.end(), [](auto const &s) { return s.ok(); });
}

VerifyReport run_verify(VerifyOptions const &opt)
{
  if (opt.points < 1 || (opt.tol && !(*opt.tol > 0.0)))
  {
    throw InvalidInput("verify needs points >= 1 and tol > 0");
  }
  VerifyReport r;
  r.suites.push_back(arm_batch(opt));
  r.suites.push_back(verdicts(opt));
  r.suites.push_back(price_bounds(opt));
  r.suites.push_back(revenue_identity(opt));
  r.suites.push_back(simulator_records(opt));
  r.suites.push_back(estimator_roundtrip(opt));
  return r;
}

void write_report(std::ostream &os, VerifyReport const &r)
{
  for (auto const &s : r.suites)
  {
    os << fmt::format("{:<22} {:<4} {:>6} checks", s.name, s.ok() ? "PASS" : "FAIL", s.checks);
    if (s.tol > 0.0)
    {
      os << fmt::format("  tol {:.1e} worst {:.2e} slack {:.2e}", s.tol, s.worst, s.slack());
    }
    if (!s.ok())
    {
      os << fmt::format("  {} failed; first: {}", s.failures, s.firstFailure);
    }
    os << '\n';
  }
  os << (r.ok() ? "verify: all suites passed\n" : "verify: FAILED\n");
}

}  // namespace dutchclock
