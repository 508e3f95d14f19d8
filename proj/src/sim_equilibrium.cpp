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

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dutchclock/estimators.hpp"
#include "dutchclock/simulator.hpp"

namespace dutchclock {
namespace {

struct MapValue
{
  double phiD = 0.0, phiR = 0.0;
};

MapValue entry_from(PointEstimates const &e, EntryPrimitives const &entry)
{
  double const cbar = (std::isfinite(e.pi) ? e.earnings() : 0.0) - entry.lambda * e.tau;
  double       vbar = std::numeric_limits<double>::infinity();
  if (e.qR > 0.0 && std::isfinite(e.pbar))
  {
    vbar = e.pbar + entry.kappa * e.tauR / e.qR;
  }
  return {entry.Dbar * entry.costDist.cdf(cbar), entry.Rbar * entry.valueDist.survival(vbar)};
}

}  // namespace

SimEquilibriumResult simulate_equilibrium(SimConfig const &base, Mechanism const &mech,
                                          EntryPrimitives const &entry,
                                          SimEquilibriumOptions const &opt)
{
  validate(entry);
  if (!(opt.omega > 0.0 && opt.omega <= 1.0) || opt.maxOuter < 1 || opt.sessions < 1)
  {
    throw InvalidInput("simulate_equilibrium: omega in (0,1], maxOuter >= 1, sessions >= 1");
  }
  SimEquilibriumResult out;
  std::array<double, 2> x{0.5 * entry.Dbar, 0.5 * entry.Rbar};
  out.trajectory.push_back(x);

  for (int k = 0; k < opt.maxOuter; ++k)
  {
    SimConfig cfg = base;
    cfg.D         = std::max(1, static_cast<int>(std::lround(x[0])));
    cfg.R         = std::max(1, static_cast<int>(std::lround(x[1])));
    if (opt.scaleMeeting && cfg.meeting == MeetingProcess::PerDriver)
    {
      cfg.mu = opt.A * std::pow(static_cast<double>(cfg.R) / cfg.D, opt.beta);
    }
    // fresh draws per outer iterate
    std::uint64_t const iterSeed = splitmix64(base.baseSeed + static_cast<std::uint64_t>(k));
    std::vector<SessionRecord> recs(opt.sessions);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < opt.sessions; ++s)
    {
      recs[s] = run_session(cfg, session_seed(iterSeed, cfg.D, cfg.R, s), mech);
    }
    auto const b = estimate_bundle(pointers(recs), {opt.bootstrap, iterSeed});

    MapValue const phi = entry_from(b.est, entry);
    out.seD = b.se_of([&](PointEstimates const &r) { return entry_from(r, entry).phiD; });
    out.seR = b.se_of([&](PointEstimates const &r) { return entry_from(r, entry).phiR; });

    std::array<double, 2> const next{(1.0 - opt.omega) * x[0] + opt.omega * phi.phiD,
                                     (1.0 - opt.omega) * x[1] + opt.omega * phi.phiR};
    out.trajectory.push_back(next);
    out.iterations = k + 1;
    bool const small = std::abs(next[0] - x[0]) < opt.stepTolerance &&
                       std::abs(next[1] - x[1]) < opt.stepTolerance;
    x = next;
    if (small)
    {
      out.converged = true;
      break;
    }
  }
  out.Dstar = x[0];
  out.Rstar = x[1];
  std::size_t const from = out.trajectory.size() / 2;
  for (std::size_t k = from; k < out.trajectory.size(); ++k)
  {
    out.tailD += out.trajectory[k][0];
    out.tailR += out.trajectory[k][1];
  }
  out.tailD /= static_cast<double>(out.trajectory.size() - from);
  out.tailR /= static_cast<double>(out.trajectory.size() - from);
  if (!out.converged)
  {
    auto const &a = out.trajectory[out.trajectory.size() - 2];
    out.diagnostic = fmt::format("no convergence after {} outer iterations; last step ({:.3f}, {:.3f})",
                                 opt.maxOuter, x[0] - a[0], x[1] - a[1]);
  }
  return out;
}

}  // namespace dutchclock
