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

#include "dutchclock/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

namespace dutchclock {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_mass(double x, double bound)
{
  return std::clamp(x, 1e-9 * bound, bound);
}

double l1(Point2 const &a, Point2 const &b)
{
  return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]);
}

// +1 / 0 / -1 pattern along the list must never go back up.
bool signs_ordered(std::vector<double> const &g)
{
  bool seenNegative = false;
  for (double x : g)
  {
    if (x < 0.0)
    {
      seenNegative = true;
    }
    else if (x > 0.0 && seenNegative)
    {
      return false;
    }
  }
  return true;
}

bool monotone(std::vector<double> const &xs, double tol)
{
  bool up = true, down = true;
  for (std::size_t i = 1; i < xs.size(); ++i)
  {
    up   = up && xs[i] >= xs[i - 1] - tol;
    down = down && xs[i] <= xs[i - 1] + tol;
  }
  return up || down;
}

}  // namespace

double driver_cutoff(ReducedFormBundle const &rf, double lambda)
{
  return rf.expected_earnings() - lambda * rf.tau;
}

double rider_cutoff(ReducedFormBundle const &rf, double kappa)
{
  if (!(rf.qR > 0.0) || !rf.pbarM)
  {
    return kInf;
  }
  return *rf.pbarM + kappa * rf.tauR / rf.qR;
}

EntryMapEvaluation entry_map(MarketPrimitives const &prim, Mechanism const &mech,
                             EntryPrimitives const &entry)
{
  EntryMapEvaluation e;
  e.bundle  = reduced_form(prim, mech, entry.valueDist);
  e.cutoffD = driver_cutoff(e.bundle, entry.lambda);
  e.cutoffR = rider_cutoff(e.bundle, entry.kappa);
  e.phiD    = entry.Dbar * entry.costDist.cdf(e.cutoffD);
  e.phiR    = entry.Rbar * entry.valueDist.survival(e.cutoffR);
  return e;
}

EntryMap make_entry_map(MarketPrimitives const &base, Mechanism const &mech,
                        EntryPrimitives const &entry)
{
  validate(entry);
  return [base, mech, entry](double D, double R) {
    auto const e = entry_map(base.at(clamp_mass(D, entry.Dbar), clamp_mass(R, entry.Rbar)), mech,
                             entry);
    return Point2{e.phiD, e.phiR};
  };
}

DriverMap make_driver_map(MarketPrimitives const &base, Mechanism const &mech,
                          EntryPrimitives const &entry, double R)
{
  validate(entry);
  if (!(R > 0.0))
  {
    throw InvalidInput(fmt::format("rider mass must be > 0, got {}", R));
  }
  return [base, mech, entry, R](double D) {
    auto const   prim = base.at(clamp_mass(D, entry.Dbar), R);
    auto const   drv  = driver_objects(prim, mech, entry.valueDist);
    double const earn = drv.pi ? drv.q * *drv.pi : 0.0;
    return entry.Dbar * entry.costDist.cdf(earn - entry.lambda * drv.tau);
  };
}

EquilibriumResult solve_one_sided(DriverMap const &phi, double Dbar, OneSidedOptions const &opt)
{
  if (!(Dbar > 0.0) || opt.signGrid < 2)
  {
    throw InvalidInput("solve_one_sided needs Dbar > 0 and a sign grid of at least 2 points");
  }
  double const eps = 1e-9 * Dbar;
  auto         g   = [&](double D) { return phi(D) - D; };

  std::vector<double> pattern;
  pattern.reserve(opt.signGrid);
  for (int i = 0; i < opt.signGrid; ++i)
  {
    double const D = eps + (Dbar - eps) * i / (opt.signGrid - 1);
    pattern.push_back(g(D));
  }
  if (!signs_ordered(pattern))
  {
    throw NumericalError(fmt::format(
        "entry map is not decreasing in own mass: g changes sign more than once on {} points",
        opt.signGrid));
  }

  EquilibriumResult out;
  double            lo = eps, hi = Dbar;
  if (pattern.front() <= 0.0)
  {
    hi = lo;  // nobody enters
  }
  else if (pattern.back() >= 0.0)
  {
    lo = hi;
  }
  while (hi - lo > opt.relWidth * Dbar)
  {
    double const mid = 0.5 * (lo + hi);
    double const gm  = g(mid);
    ++out.iterations;
    if (gm > 0.0)
    {
      lo = mid;
    }
    else if (gm < 0.0)
    {
      hi = mid;
    }
    else
    {
      lo = hi = mid;
    }
  }
  out.Dstar    = 0.5 * (lo + hi);
  out.residual = std::abs(g(out.Dstar));
  return out;
}

EquilibriumResult solve_one_sided(MarketPrimitives const &base, Mechanism const &mech,
                                  EntryPrimitives const &entry, double R,
                                  OneSidedOptions const &opt)
{
  auto r  = solve_one_sided(make_driver_map(base, mech, entry, R), entry.Dbar, opt);
  r.Rstar = R;
  return r;
}

EquilibriumResult solve_two_sided(EntryMap const &phi, double Dbar, double Rbar,
                                  TwoSidedOptions const &opt)
{
  if (!(opt.omega > 0.0 && opt.omega <= 1.0))
  {
    throw InvalidInput(fmt::format("damping must lie in (0,1], got {}", opt.omega));
  }
  double const tol = opt.relTol * (Dbar + Rbar);
  Point2       x{0.5 * Dbar, 0.5 * Rbar};

  std::vector<double> history;
  for (int n = 0; n < opt.maxIterations; ++n)
  {
    Point2 const y   = phi(x[0], x[1]);
    double const res = l1(x, y);
    history.push_back(res);
    if (res <= tol)
    {
      EquilibriumResult out;
      out.Dstar      = x[0];
      out.Rstar      = x[1];
      out.iterations = n;
      out.residual   = res;
      out.omega      = opt.omega;
      if (opt.contractionGrid > 0)
      {
        out.contractionK = contraction_check(phi, Dbar, Rbar, opt.contractionGrid);
      }
      return out;
    }
    x = {clamp_mass((1.0 - opt.omega) * x[0] + opt.omega * y[0], Dbar),
         clamp_mass((1.0 - opt.omega) * x[1] + opt.omega * y[1], Rbar)};
  }
  auto const what = fmt::format("two-sided iteration stopped after {} steps at ({}, {}), "
                                "residual {:.3e}",
                                opt.maxIterations, x[0], x[1], history.back());
  throw ConvergenceError(what, x, std::move(history));
}

EquilibriumResult solve_two_sided(MarketPrimitives const &base, Mechanism const &mech,
                                  EntryPrimitives const &entry, TwoSidedOptions const &opt)
{
  return solve_two_sided(make_entry_map(base, mech, entry), entry.Dbar, entry.Rbar, opt);
}

namespace {

// The entry map depends on (D, R) only through theta = R / D, so interior
// fixed points are roots of phiR(1, theta) - theta phiD(1, theta) at which
// both sides enter. Brackets sign changes over theta in 1e-4..1e4 and keeps
// the root with the most participants.
std::optional<EquilibriumResult> solve_on_ratio(EntryMap const &phi, double Dbar, double Rbar)
{
  int const n      = 800;
  auto      theta  = [](int k) { return std::pow(10.0, -4.0 + 8.0 * k / n); };
  auto      h      = [&](double t) {
    Point2 const y = phi(1.0, t);
    return y[1] - t * y[0];
  };
  std::optional<EquilibriumResult> best;
  double                           prevT = theta(0), prevH = h(prevT);
  for (int k = 1; k <= n; ++k)
  {
    double const t = theta(k), ht = h(t);
    if ((prevH < 0.0) != (ht < 0.0))
    {
      std::uintmax_t iters  = 100;
      auto const     tol    = boost::math::tools::eps_tolerance<double>(50);
      auto const [a, b]     = boost::math::tools::toms748_solve(h, prevT, t, prevH, ht, tol, iters);
      Point2 const x        = phi(1.0, 0.5 * (a + b));
      Point2 const y        = phi(x[0], x[1]);
      double const residual = std::abs(y[0] - x[0]) + std::abs(y[1] - x[1]);
      bool const   enters   = x[0] > 1e-6 * Dbar && x[1] > 1e-6 * Rbar;
      if (enters && residual <= 1e-6 * (Dbar + Rbar) &&
          (!best || x[0] + x[1] > best->Dstar + best->Rstar))
      {
        best.emplace();
        best->Dstar      = x[0];
        best->Rstar      = x[1];
        best->residual   = residual;
        best->iterations = static_cast<int>(iters);
      }
    }
    prevT = t;
    prevH = ht;
  }
  return best;
}

}  // namespace

EquilibriumResult solve_two_sided_robust(MarketPrimitives const &base, Mechanism const &mech,
                                         EntryPrimitives const &entry)
{
  auto const phi = make_entry_map(base, mech, entry);
  for (double omega : {0.5, 0.2, 0.05})
  {
    TwoSidedOptions opt;
    opt.omega         = omega;
    opt.maxIterations = 20000;
    try
    {
      return solve_two_sided(phi, entry.Dbar, entry.Rbar, opt);
    }
    catch (ConvergenceError const &)
    {
    }
  }
  if (auto r = solve_on_ratio(phi, entry.Dbar, entry.Rbar))
  {
    return *r;
  }
  EquilibriumResult out;
  out.collapsed = true;
  return out;
}

double contraction_check(EntryMap const &phi, double Dbar, double Rbar, int gridN)
{
  if (gridN < 2)
  {
    throw InvalidInput("contraction_check needs gridN >= 2");
  }
  double sup = 0.0;
  for (int i = 0; i < gridN; ++i)
  {
    for (int j = 0; j < gridN; ++j)
    {
      Point2 const x{(i + 0.5) / gridN * Dbar, (j + 0.5) / gridN * Rbar};
      for (int c = 0; c < 2; ++c)
      {
        double const h  = 1e-5 * x[c];
        Point2       up = x, dn = x;
        up[c] += h;
        dn[c] -= h;
        Point2 const fu  = phi(up[0], up[1]);
        Point2 const fd  = phi(dn[0], dn[1]);
        double const col = (std::abs(fu[0] - fd[0]) + std::abs(fu[1] - fd[1])) / (2.0 * h);
        sup              = std::max(sup, col);
      }
    }
  }
  return sup;
}

MonotoneIterationResult monotone_iteration(EntryMap const &phi, Point2 start, double Dbar,
                                           double Rbar, MonotoneIterationOptions const &opt)
{
  MonotoneIterationResult out;
  double const            tol = opt.relTol * (Dbar + Rbar);
  Point2                  x   = start;
  out.path.push_back(x);
  for (int n = 0; n < opt.maxIterations; ++n)
  {
    Point2 const y    = phi(x[0], x[1]);
    Point2 const next = {clamp_mass((1.0 - opt.omega) * x[0] + opt.omega * y[0], Dbar),
                         clamp_mass((1.0 - opt.omega) * x[1] + opt.omega * y[1], Rbar)};
    out.path.push_back(next);
    if (l1(x, next) <= tol)
    {
      out.converged = true;
      x             = next;
      break;
    }
    x = next;
  }
  out.limit = x;

  if (out.path.size() >= 2)
  {
    out.firstStepUp = out.path[1][0] >= out.path[0][0] - tol && out.path[1][1] >= out.path[0][1] - tol;
  }
  bool ok = true;
  for (int parity = 0; parity < 2; ++parity)
  {
    for (int c = 0; c < 2; ++c)
    {
      std::vector<double> sub;
      for (std::size_t k = parity; k < out.path.size(); k += 2)
      {
        sub.push_back(out.path[k][c]);
      }
      ok = ok && monotone(sub, tol);
    }
  }
  out.subsequencesMonotone = ok;
  if (!out.converged)
  {
    out.diagnostic = fmt::format("no convergence after {} steps", opt.maxIterations);
  }
  else if (!ok)
  {
    out.diagnostic = "even/odd subsequences are not coordinatewise monotone";
  }
  return out;
}

PropagationReport propagation_check(MarketPrimitives const &base, Mechanism const &da,
                                    Mechanism const &fp, EntryPrimitives const &entry,
                                    std::vector<double> const &Rgrid)
{
  PropagationReport rep;
  for (double R : Rgrid)
  {
    PropagationRow row{};
    row.R       = R;
    row.DstarDA = solve_one_sided(base, da, entry, R).Dstar;
    row.DstarFP = solve_one_sided(base, fp, entry, R).Dstar;
    row.vbarDA  = rider_cutoff(reduced_form(base.at(row.DstarDA, R), da, entry.valueDist),
                               entry.kappa);
    row.vbarFP  = rider_cutoff(reduced_form(base.at(row.DstarFP, R), fp, entry.valueDist),
                               entry.kappa);
    rep.holds   = rep.holds && row.vbarDA <= row.vbarFP + 1e-12;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dutchclock
