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

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "dutchclock/errors.hpp"

namespace dutchclock {

struct QuadratureOptions
{
  double absTol       = 1e-10;
  double relTol       = 1e-9;
  int    maxIntervals = 2000;
};

struct QuadratureResult
{
  double value     = 0.0;
  double error     = 0.0;
  int    intervals = 0;
};

namespace detail {

struct Panel
{
  double a, b, value, error;
};

template <class F>
Panel kronrod_panel(F &f, double a, double b)
{
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  auto const &xk = gauss_kronrod<double, 15>::abscissa();
  auto const &wk = gauss_kronrod<double, 15>::weights();
  auto const &wg = gauss<double, 7>::weights();

  double const c  = 0.5 * (a + b);
  double const hw = 0.5 * (b - a);
  double const f0 = f(c);
  double       k = wk[0] * f0, g = wg[0] * f0, l1 = wk[0] * std::abs(f0);
  for (std::size_t i = 1; i < xk.size(); ++i)
  {
    double const lo = f(c - hw * xk[i]);
    double const hi = f(c + hw * xk[i]);
    k += wk[i] * (lo + hi);
    l1 += wk[i] * (std::abs(lo) + std::abs(hi));
    if (i % 2 == 0)
    {
      g += wg[i / 2] * (lo + hi);  // the Gauss nodes are every other Kronrod node
    }
  }
  double const err = std::max(std::abs(k - g), 50.0 * std::numeric_limits<double>::epsilon() * l1);
  return {a, b, k * hw, err * std::abs(hw)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) on [a,b] with optional interior
/// breakpoints. Splits the worst panel until the summed error estimate meets
/// max(absTol, relTol*|I|). Throws NumericalError with the achieved error
/// otherwise.
template <class F>
QuadratureResult integrate(F &&f, std::vector<double> points, QuadratureOptions const &opt = {})
{
  if (points.size() < 2)
  {
    throw InvalidInput("integrate needs at least two points");
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<detail::Panel> panels;
  panels.reserve(64);
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
  {
    panels.push_back(detail::kronrod_panel(f, points[i], points[i + 1]));
  }
  if (panels.empty())
  {
    return {};
  }

  auto totals = [&] {
    double v = 0.0, e = 0.0;
    for (auto const &p : panels)
    {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  while (error > std::max(opt.absTol, opt.relTol * std::abs(value)))
  {
    if (static_cast<int>(panels.size()) >= opt.maxIntervals)
    {
      throw NumericalError(fmt::format(
          "quadrature did not converge on [{}, {}]: error estimate {:.3e} after {} panels",
          points.front(), points.back(), error, panels.size()));
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](auto const &l, auto const &r) { return l.error < r.error; });
    double const a = worst->a, b = worst->b, mid = 0.5 * (a + b);
    if (!(mid > a && mid < b))
    {
      throw NumericalError(
          fmt::format("quadrature panel collapsed near {}: error estimate {:.3e}", a, error));
    }
    *worst = detail::kronrod_panel(f, a, mid);
    panels.push_back(detail::kronrod_panel(f, mid, b));
    std::tie(value, error) = totals();
  }
  return {value, error, static_cast<int>(panels.size())};
}

template <class F>
QuadratureResult integrate(F &&f, double a, double b, QuadratureOptions const &opt = {})
{
  if (a == b)
  {
    return {};
  }
  if (a > b)
  {
    auto r  = integrate(f, std::vector<double>{b, a}, opt);
    r.value = -r.value;
    return r;
  }
  return integrate(f, std::vector<double>{a, b}, opt);
}

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; safe to call from several threads.
GaussLegendreRule const &gauss_legendre(int n);

template <class F>
double integrate_fixed(F &&f, double a, double b, GaussLegendreRule const &rule)
{
  double const half = 0.5 * (b - a);
  double const mid  = 0.5 * (a + b);
  double       sum  = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
  {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

/// Gauss-Legendre with node doubling from n0 until successive estimates agree
/// to within tol.
template <class F>
QuadratureResult integrate_doubling(F &&f, double a, double b, int n0 = 256, double tol = 1e-8,
                                    int nMax = 4096)
{
  double prev = integrate_fixed(f, a, b, gauss_legendre(n0));
  for (int n = 2 * n0; n <= nMax; n *= 2)
  {
    double const next = integrate_fixed(f, a, b, gauss_legendre(n));
    if (std::abs(next - prev) <= tol)
    {
      return {next, std::abs(next - prev), n};
    }
    prev = next;
  }
  throw NumericalError(
      fmt::format("Gauss-Legendre doubling did not settle on [{}, {}] by {} nodes", a, b, nMax));
}

}  // namespace dutchclock
