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

#include "dutchclock/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>
#include <fmt/format.h>

#include "dutchclock/errors.hpp"

namespace dutchclock {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double std_normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Distribution::Distribution(Uniform u)
  : v_{u}
{
  if (!(u.lo < u.hi) || !std::isfinite(u.lo) || !std::isfinite(u.hi))
  {
    throw InvalidInput(fmt::format("uniform requires finite lo < hi, got [{}, {}]", u.lo, u.hi));
  }
}

Distribution::Distribution(Lognormal l)
  : v_{l}
{
  if (!(l.sigma > 0.0) || !std::isfinite(l.mu) || !std::isfinite(l.sigma))
  {
    throw InvalidInput(fmt::format("lognormal requires sigma > 0, got {}", l.sigma));
  }
}

Distribution::Distribution(PointMass p)
  : v_{p}
{
  if (!std::isfinite(p.x))
  {
    throw InvalidInput("point mass location must be finite");
  }
}

double Distribution::cdf(double x) const
{
  return std::visit(overloaded{[x](Uniform const &u) {
                                 if (x <= u.lo)
                                 {
                                   return 0.0;
                                 }
                                 if (x >= u.hi)
                                 {
                                   return 1.0;
                                 }
                                 return (x - u.lo) / (u.hi - u.lo);
                               },
                               [x](Lognormal const &l) {
                                 if (x <= 0.0)
                                 {
                                   return 0.0;
                                 }
                                 return 0.5 * std::erfc(-(std::log(x) - l.mu) /
                                                        (l.sigma * std::sqrt(2.0)));
                               },
                               [x](PointMass const &p) { return x >= p.x ? 1.0 : 0.0; }},
                    v_);
}

double Distribution::survival(double x) const
{
  return std::visit(overloaded{[x](Uniform const &u) {
                                 if (x <= u.lo)
                                 {
                                   return 1.0;
                                 }
                                 if (x >= u.hi)
                                 {
                                   return 0.0;
                                 }
                                 return (u.hi - x) / (u.hi - u.lo);
                               },
                               [x](Lognormal const &l) {
                                 if (x <= 0.0)
                                 {
                                   return 1.0;
                                 }
                                 return 0.5 * std::erfc((std::log(x) - l.mu) /
                                                        (l.sigma * std::sqrt(2.0)));
                               },
                               [x](PointMass const &p) { return x >= p.x ? 0.0 : 1.0; }},
                    v_);
}

double Distribution::density(double x) const
{
  return std::visit(overloaded{[x](Uniform const &u) {
                                 return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo);
                               },
                               [x](Lognormal const &l) {
                                 if (x <= 0.0)
                                 {
                                   return 0.0;
                                 }
                                 double const z = (std::log(x) - l.mu) / l.sigma;
                                 return std::exp(-0.5 * z * z) /
                                        (x * l.sigma * std::sqrt(2.0 * M_PI));
                               },
                               [](PointMass const &) { return 0.0; }},
                    v_);
}

double Distribution::quantile(double u) const
{
  if (!(u >= 0.0 && u <= 1.0))
  {
    throw InvalidInput(fmt::format("quantile level must lie in [0,1], got {}", u));
  }
  return std::visit(overloaded{[u](Uniform const &d) { return d.lo + u * (d.hi - d.lo); },
                               [u](Lognormal const &l) {
                                 if (u == 0.0)
                                 {
                                   return 0.0;
                                 }
                                 if (u == 1.0)
                                 {
                                   return kInf;
                                 }
                                 double const z =
                                     -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
                                 return std::exp(l.mu + l.sigma * z);
                               },
                               [](PointMass const &p) { return p.x; }},
                    v_);
}

double Distribution::mean() const
{
  return std::visit(overloaded{[](Uniform const &u) { return 0.5 * (u.lo + u.hi); },
                               [](Lognormal const &l) {
                                 return std::exp(l.mu + 0.5 * l.sigma * l.sigma);
                               },
                               [](PointMass const &p) { return p.x; }},
                    v_);
}

double Distribution::truncated_mean(double a, double b) const
{
  if (!(a <= b))
  {
    throw InvalidInput("truncated_mean requires a <= b");
  }
  return std::visit(
      overloaded{[&](Uniform const &u) {
                   double const lo = std::max(a, u.lo);
                   double const hi = std::min(b, u.hi);
                   if (!(lo < hi))
                   {
                     throw InvalidInput("truncation interval outside the uniform support");
                   }
                   return 0.5 * (lo + hi);
                 },
                 [&](Lognormal const &l) {
                   double const mass = cdf(b) - cdf(a);
                   if (!(mass > 0.0))
                   {
                     throw InvalidInput("truncation interval carries no lognormal mass");
                   }
                   double const s2 = l.sigma * l.sigma;
                   auto         z  = [&](double x) {
                     if (x <= 0.0)
                     {
                       return -kInf;
                     }
                     if (x == kInf)
                     {
                       return kInf;
                     }
                     return (std::log(x) - l.mu - s2) / l.sigma;
                   };
                   double const partial =
                       std::exp(l.mu + 0.5 * s2) * (std_normal_cdf(z(b)) - std_normal_cdf(z(a)));
                   return partial / mass;
                 },
                 [&](PointMass const &p) {
                   if (p.x < a || p.x > b)
                   {
                     throw InvalidInput("truncation interval excludes the point mass");
                   }
                   return p.x;
                 }},
      v_);
}

std::pair<double, double> Distribution::support() const
{
  return std::visit(overloaded{[](Uniform const &u) { return std::pair{u.lo, u.hi}; },
                               [](Lognormal const &) { return std::pair{0.0, kInf}; },
                               [](PointMass const &p) { return std::pair{p.x, p.x}; }},
                    v_);
}

double Distribution::sample(std::mt19937_64 &rng) const
{
  return quantile(uniform_open01(rng));
}

bool Distribution::has_density() const
{
  return !std::holds_alternative<PointMass>(v_);
}

std::string Distribution::describe() const
{
  return std::visit(
      overloaded{[](Uniform const &u) { return fmt::format("uniform({}, {})", u.lo, u.hi); },
                 [](Lognormal const &l) { return fmt::format("lognormal({}, {})", l.mu, l.sigma); },
                 [](PointMass const &p) { return fmt::format("point({})", p.x); }},
      v_);
}

double uniform_open01(std::mt19937_64 &rng)
{
  // midpoint of one of 2^53 equal cells, never exactly 0 or 1
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace dutchclock
