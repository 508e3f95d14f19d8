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
#include "dutchclock/microfoundation.hpp"
#include "dutchclock/quadrature.hpp"
#include "dutchclock/types.hpp"

using namespace dutchclock;

namespace {

std::vector<Distribution> sample_distributions()
{
  return {Distribution{Uniform{0.0, 1.0}}, Distribution{Uniform{2.0, 5.0}},
          Distribution{Lognormal{2.3, 0.3}}, Distribution{Lognormal{0.0, 1.2}},
          Distribution{PointMass{0.4}}};
}

}  // namespace

TEST_CASE("price path examples")
{
  CHECK(price_path(DutchExp{0.7, 0.02}, 0.0) == doctest::Approx(0.7));
  CHECK(price_path(DutchExp{0.7, 0.02}, 30.0) == doctest::Approx(0.38418).epsilon(1e-5));
  CHECK(price_path(PostedImmediate{0.5, 0.0}, 12.3) == 0.5);
  CHECK(price_path(DutchLinear{12.0, 0.4, 8.0}, 20.0) == 8.0);
  CHECK_THROWS_AS(price_path(DutchExp{0.7, 0.02}, -1.0), InvalidInput);
}

TEST_CASE("price path is non-increasing")
{
  std::mt19937_64                        rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 500; ++i)
  {
    Mechanism const mechs[] = {DutchExp{0.1 + U(rng), 0.1 * U(rng)},
                               DutchLinear{1.0 + U(rng), 0.2 * U(rng), 0.5 * U(rng)},
                               PostedImmediate{0.5, 1.0}, PostedBatch{0.4}};
    double t1 = 30.0 * U(rng), t2 = 30.0 * U(rng);
    if (t1 > t2)
    {
      std::swap(t1, t2);
    }
    for (auto const &m : mechs)
    {
      CHECK(price_path(m, t1) >= price_path(m, t2));
    }
  }
}

TEST_CASE("contact rates")
{
  MarketPrimitives p;
  auto             r = contact_rates(p);
  CHECK(r.muD == doctest::Approx(0.5));
  CHECK(r.muR == doctest::Approx(0.5));
  r = contact_rates(p.at(1.0, 4.0));
  CHECK(r.muD == doctest::Approx(1.0));
  CHECK(r.muR == doctest::Approx(0.25));
  r = contact_rates(p.at(1.0, 2.0));
  CHECK(r.muD == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(r.muR == doctest::Approx(0.35355).epsilon(1e-5));
}

TEST_CASE("contact rate product identity over random primitives")
{
  std::mt19937_64                        rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i)
  {
    MarketPrimitives p{0.05 + 2 * U(rng), 0.05 + 0.9 * U(rng), 30, 0.2, 1 + 200 * U(rng),
                       1 + 200 * U(rng)};
    auto const r = contact_rates(p);
    CHECK(r.muD * p.D == doctest::Approx(r.muR * p.R).epsilon(1e-14));
  }
}

TEST_CASE("distribution identities")
{
  for (auto const &d : sample_distributions())
  {
    auto [lo, hi] = d.support();
    if (!std::isfinite(hi))
    {
      hi = d.quantile(0.999999);
    }
    for (int i = 0; i < 100; ++i)
    {
      double const x = lo + (hi - lo) * (i + 0.5) / 100.0;
      CHECK(std::abs(d.cdf(x) + d.survival(x) - 1.0) <= 1e-12);
      if (d.has_density() && d.cdf(x) > 1e-9 && d.cdf(x) < 1 - 1e-9)
      {
        CHECK(d.quantile(d.cdf(x)) == doctest::Approx(x).epsilon(1e-9));
      }
    }
    if (d.has_density())
    {
      auto const [a, b] = d.support();
      double const top  = std::isfinite(b) ? b : d.quantile(1.0 - 1e-15);
      double const mass =
          integrate([&](double x) { return d.density(x); }, std::max(a, 1e-300), top).value;
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("cdf is non-decreasing and bounded")
{
  for (auto const &d : sample_distributions())
  {
    double prev = 0.0;
    for (int i = -50; i < 500; ++i)
    {
      double const c = d.cdf(0.05 * i);
      CHECK(c >= prev);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      prev = c;
    }
  }
}

TEST_CASE("sample mean converges to the analytic mean")
{
  std::mt19937_64 rng(3);
  for (auto const &d : sample_distributions())
  {
    double    sum = 0.0, sq = 0.0;
    int const n   = 200000;
    for (int i = 0; i < n; ++i)
    {
      double const x = d.sample(rng);
      sum += x;
      sq += x * x;
    }
    double const mean = sum / n;
    double const se   = std::sqrt(std::max(sq / n - mean * mean, 0.0) / n);
    CHECK(std::abs(mean - d.mean()) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("truncated means")
{
  Distribution u{Uniform{0.0, 1.0}};
  CHECK(u.truncated_mean(0.2, 0.6) == doctest::Approx(0.4));
  Distribution l{Lognormal{0.0, 0.5}};
  double const a = 0.8, b = 1.7;
  double const num =
      integrate([&](double x) { return x * l.density(x); }, a, b).value;
  CHECK(l.truncated_mean(a, b) == doctest::Approx(num / (l.cdf(b) - l.cdf(a))).epsilon(1e-9));
}

TEST_CASE("validation rejects bad inputs")
{
  CHECK_THROWS_AS(Distribution(Uniform{1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(Distribution(Lognormal{0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(validate(MarketPrimitives{0.5, 1.0, 30, 0.2, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(validate(MarketPrimitives{0.5, 0.5, 30, 0.0, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(validate(Mechanism{DutchLinear{1.0, 0.1, 2.0}}), InvalidInput);
  CHECK_THROWS_AS(validate(Mechanism{PostedImmediate{0.5, -1.0}}), InvalidInput);
  CHECK_NOTHROW(validate(Mechanism{DutchExp{0.7, 0.0}}));
}
