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

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>

namespace dutchclock {

struct Uniform
{
  double lo = 0.0;
  double hi = 1.0;
};

struct Lognormal
{
  double mu    = 0.0;
  double sigma = 1.0;
};

struct PointMass
{
  double x = 0.0;
};

/// Closed set of distributions used for values and costs. Closed forms are
/// dispatched per alternative; callers that need generic behaviour go
/// through the member functions.
class Distribution
{
public:
  using Variant = std::variant<Uniform, Lognormal, PointMass>;

  Distribution() = default;
  Distribution(Uniform u);
  Distribution(Lognormal l);
  Distribution(PointMass p);

  double cdf(double x) const;
  double survival(double x) const;
  double density(double x) const;
  double quantile(double u) const;
  double mean() const;
  /// E[X | a <= X <= b]; throws when the interval has zero probability.
  double truncated_mean(double a, double b) const;
  std::pair<double, double> support() const;

  /// One uniform draw per sample, pushed through the quantile function.
  double sample(std::mt19937_64 &rng) const;

  bool has_density() const;
  std::string describe() const;

  Variant const &get() const { return v_; }

  template <class T>
  T const *as() const
  {
    return std::get_if<T>(&v_);
  }

private:
  Variant v_{Uniform{}};
};

/// Uniform on the open interval (0, 1) with 53 random bits.
double uniform_open01(std::mt19937_64 &rng);

}  // namespace dutchclock
