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

#include "dutchclock/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <boost/math/special_functions/legendre.hpp>

namespace dutchclock {

GaussLegendreRule const &gauss_legendre(int n)
{
  if (n < 1)
  {
    throw InvalidInput("Gauss-Legendre rule needs n >= 1");
  }
  static std::mutex                                       mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;

  std::lock_guard<std::mutex> lock(mu);
  auto                        it = cache.find(n);
  if (it != cache.end())
  {
    return *it->second;
  }

  auto rule = std::make_unique<GaussLegendreRule>();
  // boost returns the nonnegative zeros in increasing order
  auto const zeros = boost::math::legendre_p_zeros<double>(n);
  for (double x : zeros)
  {
    double const dp = boost::math::legendre_p_prime(n, x);
    double const w  = 2.0 / ((1.0 - x * x) * dp * dp);
    if (x == 0.0)
    {
      rule->nodes.push_back(0.0);
      rule->weights.push_back(w);
    }
    else
    {
      rule->nodes.push_back(x);
      rule->weights.push_back(w);
      rule->nodes.push_back(-x);
      rule->weights.push_back(w);
    }
  }
  auto const &ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

}  // namespace dutchclock
