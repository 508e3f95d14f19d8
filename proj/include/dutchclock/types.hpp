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

#include <string>
#include <string_view>
#include <variant>

#include "dutchclock/distribution.hpp"
#include "dutchclock/errors.hpp"

namespace dutchclock {

/// Meeting technology, session horizon, commission and thickness.
/// Prices are in units of the top rider value; times in minutes.
struct MarketPrimitives
{
  double A     = 0.5;
  double beta  = 0.5;
  double T     = 30.0;
  double alpha = 0.2;
  double D     = 1.0;
  double R     = 1.0;

  double theta() const { return R / D; }
  MarketPrimitives at(double d, double r) const
  {
    MarketPrimitives p = *this;
    p.D                = d;
    p.R                = r;
    return p;
  }
};

void validate(MarketPrimitives const &p);

struct DutchExp
{
  double p0    = 0.7;
  double delta = 0.02;
};

struct DutchLinear
{
  double p0    = 1.0;
  double slope = 0.0;
  double floor = 0.0;
};

struct PostedImmediate
{
  double pbar = 0.5;
  double phi  = 0.0;
};

struct PostedBatch
{
  double pbar = 0.5;
};

using Mechanism = std::variant<DutchExp, DutchLinear, PostedImmediate, PostedBatch>;

enum class MechanismKind
{
  Dutch,
  Immediate,
  Batch
};

MechanismKind    kind(Mechanism const &m);
bool             is_dutch(Mechanism const &m);
std::string_view short_name(Mechanism const &m);  // "DA", "FPi", "FPb"
std::string      describe(Mechanism const &m);
void             validate(Mechanism const &m);

/// Starting (maximum) price of the path.
double start_price(Mechanism const &m);
/// Mean post-acceptance friction delay carried by the mechanism (FPi only).
double friction(Mechanism const &m);

struct EntryPrimitives
{
  double       Dbar   = 80.0;
  double       Rbar   = 80.0;
  Distribution costDist{Uniform{0.0, 2.0}};
  Distribution valueDist{Uniform{0.0, 1.0}};
  double       lambda = 0.02;
  double       kappa  = 0.02;
};

void validate(EntryPrimitives const &e);

}  // namespace dutchclock
