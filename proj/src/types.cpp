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

#include "dutchclock/types.hpp"

#include <cmath>

#include <fmt/format.h>

namespace dutchclock {
namespace {

void require(bool ok, std::string const &what)
{
  if (!ok)
  {
    throw InvalidInput(what);
  }
}

bool finite_positive(double x)
{
  return std::isfinite(x) && x > 0.0;
}

}  // namespace

void validate(MarketPrimitives const &p)
{
  require(finite_positive(p.A), fmt::format("A must be > 0, got {}", p.A));
  require(p.beta > 0.0 && p.beta < 1.0, fmt::format("beta must lie in (0,1), got {}", p.beta));
  require(finite_positive(p.T), fmt::format("T must be > 0, got {}", p.T));
  require(p.alpha > 0.0 && p.alpha < 1.0, fmt::format("alpha must lie in (0,1), got {}", p.alpha));
  require(finite_positive(p.D), fmt::format("D must be > 0, got {}", p.D));
  require(finite_positive(p.R), fmt::format("R must be > 0, got {}", p.R));
  require(finite_positive(p.theta()), "tightness R/D must be finite and positive");
}

MechanismKind kind(Mechanism const &m)
{
  switch (m.index())
  {
  case 0:
  case 1:
    return MechanismKind::Dutch;
  case 2:
    return MechanismKind::Immediate;
  default:
    return MechanismKind::Batch;
  }
}

bool is_dutch(Mechanism const &m)
{
  return kind(m) == MechanismKind::Dutch;
}

std::string_view short_name(Mechanism const &m)
{
  switch (kind(m))
  {
  case MechanismKind::Dutch:
    return "DA";
  case MechanismKind::Immediate:
    return "FPi";
  default:
    return "FPb";
  }
}

std::string describe(Mechanism const &m)
{
  if (auto const *d = std::get_if<DutchExp>(&m))
  {
    return fmt::format("DA(exp p0={} delta={})", d->p0, d->delta);
  }
  if (auto const *d = std::get_if<DutchLinear>(&m))
  {
    return fmt::format("DA(linear p0={} slope={} floor={})", d->p0, d->slope, d->floor);
  }
  if (auto const *f = std::get_if<PostedImmediate>(&m))
  {
    return fmt::format("FPi(pbar={} phi={})", f->pbar, f->phi);
  }
  return fmt::format("FPb(pbar={})", std::get<PostedBatch>(m).pbar);
}

void validate(Mechanism const &m)
{
  if (auto const *d = std::get_if<DutchExp>(&m))
  {
    require(finite_positive(d->p0), fmt::format("p0 must be > 0, got {}", d->p0));
    require(std::isfinite(d->delta) && d->delta >= 0.0,
            fmt::format("delta must be >= 0, got {}", d->delta));
  }
  else if (auto const *d = std::get_if<DutchLinear>(&m))
  {
    require(finite_positive(d->p0), fmt::format("p0 must be > 0, got {}", d->p0));
    require(std::isfinite(d->slope) && d->slope >= 0.0,
            fmt::format("slope must be >= 0, got {}", d->slope));
    require(std::isfinite(d->floor) && d->floor >= 0.0 && d->floor <= d->p0,
            fmt::format("floor must lie in [0, p0], got {}", d->floor));
  }
  else if (auto const *f = std::get_if<PostedImmediate>(&m))
  {
    require(finite_positive(f->pbar), fmt::format("pbar must be > 0, got {}", f->pbar));
    require(std::isfinite(f->phi) && f->phi >= 0.0,
            fmt::format("phi must be >= 0, got {}", f->phi));
  }
  else
  {
    auto const &b = std::get<PostedBatch>(m);
    require(finite_positive(b.pbar), fmt::format("pbar must be > 0, got {}", b.pbar));
  }
}

double start_price(Mechanism const &m)
{
  if (auto const *d = std::get_if<DutchExp>(&m))
  {
    return d->p0;
  }
  if (auto const *d = std::get_if<DutchLinear>(&m))
  {
    return d->p0;
  }
  if (auto const *f = std::get_if<PostedImmediate>(&m))
  {
    return f->pbar;
  }
  return std::get<PostedBatch>(m).pbar;
}

double friction(Mechanism const &m)
{
  if (auto const *f = std::get_if<PostedImmediate>(&m))
  {
    return f->phi;
  }
  return 0.0;
}

void validate(EntryPrimitives const &e)
{
  require(finite_positive(e.Dbar), fmt::format("Dbar must be > 0, got {}", e.Dbar));
  require(finite_positive(e.Rbar), fmt::format("Rbar must be > 0, got {}", e.Rbar));
  require(std::isfinite(e.lambda) && e.lambda >= 0.0,
          fmt::format("lambda must be >= 0, got {}", e.lambda));
  require(std::isfinite(e.kappa) && e.kappa >= 0.0,
          fmt::format("kappa must be >= 0, got {}", e.kappa));
  require(e.costDist.support().first >= 0.0, "cost distribution support must lie in [0, inf)");
  require(e.valueDist.support().first >= 0.0, "value distribution support must be nonnegative");
}

}  // namespace dutchclock
