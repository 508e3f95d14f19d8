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

#include "dutchclock/microfoundation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace dutchclock {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Time at which an exponential path p0*exp(-delta*s) crosses level x.
double exp_crossing(double p0, double delta, double x)
{
  if (x >= p0)
  {
    return 0.0;
  }
  if (x <= 0.0 || delta <= 0.0)
  {
    return kInf;
  }
  return std::log(p0 / x) / delta;
}

double linear_crossing(DutchLinear const &d, double x)
{
  if (x >= d.p0)
  {
    return 0.0;
  }
  if (x < d.floor || d.slope <= 0.0)
  {
    return kInf;
  }
  return (d.p0 - x) / d.slope;
}

double posted_price(Mechanism const &mech)
{
  if (auto const *f = std::get_if<PostedImmediate>(&mech))
  {
    return f->pbar;
  }
  return std::get<PostedBatch>(mech).pbar;
}

void add_if_inside(std::vector<double> &pts, double x, double lo, double hi)
{
  if (x > lo && x < hi)
  {
    pts.push_back(x);
  }
}

}  // namespace

ContactRates contact_rates(MarketPrimitives const &prim)
{
  double const theta = prim.theta();
  return {prim.A * std::pow(theta, prim.beta), prim.A * std::pow(theta, prim.beta - 1.0)};
}

double price_path(Mechanism const &mech, double t)
{
  if (!(t >= 0.0))
  {
    throw InvalidInput(fmt::format("price path evaluated at negative time {}", t));
  }
  if (auto const *d = std::get_if<DutchExp>(&mech))
  {
    return d->p0 * std::exp(-d->delta * t);
  }
  if (auto const *d = std::get_if<DutchLinear>(&mech))
  {
    return std::max(d->floor, d->p0 - d->slope * t);
  }
  return posted_price(mech);
}

double eligibility_time(Mechanism const &mech, double v)
{
  if (auto const *d = std::get_if<DutchExp>(&mech))
  {
    return exp_crossing(d->p0, d->delta, v);
  }
  if (auto const *d = std::get_if<DutchLinear>(&mech))
  {
    return linear_crossing(*d, v);
  }
  return v >= posted_price(mech) ? 0.0 : kInf;
}

double decay_integral(double d, double x)
{
  if (std::abs(d * x) < 1e-8)
  {
    return x * (1.0 - 0.5 * d * x);
  }
  return -std::expm1(-d * x) / d;
}

QuadratureOptions const &micro_quadrature()
{
  static QuadratureOptions const opt{1e-12, 1e-11, 4000};
  return opt;
}

// ---------------------------------------------------------------------------
// Hazard

HazardProfile::HazardProfile(MarketPrimitives const &prim, Mechanism mech, Distribution valueDist)
  : muD_{contact_rates(prim).muD}
  , T_{prim.T}
  , mech_{std::move(mech)}
  , dist_{std::move(valueDist)}
{
  bool const uniform = dist_.as<Uniform>() != nullptr;
  closedForm_        = !is_dutch(mech_) || uniform;
}

std::vector<double> HazardProfile::kinks() const
{
  std::vector<double> pts;
  auto const [lo, hi] = dist_.support();
  for (double level : {lo, hi})
  {
    if (std::isfinite(level))
    {
      add_if_inside(pts, eligibility_time(mech_, level), 0.0, T_);
    }
  }
  if (auto const *d = std::get_if<DutchLinear>(&mech_))
  {
    if (d->slope > 0.0)
    {
      add_if_inside(pts, (d->p0 - d->floor) / d->slope, 0.0, T_);
    }
  }
  if (auto const *p = dist_.as<PointMass>())
  {
    add_if_inside(pts, eligibility_time(mech_, p->x), 0.0, T_);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

double HazardProfile::h(double t) const
{
  return muD_ * dist_.survival(price_path(mech_, t));
}

double HazardProfile::H_uniform_exp(double t) const
{
  auto const &d = std::get<DutchExp>(mech_);
  auto const &u = *dist_.as<Uniform>();
  double const w = u.hi - u.lo;

  double const sHi = std::min(exp_crossing(d.p0, d.delta, u.hi), t);
  double const sLo = std::min(exp_crossing(d.p0, d.delta, u.lo), t);

  // middle phase: survival is (hi - p)/w on [sHi, sLo]
  double mid = 0.0;
  if (sLo > sHi)
  {
    double const len = sLo - sHi;
    double const pAt = d.p0 * std::exp(-d.delta * sHi);
    mid              = (u.hi * len - pAt * decay_integral(d.delta, len)) / w;
  }
  double const tail = t - sLo;
  return muD_ * (mid + tail);
}

double HazardProfile::H_uniform_linear(double t) const
{
  auto const &d = std::get<DutchLinear>(mech_);
  std::vector<double> pts{0.0, t};
  auto const [lo, hi] = dist_.support();
  add_if_inside(pts, linear_crossing(d, hi), 0.0, t);
  add_if_inside(pts, linear_crossing(d, lo), 0.0, t);
  if (d.slope > 0.0)
  {
    add_if_inside(pts, (d.p0 - d.floor) / d.slope, 0.0, t);
  }
  std::sort(pts.begin(), pts.end());
  // the integrand is linear between consecutive points
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
  {
    double const a = pts[i], b = pts[i + 1];
    sum += 0.5 * (b - a) *
           (dist_.survival(price_path(mech_, a)) + dist_.survival(price_path(mech_, b)));
  }
  return muD_ * sum;
}

double HazardProfile::H_numeric(double t) const
{
  if (t <= 0.0)
  {
    return 0.0;
  }
  std::vector<double> pts{0.0, t};
  for (double k : kinks())
  {
    add_if_inside(pts, k, 0.0, t);
  }
  auto f = [this](double s) { return dist_.survival(price_path(mech_, s)); };
  return muD_ * integrate(f, pts, micro_quadrature()).value;
}

double HazardProfile::H(double t) const
{
  if (!(t >= 0.0))
  {
    throw InvalidInput(fmt::format("hazard evaluated at negative time {}", t));
  }
  if (t == 0.0)
  {
    return 0.0;
  }
  if (!is_dutch(mech_))
  {
    return muD_ * dist_.survival(posted_price(mech_)) * t;
  }
  if (!closedForm_)
  {
    return H_numeric(t);
  }
  if (std::holds_alternative<DutchExp>(mech_))
  {
    return H_uniform_exp(t);
  }
  return H_uniform_linear(t);
}

double HazardProfile::S(double t) const
{
  return std::exp(-H(t));
}

double hazard_DA(MarketPrimitives const &prim, Mechanism const &mech, Distribution const &values,
                 double t)
{
  if (!is_dutch(mech))
  {
    throw InvalidInput("hazard_DA requires a Dutch mechanism");
  }
  if (t > prim.T)
  {
    throw InvalidInput(fmt::format("t = {} exceeds the horizon {}", t, prim.T));
  }
  return HazardProfile(prim, mech, values).H(t);
}

// ---------------------------------------------------------------------------
// Driver and rider objects

DriverObjects driver_objects(MarketPrimitives const &prim, Mechanism const &mech,
                             Distribution const &values)
{
  validate(prim);
  validate(mech);
  double const T    = prim.T;
  double const keep = 1.0 - prim.alpha;
  DriverObjects out;

  if (!is_dutch(mech))
  {
    double const pbar = posted_price(mech);
    double const eta  = contact_rates(prim).muD * values.survival(pbar);
    out.hazardT       = eta * T;
    out.q             = -std::expm1(-out.hazardT);
    if (kind(mech) == MechanismKind::Batch)
    {
      out.tau = T;
    }
    else
    {
      out.tau = decay_integral(eta, T) + out.q * friction(mech);
    }
    if (out.q >= kEmptyMatchSet)
    {
      out.pbar = pbar;
      out.pi   = keep * pbar;
    }
    return out;
  }

  HazardProfile const hp(prim, mech, values);
  out.hazardT = hp.H(T);
  out.q       = -std::expm1(-out.hazardT);

  std::vector<double> pts{0.0, T};
  auto const          k = hp.kinks();
  pts.insert(pts.end(), k.begin(), k.end());
  // survival can collapse on the 1/muD scale, far below the horizon
  for (double s = 1.0 / hp.muD(); s < T; s *= 2.0)
  {
    pts.push_back(s);
  }

  QuadratureOptions tauOpt = micro_quadrature();
  tauOpt.absTol            = 1e-11 * T;
  out.tau = integrate([&](double t) { return hp.S(t); }, pts, tauOpt).value;

  if (out.q >= kEmptyMatchSet)
  {
    QuadratureOptions payOpt = micro_quadrature();
    payOpt.absTol            = 1e-13 * out.q;
    double const num =
        integrate([&](double t) { return price_path(mech, t) * hp.h(t) * hp.S(t); }, pts, payOpt)
            .value;
    out.pbar = num / out.q;
    out.pi   = keep * *out.pbar;
  }
  return out;
}

RiderObjects rider_objects(MarketPrimitives const &prim, Mechanism const &mech,
                           Distribution const &values, DriverObjects const &drv)
{
  double const T   = prim.T;
  double const muR = contact_rates(prim).muR;
  RiderObjects out;
  // more matches than riders cannot happen in a finite pool
  out.qR    = std::min(1.0, prim.D * drv.q / prim.R);
  out.pbarM = drv.pbar;

  double const waitMet = decay_integral(muR, T);  // expected wait when eligible from t = 0

  switch (kind(mech))
  {
  case MechanismKind::Batch:
    out.tauR = T;
    return out;
  case MechanismKind::Immediate:
  {
    double const above = values.survival(posted_price(mech));
    out.tauR = above * waitMet + (1.0 - above) * T - above * std::expm1(-muR * T) * friction(mech);
    return out;
  }
  case MechanismKind::Dutch:
    break;
  }

  auto g = [&](double v) {
    double const tv = eligibility_time(mech, v);
    if (!(tv < T))
    {
      return T;
    }
    return tv + decay_integral(muR, T - tv);
  };

  double const uLow  = values.cdf(price_path(mech, T));
  double const uHigh = values.cdf(start_price(mech));
  double       total = uLow * T + (1.0 - uHigh) * waitMet;
  if (uHigh > uLow)
  {
    total += integrate_doubling([&](double u) { return g(values.quantile(u)); }, uLow, uHigh)
                 .value;
  }
  out.tauR = total;
  return out;
}

RiderObjects rider_objects(MarketPrimitives const &prim, Mechanism const &mech,
                           Distribution const &values)
{
  return rider_objects(prim, mech, values, driver_objects(prim, mech, values));
}

double match_volume(MarketPrimitives const &prim, double q)
{
  if (!(q >= 0.0 && q <= 1.0))
  {
    throw InvalidInput(fmt::format("match probability must lie in [0,1], got {}", q));
  }
  return prim.D * q;
}

std::optional<double> avg_price_DA(MarketPrimitives const &prim, Mechanism const &mech,
                                   Distribution const &values)
{
  if (!is_dutch(mech))
  {
    throw InvalidInput("avg_price_DA requires a Dutch mechanism");
  }
  return driver_objects(prim, mech, values).pbar;
}

std::string ReducedFormBundle::flags() const
{
  return pi ? std::string{} : std::string{kUndefinedEmpty};
}

ReducedFormBundle reduced_form(MarketPrimitives const &prim, Mechanism const &mech,
                               Distribution const &values)
{
  auto const drv = driver_objects(prim, mech, values);
  auto const rdr = rider_objects(prim, mech, values, drv);
  ReducedFormBundle b;
  b.q     = drv.q;
  b.pi    = drv.pi;
  b.tau   = drv.tau;
  b.tauR  = rdr.tauR;
  b.qR    = rdr.qR;
  b.m     = match_volume(prim, drv.q);
  b.pbarM = rdr.pbarM;
  return b;
}

}  // namespace dutchclock
