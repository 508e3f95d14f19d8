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

#include <optional>
#include <string>

#include "dutchclock/distribution.hpp"
#include "dutchclock/quadrature.hpp"
#include "dutchclock/types.hpp"

namespace dutchclock {

/// Below this match probability conditional payments are not reported.
inline constexpr double kEmptyMatchSet = 1e-12;
inline constexpr char const *kUndefinedEmpty = "undefined-empty-match-set";

struct ContactRates
{
  double muD = 0.0;
  double muR = 0.0;
};

ContactRates contact_rates(MarketPrimitives const &prim);

/// Price at time t >= 0. Posted mechanisms are flat.
double price_path(Mechanism const &mech, double t);

/// First time the path reaches v or below; +inf if it never does.
double eligibility_time(Mechanism const &mech, double v);

/// (1 - exp(-d*x)) / d, continuous at d = 0.
double decay_integral(double d, double x);

/// Cumulative trade hazard for one driver: H(t) = muD * int_0^t Fbar_V(p(s)) ds.
class HazardProfile
{
public:
  HazardProfile(MarketPrimitives const &prim, Mechanism mech, Distribution valueDist);

  double H(double t) const;
  double S(double t) const;
  double h(double t) const;
  /// H by adaptive quadrature regardless of closed-form availability.
  double H_numeric(double t) const;
  bool   closed_form() const { return closedForm_; }
  /// Times where the integrand of H has a kink on [0, T].
  std::vector<double> kinks() const;

  double muD() const { return muD_; }
  double horizon() const { return T_; }

private:
  double H_uniform_exp(double t) const;
  double H_uniform_linear(double t) const;

  double       muD_;
  double       T_;
  Mechanism    mech_;
  Distribution dist_;
  bool         closedForm_ = false;
};

double hazard_DA(MarketPrimitives const &prim, Mechanism const &mech, Distribution const &values,
                 double t);

struct DriverObjects
{
  double                q   = 0.0;
  double                tau = 0.0;
  std::optional<double> pi;     // conditional payment, (1-alpha) * pbar
  std::optional<double> pbar;   // rider-paid price conditional on a match
  double                hazardT = 0.0;
};

struct RiderObjects
{
  double                qR   = 0.0;
  double                tauR = 0.0;
  std::optional<double> pbarM;
};

struct ReducedFormBundle
{
  double                q    = 0.0;
  std::optional<double> pi;
  double                tau  = 0.0;
  double                tauR = 0.0;
  double                qR   = 0.0;
  double                m    = 0.0;
  std::optional<double> pbarM;

  /// q * pi with the empty-match convention q * pi = 0.
  double expected_earnings() const { return pi ? q * *pi : 0.0; }
  std::string flags() const;
};

/// Quadrature settings used for the Dutch integrals.
QuadratureOptions const &micro_quadrature();

DriverObjects driver_objects(MarketPrimitives const &prim, Mechanism const &mech,
                             Distribution const &values);
RiderObjects  rider_objects(MarketPrimitives const &prim, Mechanism const &mech,
                            Distribution const &values);
/// Rider objects reusing already computed driver objects.
RiderObjects rider_objects(MarketPrimitives const &prim, Mechanism const &mech,
                           Distribution const &values, DriverObjects const &drv);

double                match_volume(MarketPrimitives const &prim, double q);
std::optional<double> avg_price_DA(MarketPrimitives const &prim, Mechanism const &mech,
                                   Distribution const &values);

ReducedFormBundle reduced_form(MarketPrimitives const &prim, Mechanism const &mech,
                               Distribution const &values);

}  // namespace dutchclock
