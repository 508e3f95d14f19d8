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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dutchclock/dominance.hpp"
#include "dutchclock/simulator.hpp"

namespace dutchclock {

/// Per-session numerators and denominators of the ratio estimators.
struct SessionSums
{
  double drivers        = 0.0;
  double matchedDrivers = 0.0;
  double tau            = 0.0;
  double pay            = 0.0;
  double riders         = 0.0;
  double matchedRiders  = 0.0;
  double tauR           = 0.0;
  double matches        = 0.0;
  double price          = 0.0;

  SessionSums &operator+=(SessionSums const &o);
};

SessionSums summarize(SessionRecord const &rec);

/// Ratio estimates pooled over sessions. pi and pbar are NaN when no match
/// was observed.
struct PointEstimates
{
  double q    = 0.0;
  double pi   = 0.0;
  double tau  = 0.0;
  double tauR = 0.0;
  double qR   = 0.0;
  double m    = 0.0;  // matches per session
  double pbar = 0.0;

  double earnings() const { return q * pi; }
};

PointEstimates point_estimates(SessionSums const &total, double sessions);

struct ThicknessBin
{
  double D = 0.0;
  double R = 0.0;
  // 0 keeps exact cells; otherwise a relative window in each coordinate
  double window = 0.0;

  bool contains(int d, int r) const;
};

std::vector<SessionRecord const *> select(std::vector<SessionRecord> const &recs,
                                          std::string_view mechanism, ThicknessBin const &bin);

struct BootstrapOptions
{
  int           resamples = 1000;
  std::uint64_t seed      = 1;
};

struct EstimatedBundle
{
  std::string    mechanism;
  double         D = 0.0, R = 0.0;
  int            sessions = 0;
  SessionSums    totals;
  PointEstimates est;
  PointEstimates se;
  // Replicates share resample indices across bins with equal session counts
  // and seed, which pairs sessions under common random numbers.
  std::vector<PointEstimates> replicates;
  std::string                 flags;  // empty, or zero-denominator notes

  /// Bootstrap standard error of any statistic of the estimates.
  double se_of(std::function<double(PointEstimates const &)> const &stat) const;
};

EstimatedBundle estimate_bundle(std::vector<SessionRecord const *> const &sessions,
                                BootstrapOptions const &opt = {});
EstimatedBundle estimate_bundle_serial(std::vector<SessionRecord const *> const &sessions,
                                       BootstrapOptions const &opt = {});

std::vector<SessionRecord const *> pointers(std::vector<SessionRecord> const &recs);

struct DominanceTest
{
  double lambda = 0.0;
  double margin = 0.0;  // (qpi - lambda tau)_DA - (qpi - lambda tau)_FP
  double se     = 0.0;
  bool   dominates() const { return margin >= 0.0; }
};

DominanceTest              dominance_test(EstimatedBundle const &da, EstimatedBundle const &fp,
                                          double lambda);
std::vector<DominanceTest> dominance_test(EstimatedBundle const &da, EstimatedBundle const &fp,
                                          std::vector<double> const &lambdas);

struct LambdaStarHat
{
  double          paymentGap = 0.0;  // qpi_FP - qpi_DA
  double          timingGap  = 0.0;  // tau_FP - tau_DA
  ThresholdReport report;

  /// "<0", "0", "---" or the threshold value.
  std::string display() const;
};

LambdaStarHat lambda_star_hat(EstimatedBundle const &da, EstimatedBundle const &fp);

enum class TestOutcome
{
  Pass,
  Fail,
  Inconclusive
};

std::string_view to_string(TestOutcome t);

struct MonotonicityReport
{
  std::vector<double> cutoffDiffs;  // successive differences of qpi - lambda tau
  std::vector<double> cutoffSe;
  std::vector<double> volumeDiffs;
  std::vector<double> volumeSe;
  TestOutcome         congestion = TestOutcome::Inconclusive;
  TestOutcome         volume     = TestOutcome::Inconclusive;
};

/// Bundles ordered by increasing D at fixed R. A difference counts when it
/// clears z standard errors.
MonotonicityReport monotonicity_test(std::vector<EstimatedBundle> const &byD, double lambda,
                                     double z = 1.96);

/// mechanism,D,R,q,q_se,pi,pi_se,tau,tau_se,tauR,tauR_se,m,pbar,flags
void write_estimates(std::ostream &os, std::vector<EstimatedBundle> const &bundles);

}  // namespace dutchclock
