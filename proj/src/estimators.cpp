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

#include "dutchclock/estimators.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <fmt/format.h>

namespace dutchclock {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(double num, double den)
{
  return den > 0.0 ? num / den : kNaN;
}

double sd(std::vector<double> const &xs)
{
  double      mean = 0.0;
  std::size_t n    = 0;
  for (double x : xs)
  {
    if (std::isfinite(x))
    {
      mean += x;
      ++n;
    }
  }
  if (n < 2)
  {
    return n == 0 ? kNaN : 0.0;
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs)
  {
    if (std::isfinite(x))
    {
      ss += (x - mean) * (x - mean);
    }
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

PointEstimates resample(std::vector<SessionSums> const &sums, std::uint64_t seed, int b)
{
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(b))));
  std::size_t const n = sums.size();
  SessionSums       total;
  for (std::size_t k = 0; k < n; ++k)
  {
    total += sums[std::min(n - 1, static_cast<std::size_t>(uniform_open01(rng) * n))];
  }
  return point_estimates(total, static_cast<double>(n));
}

EstimatedBundle prepare(std::vector<SessionRecord const *> const &sessions,
                        std::vector<SessionSums> &sums)
{
  if (sessions.empty())
  {
    throw InvalidInput("estimate_bundle needs at least one session");
  }
  EstimatedBundle out;
  out.mechanism = sessions.front()->mechanism;
  out.sessions  = static_cast<int>(sessions.size());
  sums.reserve(sessions.size());
  for (auto const *r : sessions)
  {
    if (r->mechanism != out.mechanism)
    {
      throw InvalidInput("estimate_bundle: sessions from more than one mechanism");
    }
    sums.push_back(summarize(*r));
    out.totals += sums.back();
    out.D += r->D;
    out.R += r->R;
  }
  out.D /= out.sessions;
  out.R /= out.sessions;
  out.est = point_estimates(out.totals, out.sessions);
  if (out.totals.matchedDrivers == 0.0)
  {
    out.flags = "no-matched-drivers";
  }
  return out;
}

void finish(EstimatedBundle &out)
{
  auto field_se = [&](double PointEstimates::*f) {
    std::vector<double> xs;
    xs.reserve(out.replicates.size());
    for (auto const &r : out.replicates)
    {
      xs.push_back(r.*f);
    }
    return sd(xs);
  };
  out.se.q    = field_se(&PointEstimates::q);
  out.se.pi   = field_se(&PointEstimates::pi);
  out.se.tau  = field_se(&PointEstimates::tau);
  out.se.tauR = field_se(&PointEstimates::tauR);
  out.se.qR   = field_se(&PointEstimates::qR);
  out.se.m    = field_se(&PointEstimates::m);
  out.se.pbar = field_se(&PointEstimates::pbar);
}

std::string g6(double x)
{
  return std::isfinite(x) ? fmt::format("{:.6g}", x) : std::string{"NA"};
}

}  // namespace

SessionSums &SessionSums::operator+=(SessionSums const &o)
{
  drivers += o.drivers;
  matchedDrivers += o.matchedDrivers;
  tau += o.tau;
  pay += o.pay;
  riders += o.riders;
  matchedRiders += o.matchedRiders;
  tauR += o.tauR;
  matches += o.matches;
  price += o.price;
  return *this;
}

SessionSums summarize(SessionRecord const &rec)
{
  SessionSums s;
  s.drivers = static_cast<double>(rec.drivers.size());
  s.riders  = static_cast<double>(rec.riders.size());
  s.matches = rec.m;
  for (auto const &a : rec.drivers)
  {
    s.tau += a.tau;
    if (a.matched)
    {
      s.matchedDrivers += 1.0;
      s.pay += a.price;
    }
  }
  for (auto const &a : rec.riders)
  {
    s.tauR += a.tau;
    if (a.matched)
    {
      s.matchedRiders += 1.0;
      s.price += a.price;
    }
  }
  return s;
}

PointEstimates point_estimates(SessionSums const &t, double sessions)
{
  PointEstimates e;
  e.q    = ratio(t.matchedDrivers, t.drivers);
  e.tau  = ratio(t.tau, t.drivers);
  e.pi   = ratio(t.pay, t.matchedDrivers);
  e.tauR = ratio(t.tauR, t.riders);
  e.qR   = ratio(t.matchedRiders, t.riders);
  e.m    = ratio(t.matches, sessions);
  e.pbar = ratio(t.price, t.matches);
  return e;
}

bool ThicknessBin::contains(int d, int r) const
{
  if (window <= 0.0)
  {
    return d == D && r == R;
  }
  return std::abs(d - D) <= window * D && std::abs(r - R) <= window * R;
}

std::vector<SessionRecord const *> select(std::vector<SessionRecord> const &recs,
                                          std::string_view mechanism, ThicknessBin const &bin)
{
  std::vector<SessionRecord const *> out;
  for (auto const &r : recs)
  {
    if (r.mechanism == mechanism && bin.contains(r.D, r.R))
    {
      out.push_back(&r);
    }
  }
  return out;
}

std::vector<SessionRecord const *> pointers(std::vector<SessionRecord> const &recs)
{
  std::vector<SessionRecord const *> out;
  out.reserve(recs.size());
  for (auto const &r : recs)
  {
    out.push_back(&r);
  }
  return out;
}

double EstimatedBundle::se_of(std::function<double(PointEstimates const &)> const &stat) const
{
  std::vector<double> xs;
  xs.reserve(replicates.size());
  for (auto const &r : replicates)
  {
    xs.push_back(stat(r));
  }
  return sd(xs);
}

EstimatedBundle estimate_bundle(std::vector<SessionRecord const *> const &sessions,
                                BootstrapOptions const &opt)
{
  std::vector<SessionSums> sums;
  auto                     out = prepare(sessions, sums);
  out.replicates.resize(std::max(0, opt.resamples));
#pragma omp parallel for schedule(static)
  for (int b = 0; b < opt.resamples; ++b)
  {
    out.replicates[b] = resample(sums, opt.seed, b);
  }
  finish(out);
  return out;
}

EstimatedBundle estimate_bundle_serial(std::vector<SessionRecord const *> const &sessions,
                                       BootstrapOptions const &opt)
{
  std::vector<SessionSums> sums;
  auto                     out = prepare(sessions, sums);
  out.replicates.resize(std::max(0, opt.resamples));
  for (int b = 0; b < opt.resamples; ++b)
  {
    out.replicates[b] = resample(sums, opt.seed, b);
  }
  finish(out);
  return out;
}

DominanceTest dominance_test(EstimatedBundle const &da, EstimatedBundle const &fp, double lambda)
{
  auto margin = [lambda](PointEstimates const &a, PointEstimates const &f) {
    return (a.earnings() - lambda * a.tau) - (f.earnings() - lambda * f.tau);
  };
  DominanceTest t;
  t.lambda = lambda;
  t.margin = margin(da.est, fp.est);
  std::size_t const   n = std::min(da.replicates.size(), fp.replicates.size());
  std::vector<double> xs(n);
  for (std::size_t b = 0; b < n; ++b)
  {
    xs[b] = margin(da.replicates[b], fp.replicates[b]);
  }
  t.se = n > 1 ? sd(xs) : 0.0;
  return t;
}

std::vector<DominanceTest> dominance_test(EstimatedBundle const &da, EstimatedBundle const &fp,
                                          std::vector<double> const &lambdas)
{
  std::vector<DominanceTest> out;
  out.reserve(lambdas.size());
  for (double l : lambdas)
  {
    out.push_back(dominance_test(da, fp, l));
  }
  return out;
}

std::string LambdaStarHat::display() const
{
  switch (report.verdict.kase)
  {
  case DominanceCase::AllLambda:
    return paymentGap < 0.0 ? "<0" : "0";
  case DominanceCase::FloorThreshold:
    return fmt::format("{:.6g}", *report.verdict.threshold);
  case DominanceCase::CeilingThreshold:
    return fmt::format("<={:.6g}", *report.verdict.threshold);
  case DominanceCase::NeverDominates:
    break;
  }
  return "---";
}

LambdaStarHat lambda_star_hat(EstimatedBundle const &da, EstimatedBundle const &fp)
{
  LambdaStarHat out;
  out.paymentGap = fp.est.earnings() - da.est.earnings();
  out.timingGap  = fp.est.tau - da.est.tau;
  out.report     = lambda_threshold(out.paymentGap, out.timingGap);
  return out;
}

std::string_view to_string(TestOutcome t)
{
  switch (t)
  {
  case TestOutcome::Pass:
    return "pass";
  case TestOutcome::Fail:
    return "fail";
  case TestOutcome::Inconclusive:
    break;
  }
  return "inconclusive";
}

namespace {

// sign = -1 asks for decreasing differences, +1 for increasing.
TestOutcome sign_test(std::vector<double> const &d, std::vector<double> const &se, int sign,
                      double z)
{
  bool anySignificant = false;
  for (std::size_t k = 0; k < d.size(); ++k)
  {
    double const x = sign * d[k];
    if (x < -z * se[k] && x < 0.0)
    {
      return TestOutcome::Fail;
    }
    anySignificant = anySignificant || (x > z * se[k] && x > 0.0);
  }
  return anySignificant ? TestOutcome::Pass : TestOutcome::Inconclusive;
}

}  // namespace

MonotonicityReport monotonicity_test(std::vector<EstimatedBundle> const &byD, double lambda,
                                     double z)
{
  if (byD.size() < 3)
  {
    throw InvalidInput("monotonicity_test needs at least 3 D bins");
  }
  auto cutoff = [lambda](PointEstimates const &e) { return e.earnings() - lambda * e.tau; };
  auto volume = [](PointEstimates const &e) { return e.m; };

  MonotonicityReport rep;
  for (std::size_t k = 1; k < byD.size(); ++k)
  {
    auto const &a = byD[k - 1];
    auto const &b = byD[k];
    rep.cutoffDiffs.push_back(cutoff(b.est) - cutoff(a.est));
    rep.cutoffSe.push_back(std::hypot(a.se_of(cutoff), b.se_of(cutoff)));
    rep.volumeDiffs.push_back(volume(b.est) - volume(a.est));
    rep.volumeSe.push_back(std::hypot(a.se.m, b.se.m));
  }
  rep.congestion = sign_test(rep.cutoffDiffs, rep.cutoffSe, -1, z);
  rep.volume     = sign_test(rep.volumeDiffs, rep.volumeSe, +1, z);
  return rep;
}

void write_estimates(std::ostream &os, std::vector<EstimatedBundle> const &bundles)
{
  os << "mechanism,D,R,q,q_se,pi,pi_se,tau,tau_se,tauR,tauR_se,m,pbar,flags\n";
  for (auto const &b : bundles)
  {
    os << b.mechanism << ',' << g6(b.D) << ',' << g6(b.R) << ',' << g6(b.est.q) << ','
       << g6(b.se.q) << ',' << g6(b.est.pi) << ',' << g6(b.se.pi) << ',' << g6(b.est.tau) << ','
       << g6(b.se.tau) << ',' << g6(b.est.tauR) << ',' << g6(b.se.tauR) << ',' << g6(b.est.m)
       << ',' << g6(b.est.pbar) << ',' << b.flags << '\n';
  }
}

}  // namespace dutchclock
