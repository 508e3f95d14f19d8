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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dutchclock {

struct VerifyOptions
{
  // Overrides the equality tolerances of every suite.
  std::optional<double> tol;
  int                   points = 1000;
  std::uint64_t         seed   = 20260101;
  // Mutation check: reverses the payment inequality so the suite must fail.
  bool injectPaymentSignFlip = false;
};

struct SuiteResult
{
  std::string name;
  int         checks   = 0;
  int         failures = 0;
  double      tol      = 0.0;  // equality tolerance in force, 0 if none
  double      worst    = 0.0;  // largest equality error seen
  std::string firstFailure;

  bool   ok() const { return failures == 0; }
  double slack() const { return tol - worst; }
};

struct VerifyReport
{
  std::vector<SuiteResult> suites;
  bool                     ok() const;
};

/// Runs the invariant suites of every module.
VerifyReport run_verify(VerifyOptions const &opt = {});

/// One line per suite, then an overall verdict.
void write_report(std::ostream &os, VerifyReport const &r);

}  // namespace dutchclock
