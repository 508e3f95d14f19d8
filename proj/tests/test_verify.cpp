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

#include <sstream>

#include "doctest.h"
#include "dutchclock/types.hpp"
#include "dutchclock/verify.hpp"

using namespace dutchclock;

TEST_CASE("suites pass on a small run")
{
  VerifyOptions opt;
  opt.points   = 200;
  auto const r = run_verify(opt);
  CHECK(r.ok());
  CHECK(r.suites.size() == 6);
  for (auto const &s : r.suites)
  {
    CAPTURE(s.name);
    CHECK(s.checks > 0);
    CHECK(s.slack() >= 0.0);
  }
}

TEST_CASE("reversed payment inequality is caught")
{
  VerifyOptions opt;
  opt.points                = 50;
  opt.injectPaymentSignFlip = true;
  auto const r              = run_verify(opt);
  CHECK_FALSE(r.ok());
  CHECK(r.suites[0].failures == 50);
  std::stringstream ss;
  write_report(ss, r);
  CHECK(ss.str().find("FAILED") != std::string::npos);
}

TEST_CASE("tolerance override")
{
  VerifyOptions opt;
  opt.points   = 50;
  opt.tol      = 1e-2;
  auto const r = run_verify(opt);
  CHECK(r.suites[0].tol == 1e-2);
  CHECK(r.suites[0].slack() > 9e-3);
  opt.tol = -1.0;
  CHECK_THROWS_AS(run_verify(opt), InvalidInput);
}
