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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "dutchclock/tables.hpp"

using namespace dutchclock;

TEST_CASE("values format with six significant digits")
{
  CHECK(format_value(0.1234567) == "0.123457");
  CHECK(format_value(std::nan("")) == "NA");
  CHECK(format_value(std::string("a,b")) == "\"a,b\"");
}

TEST_CASE("first sensitivity row")
{
  auto const t = make_table("oa1");
  REQUIRE(t.rows.size() == 10);
  CHECK(t.text(0, "row") == "a");
  CHECK(t.number(0, "q_DA") == doctest::Approx(0.999).epsilon(0.002));
  CHECK(t.number(0, "pin_DA") == doctest::Approx(0.63).epsilon(0.002));
  CHECK(std::abs(t.number(0, "tau_DA") - 5.5) < 0.1);
  CHECK(t.number(0, "lambda") == doctest::Approx(0.069).epsilon(0.02));
  CHECK(t.text(0, "case") == t.text(0, "case_ref"));
  CHECK_THROWS_AS(t.column("missing"), InvalidInput);
}

TEST_CASE("break-even grid classifications agree")
{
  auto const t = make_table("oa2");
  std::size_t deltas = 0;
  for (auto const &c : t.columns)
  {
    deltas += c.rfind("delta_", 0) == 0;
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i)
  {
    CHECK(t.number(i, "matches") == static_cast<double>(deltas));
  }
}

TEST_CASE("csv has a header and one line per row")
{
  auto const        t = make_table("oa3");
  std::stringstream ss;
  write_csv(ss, t);
  std::string line;
  int         n = 0;
  while (std::getline(ss, line))
  {
    ++n;
  }
  CHECK(n == static_cast<int>(t.rows.size()) + 1);
  CHECK_THROWS_AS(make_table("oa9"), InvalidInput);
}
