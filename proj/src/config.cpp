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

#include "dutchclock/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dutchclock/microfoundation.hpp"

namespace dutchclock {
namespace {

using nlohmann::json;

constexpr std::string_view kStageNames[] = {"reduced-forms", "dominance", "equilibrium",
                                            "outcomes",      "simulate",  "estimate"};

// Cursor into the document that remembers where it is.
class Node
{
public:
  Node(json const &j, std::string path)
    : j_{j}
    , path_{std::move(path)}
  {
  }

  [[noreturn]] void fail(std::string const &what) const { throw ConfigError(path_, what); }

  std::string const &path() const { return path_; }
  json const        &raw() const { return j_; }

  void expect_object(std::set<std::string> const &allowed) const
  {
    if (!j_.is_object())
    {
      fail("expected an object");
    }
    for (auto const &[k, v] : j_.items())
    {
      if (!allowed.count(k))
      {
        throw ConfigError(child_path(k), "unknown key");
      }
    }
  }

  bool has(std::string const &k) const { return j_.contains(k); }
  Node operator[](std::string const &k) const { return {j_.at(k), child_path(k)}; }
  Node operator[](std::size_t i) const { return {j_.at(i), fmt::format("{}[{}]", path_, i)}; }
  std::size_t size() const { return j_.size(); }

  double number() const
  {
    if (!j_.is_number())
    {
      fail("expected a number");
    }
    return j_.get<double>();
  }

  int integer() const
  {
    if (!j_.is_number_integer())
    {
      fail("expected an integer");
    }
    return j_.get<int>();
  }

  std::string string() const
  {
    if (!j_.is_string())
    {
      fail("expected a string");
    }
    return j_.get<std::string>();
  }

  bool boolean() const
  {
    if (!j_.is_boolean())
    {
      fail("expected true or false");
    }
    return j_.get<bool>();
  }

  Node array() const
  {
    if (!j_.is_array())
    {
      fail("expected an array");
    }
    return *this;
  }

  std::vector<double> numbers() const
  {
    array();
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i)
    {
      out.push_back((*this)[i].number());
    }
    return out;
  }

  void read(std::string const &k, double &x) const
  {
    if (has(k))
    {
      x = (*this)[k].number();
    }
  }
  void read(std::string const &k, int &x) const
  {
    if (has(k))
    {
      x = (*this)[k].integer();
    }
  }
  void read(std::string const &k, bool &x) const
  {
    if (has(k))
    {
      x = (*this)[k].boolean();
    }
  }
  void read(std::string const &k, std::vector<double> &x) const
  {
    if (has(k))
    {
      x = (*this)[k].numbers();
    }
  }

private:
  std::string child_path(std::string const &k) const
  {
    return path_.empty() ? k : path_ + "." + k;
  }

  json const &j_;
  std::string path_;
};

// Runs a module validator and pins its message to a path.
template <class F>
void checked(Node const &n, F &&f)
{
  try
  {
    f();
  }
  catch (ConfigError const &)
  {
    throw;
  }
  catch (InvalidInput const &e)
  {
    n.fail(e.what());
  }
}

Distribution parse_distribution(Node const &n)
{
  if (!n.raw().is_object() || n.size() != 1)
  {
    n.fail(R"(expected one of {"uniform": [lo, hi]}, {"lognormal": [mu, sigma]}, {"point": x})");
  }
  n.expect_object({"uniform", "lognormal", "point"});
  Distribution out;
  checked(n, [&] {
    if (n.has("point"))
    {
      out = PointMass{n["point"].number()};
      return;
    }
    std::string const key = n.has("uniform") ? "uniform" : "lognormal";
    auto const        xs  = n[key].numbers();
    if (xs.size() != 2)
    {
      n[key].fail("expected two numbers");
    }
    out = key == "uniform" ? Distribution{Uniform{xs[0], xs[1]}} : Distribution{Lognormal{xs[0], xs[1]}};
  });
  return out;
}

json dump_distribution(Distribution const &d)
{
  if (auto const *u = d.as<Uniform>())
  {
    return {{"uniform", {u->lo, u->hi}}};
  }
  if (auto const *l = d.as<Lognormal>())
  {
    return {{"lognormal", {l->mu, l->sigma}}};
  }
  return {{"point", d.as<PointMass>()->x}};
}

Mechanism parse_mechanism(Node const &n)
{
  if (!n.raw().is_object() || !n.has("type"))
  {
    n.fail("mechanism needs a \"type\"");
  }
  std::string const type = n["type"].string();
  Mechanism         m;
  if (type == "dutch-exp")
  {
    n.expect_object({"type", "p0", "delta"});
    DutchExp d;
    n.read("p0", d.p0);
    n.read("delta", d.delta);
    m = d;
  }
  else if (type == "dutch-linear")
  {
    n.expect_object({"type", "p0", "slope", "floor"});
    DutchLinear d;
    n.read("p0", d.p0);
    n.read("slope", d.slope);
    n.read("floor", d.floor);
    m = d;
  }
  else if (type == "posted-immediate")
  {
    n.expect_object({"type", "pbar", "phi"});
    PostedImmediate f;
    n.read("pbar", f.pbar);
    n.read("phi", f.phi);
    m = f;
  }
  else if (type == "posted-batch")
  {
    n.expect_object({"type", "pbar"});
    PostedBatch f;
    n.read("pbar", f.pbar);
    m = f;
  }
  else
  {
    n["type"].fail(fmt::format(
        "unknown mechanism type '{}'; expected dutch-exp, dutch-linear, posted-immediate or posted-batch",
        type));
  }
  checked(n, [&] { validate(m); });
  return m;
}

json dump_mechanism(Mechanism const &m)
{
  if (auto const *d = std::get_if<DutchExp>(&m))
  {
    return {{"type", "dutch-exp"}, {"p0", d->p0}, {"delta", d->delta}};
  }
  if (auto const *d = std::get_if<DutchLinear>(&m))
  {
    return {{"type", "dutch-linear"}, {"p0", d->p0}, {"slope", d->slope}, {"floor", d->floor}};
  }
  if (auto const *f = std::get_if<PostedImmediate>(&m))
  {
    return {{"type", "posted-immediate"}, {"pbar", f->pbar}, {"phi", f->phi}};
  }
  return {{"type", "posted-batch"}, {"pbar", std::get<PostedBatch>(m).pbar}};
}

std::vector<Mechanism> parse_mechanisms(Node const &n)
{
  n.array();
  if (n.size() == 0)
  {
    n.fail("mechanism list is empty");
  }
  std::vector<Mechanism> out;
  for (std::size_t i = 0; i < n.size(); ++i)
  {
    out.push_back(parse_mechanism(n[i]));
  }
  return out;
}

void parse_primitives(Node const &n, MarketPrimitives &p)
{
  n.expect_object({"A", "beta", "T", "alpha", "D", "R"});
  n.read("A", p.A);
  n.read("beta", p.beta);
  n.read("T", p.T);
  n.read("alpha", p.alpha);
  n.read("D", p.D);
  n.read("R", p.R);
  checked(n, [&] { validate(p); });
}

void parse_entry(Node const &n, EntryPrimitives &e)
{
  n.expect_object({"Dbar", "Rbar", "cost", "value", "lambda", "kappa"});
  n.read("Dbar", e.Dbar);
  n.read("Rbar", e.Rbar);
  n.read("lambda", e.lambda);
  n.read("kappa", e.kappa);
  if (n.has("cost"))
  {
    e.costDist = parse_distribution(n["cost"]);
  }
  if (n.has("value"))
  {
    e.valueDist = parse_distribution(n["value"]);
  }
  checked(n, [&] { validate(e); });
}

void parse_grids(Node const &n, Grids &g)
{
  n.expect_object({"theta", "delta", "rho", "phi", "pbar", "lambda", "kappa", "s"});
  n.read("theta", g.theta);
  n.read("delta", g.delta);
  n.read("rho", g.rho);
  n.read("phi", g.phi);
  n.read("pbar", g.pbar);
  n.read("lambda", g.lambda);
  n.read("kappa", g.kappa);
  n.read("s", g.s);
  auto positive = [&](std::string const &k, std::vector<double> const &xs, bool strict) {
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
      if (!std::isfinite(xs[i]) || xs[i] < 0.0 || (strict && xs[i] == 0.0))
      {
        n[k][i].fail(strict ? "must be > 0" : "must be >= 0");
      }
    }
  };
  positive("theta", g.theta, true);
  positive("delta", g.delta, false);
  positive("rho", g.rho, true);
  positive("phi", g.phi, false);
  positive("pbar", g.pbar, true);
  positive("lambda", g.lambda, false);
  positive("kappa", g.kappa, false);
  positive("s", g.s, false);
}

void parse_simulation(Node const &n, SimulationSettings &s)
{
  n.expect_object({"cells", "horizon", "mu", "meeting", "value", "cost", "alpha", "cost_acceptance",
                   "sessions", "seed", "bootstrap", "lambda", "mechanisms"});
  SimConfig &c = s.sim;
  n.read("horizon", c.horizon);
  if (n.has("mu"))
  {
    if (n["mu"].raw().is_string())
    {
      if (n["mu"].string() != "primitives")
      {
        n["mu"].fail("expected a number or \"primitives\"");
      }
      s.muFromPrimitives = true;
    }
    else
    {
      c.mu               = n["mu"].number();
      s.muFromPrimitives = false;
    }
  }
  if (n.has("meeting"))
  {
    auto const m = n["meeting"].string();
    if (m != "per-driver" && m != "aggregate")
    {
      n["meeting"].fail("expected per-driver or aggregate");
    }
    c.meeting = m == "aggregate" ? MeetingProcess::Aggregate : MeetingProcess::PerDriver;
  }
  if (n.has("value"))
  {
    c.valueDist = parse_distribution(n["value"]);
  }
  if (n.has("cost"))
  {
    c.costDist = parse_distribution(n["cost"]);
  }
  n.read("alpha", c.alpha);
  n.read("cost_acceptance", c.costAcceptance);
  n.read("sessions", c.sessionsPerCell);
  if (n.has("seed"))
  {
    auto const &j = n["seed"].raw();
    if (!j.is_number_unsigned())
    {
      n["seed"].fail("expected a nonnegative integer");
    }
    c.baseSeed = j.get<std::uint64_t>();
  }
  n.read("bootstrap", s.bootstrap);
  n.read("lambda", s.lambda);
  if (n.has("cells"))
  {
    auto const cells = n["cells"].array();
    s.cells.clear();
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
      auto const cell = cells[i].array();
      if (cell.size() != 2)
      {
        cell.fail("expected [D, R]");
      }
      s.cells.push_back({cell[0].integer(), cell[1].integer()});
      if (s.cells.back().D < 1 || s.cells.back().R < 1)
      {
        cell.fail("pool sizes must be >= 1");
      }
    }
    if (s.cells.empty())
    {
      cells.fail("cell list is empty");
    }
  }
  if (n.has("mechanisms"))
  {
    s.mechanisms = parse_mechanisms(n["mechanisms"]);
  }
  if (s.bootstrap < 2)
  {
    n.fail("bootstrap must be >= 2");
  }
  checked(n, [&] { validate(c); });
}

void parse_root(Node const &n, ScenarioConfig &c)
{
  n.expect_object({"name", "primitives", "entry", "mechanisms", "grids", "simulation", "stages",
                   "output", "tolerances"});
  if (n.has("name"))
  {
    c.name = n["name"].string();
  }
  if (n.has("primitives"))
  {
    parse_primitives(n["primitives"], c.primitives);
  }
  if (n.has("entry"))
  {
    parse_entry(n["entry"], c.entry);
  }
  if (!n.has("mechanisms"))
  {
    n.fail("missing \"mechanisms\"");
  }
  c.mechanisms = parse_mechanisms(n["mechanisms"]);
  if (n.has("grids"))
  {
    parse_grids(n["grids"], c.grids);
  }
  if (n.has("simulation"))
  {
    parse_simulation(n["simulation"], c.simulation);
  }
  if (c.simulation.mechanisms.empty())
  {
    c.simulation.mechanisms = c.mechanisms;
  }
  if (n.has("stages"))
  {
    auto const st = n["stages"].array();
    for (std::size_t i = 0; i < st.size(); ++i)
    {
      auto const name = st[i].string();
      auto const it   = std::find(std::begin(kStageNames), std::end(kStageNames), name);
      if (it == std::end(kStageNames))
      {
        st[i].fail(fmt::format("unknown stage '{}'", name));
      }
      c.stages.push_back(static_cast<Stage>(it - std::begin(kStageNames)));
    }
  }
  else
  {
    c.stages = {Stage::ReducedForms, Stage::Dominance};
  }
  if (n.has("output"))
  {
    auto const o = n["output"];
    o.expect_object({"dir"});
    if (o.has("dir"))
    {
      c.outDir = o["dir"].string();
    }
  }
  if (n.has("tolerances"))
  {
    auto const t = n["tolerances"];
    t.expect_object({"verify"});
    if (t.has("verify"))
    {
      c.tol = t["verify"].number();
      if (!(*c.tol > 0.0))
      {
        t["verify"].fail("must be > 0");
      }
    }
  }
  bool const needsDutch = c.runs(Stage::Dominance) || c.runs(Stage::Outcomes);
  bool const hasDutch   = std::any_of(c.mechanisms.begin(), c.mechanisms.end(), is_dutch);
  bool const hasPosted  = !std::all_of(c.mechanisms.begin(), c.mechanisms.end(), is_dutch);
  if (needsDutch && !(hasDutch && hasPosted))
  {
    n["mechanisms"].fail("dominance and outcomes stages need a Dutch and a posted mechanism");
  }
  if (c.runs(Stage::Estimate) && !c.runs(Stage::Simulate))
  {
    n["stages"].fail("estimate needs the simulate stage");
  }
  if (c.runs(Stage::Simulate) && c.simulation.muFromPrimitives &&
      c.simulation.sim.meeting != MeetingProcess::PerDriver)
  {
    n["simulation"]["mu"].fail("\"primitives\" applies to the per-driver meeting process only");
  }
}

// Presets carry the reference parameter sets.
constexpr char const *kAnalyticBlock = R"(
  "primitives": {"A": 0.5, "beta": 0.5, "T": 30, "alpha": 0.2, "D": 80, "R": 80},
  "entry": {"Dbar": 80, "Rbar": 80, "cost": {"uniform": [0, 2]}, "value": {"uniform": [0, 1]},
            "lambda": 0.02, "kappa": 0.02},
  "mechanisms": [
    {"type": "dutch-exp", "p0": 0.7, "delta": 0.02},
    {"type": "posted-immediate", "pbar": 0.5, "phi": 0},
    {"type": "posted-batch", "pbar": 0.5}
  ],
  "grids": {"theta": [1], "lambda": [0.02, 0.05], "kappa": [0.02], "s": [0.5]},
  "stages": ["reduced-forms", "dominance", "equilibrium", "outcomes", "simulate", "estimate"],)";

std::string sim_variant(std::string_view name, std::string_view dutch, std::string_view imm)
{
  return fmt::format(R"({{
  "name": "{}",{}
  "simulation": {{
    "cells": [[20, 20], [20, 40], [40, 20], [40, 40]],
    "horizon": 10, "mu": 5, "meeting": "per-driver",
    "value": {{"lognormal": [2.5, 0.35]}}, "cost": {{"lognormal": [1.8, 0.40]}},
    "alpha": 0.2, "cost_acceptance": true, "sessions": 200, "seed": 20260101,
    "bootstrap": 1000, "lambda": 0.10,
    "mechanisms": [{}, {}, {{"type": "posted-batch", "pbar": 10}}]
  }}
}})",
                     name, kAnalyticBlock, dutch, imm);
}

constexpr char const *kAnalyticRegime = R"({
  "name": "analytic-regime",
  "primitives": {"A": 0.5, "beta": 0.5, "T": 0.08, "alpha": 0.2, "D": 500, "R": 10000},
  "mechanisms": [
    {"type": "dutch-exp", "p0": 0.7, "delta": 0.5},
    {"type": "posted-immediate", "pbar": 0.5, "phi": 0}
  ],
  "grids": {"theta": [20]},
  "stages": ["reduced-forms", "simulate", "estimate"],
  "simulation": {
    "cells": [[500, 10000]],
    "horizon": 0.08, "mu": "primitives", "meeting": "per-driver",
    "value": {"uniform": [0, 1]}, "cost": {"uniform": [0, 1]},
    "alpha": 0.2, "cost_acceptance": false, "sessions": 1000, "seed": 20260101,
    "bootstrap": 1000, "lambda": 0.0
  }
})";

std::string preset_text(std::string_view name)
{
  if (name == "baseline")
  {
    return sim_variant(name, R"({"type": "dutch-linear", "p0": 20, "slope": 1.5, "floor": 2})",
                       R"({"type": "posted-immediate", "pbar": 10, "phi": 0})");
  }
  if (name == "timing-only")
  {
    return sim_variant(name, R"({"type": "dutch-linear", "p0": 10.5, "slope": 0.1, "floor": 9.5})",
                       R"({"type": "posted-immediate", "pbar": 10, "phi": 0})");
  }
  if (name == "tradeoff")
  {
    return sim_variant(name, R"({"type": "dutch-linear", "p0": 9, "slope": 1.0, "floor": 5})",
                       R"({"type": "posted-immediate", "pbar": 10, "phi": 2})");
  }
  if (name == "analytic-regime")
  {
    return kAnalyticRegime;
  }
  throw InvalidInput(fmt::format("unknown preset '{}'", name));
}

}  // namespace

ConfigError::ConfigError(std::string path, std::string const &what)
  : InvalidInput(fmt::format("{}: {}", path.empty() ? "<root>" : path, what))
  , path_{std::move(path)}
{
}

std::string_view to_string(Stage s)
{
  return kStageNames[static_cast<int>(s)];
}

bool ScenarioConfig::runs(Stage s) const
{
  return std::find(stages.begin(), stages.end(), s) != stages.end();
}

std::vector<Mechanism> ScenarioConfig::expanded_mechanisms() const
{
  auto or_own = [](std::vector<double> const &g, double own) {
    return g.empty() ? std::vector<double>{own} : g;
  };
  std::vector<Mechanism> out;
  for (auto const &m : mechanisms)
  {
    if (auto const *d = std::get_if<DutchExp>(&m))
    {
      for (double rho : or_own(grids.rho, d->p0))
      {
        for (double delta : or_own(grids.delta, d->delta))
        {
          out.push_back(DutchExp{rho, delta});
        }
      }
    }
    else if (auto const *f = std::get_if<PostedImmediate>(&m))
    {
      for (double p : or_own(grids.pbar, f->pbar))
      {
        for (double phi : or_own(grids.phi, f->phi))
        {
          out.push_back(PostedImmediate{p, phi});
        }
      }
    }
    else if (auto const *b = std::get_if<PostedBatch>(&m))
    {
      for (double p : or_own(grids.pbar, b->pbar))
      {
        out.push_back(PostedBatch{p});
      }
    }
    else
    {
      out.push_back(m);
    }
  }
  return out;
}

SimConfig ScenarioConfig::sim_config() const
{
  SimConfig c = simulation.sim;
  if (simulation.muFromPrimitives)
  {
    Cell const &first = simulation.cells.front();
    c.mu              = contact_rates(primitives.at(first.D, first.R)).muD;
  }
  return c;
}

ScenarioConfig parse_config(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    // the library message carries line and column
    throw ConfigError("", e.what());
  }
  ScenarioConfig c;
  parse_root(Node{doc, ""}, c);
  return c;
}

ScenarioConfig load_config(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidInput(fmt::format("cannot open config file '{}'", path));
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(ScenarioConfig const &c)
{
  json j;
  j["name"]       = c.name;
  auto const &p   = c.primitives;
  j["primitives"] = {{"A", p.A}, {"beta", p.beta}, {"T", p.T}, {"alpha", p.alpha}, {"D", p.D}, {"R", p.R}};
  auto const &e   = c.entry;
  j["entry"]      = {{"Dbar", e.Dbar},
                     {"Rbar", e.Rbar},
                     {"cost", dump_distribution(e.costDist)},
                     {"value", dump_distribution(e.valueDist)},
                     {"lambda", e.lambda},
                     {"kappa", e.kappa}};
  j["mechanisms"] = json::array();
  for (auto const &m : c.mechanisms)
  {
    j["mechanisms"].push_back(dump_mechanism(m));
  }
  auto const &g = c.grids;
  j["grids"]    = {{"theta", g.theta}, {"delta", g.delta},   {"rho", g.rho},     {"phi", g.phi},
                   {"pbar", g.pbar},   {"lambda", g.lambda}, {"kappa", g.kappa}, {"s", g.s}};
  auto const &s = c.simulation;
  json        sim;
  json        cells = json::array();
  for (auto const &cell : s.cells)
  {
    cells.push_back({cell.D, cell.R});
  }
  sim["cells"]   = cells;
  sim["horizon"] = s.sim.horizon;
  if (s.muFromPrimitives)
  {
    sim["mu"] = "primitives";
  }
  else
  {
    sim["mu"] = s.sim.mu;
  }
  sim["meeting"]         = std::string(to_string(s.sim.meeting));
  sim["value"]           = dump_distribution(s.sim.valueDist);
  sim["cost"]            = dump_distribution(s.sim.costDist);
  sim["alpha"]           = s.sim.alpha;
  sim["cost_acceptance"] = s.sim.costAcceptance;
  sim["sessions"]        = s.sim.sessionsPerCell;
  sim["seed"]            = s.sim.baseSeed;
  sim["bootstrap"]       = s.bootstrap;
  sim["lambda"]          = s.lambda;
  sim["mechanisms"]      = json::array();
  for (auto const &m : s.mechanisms)
  {
    sim["mechanisms"].push_back(dump_mechanism(m));
  }
  j["simulation"] = sim;
  j["stages"]     = json::array();
  for (auto st : c.stages)
  {
    j["stages"].push_back(std::string(to_string(st)));
  }
  j["output"] = {{"dir", c.outDir}};
  if (c.tol)
  {
    j["tolerances"] = {{"verify", *c.tol}};
  }
  return j.dump(2) + "\n";
}

std::vector<std::string_view> preset_names()
{
  return {"baseline", "timing-only", "tradeoff", "analytic-regime"};
}

ScenarioConfig preset(std::string_view name)
{
  return parse_config(preset_text(name));
}

}  // namespace dutchclock
