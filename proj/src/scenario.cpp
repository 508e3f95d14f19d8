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

#include "dutchclock/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "dutchclock/outcomes.hpp"
#include "dutchclock/tables.hpp"

namespace dutchclock {
namespace {

namespace fs = std::filesystem;

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(fs::path const &dir, std::string const &name)
{
  std::ofstream os(dir / name, std::ios::binary);
  if (!os)
  {
    throw InvalidInput(fmt::format("cannot write {}", (dir / name).string()));
  }
  return os;
}

void save(fs::path const &dir, Table const &t, std::vector<std::string> &files)
{
  auto os = open_out(dir, t.name + ".csv");
  write_csv(os, t);
  files.push_back(t.name + ".csv");
}

std::string yes_no(bool b)
{
  return b ? "YES" : "no";
}

double or_nan(std::optional<double> const &x)
{
  return x ? *x : kNA;
}

std::vector<double> thetas(ScenarioConfig const &cfg)
{
  return cfg.grids.theta.empty() ? std::vector<double>{cfg.primitives.theta()} : cfg.grids.theta;
}

MarketPrimitives at_theta(ScenarioConfig const &cfg, double theta)
{
  return cfg.primitives.at(cfg.primitives.D, cfg.primitives.D * theta);
}

Table reduced_forms_table(ScenarioConfig const &cfg, std::vector<Mechanism> const &mechs)
{
  Table t{"reduced_forms",
          {"mechanism", "spec", "theta", "D", "R", "q", "pi", "pin", "tau", "tauR", "qR", "m",
           "pbar", "flags"},
          {},
          {}};
  for (double th : thetas(cfg))
  {
    auto const prim = at_theta(cfg, th);
    for (auto const &m : mechs)
    {
      auto const rf = reduced_form(prim, m, cfg.entry.valueDist);
      t.rows.push_back({std::string(short_name(m)), describe(m), th, prim.D, prim.R, rf.q,
                        or_nan(rf.pi), rf.pi ? *rf.pi / (1.0 - prim.alpha) : kNA, rf.tau, rf.tauR,
                        rf.qR, rf.m, or_nan(rf.pbarM), rf.flags()});
    }
  }
  return t;
}

Table dominance_table(ScenarioConfig const &cfg, std::vector<Mechanism> const &mechs)
{
  Table t{"dominance",
          {"dutch", "posted", "theta", "side", "gap_payment", "gap_timing", "case", "threshold",
           "waiting_cost", "dominates"},
          {},
          {}};
  for (double th : thetas(cfg))
  {
    auto const prim = at_theta(cfg, th);
    for (auto const &da : mechs)
    {
      if (!is_dutch(da))
      {
        continue;
      }
      auto const rfDA = reduced_form(prim, da, cfg.entry.valueDist);
      for (auto const &fp : mechs)
      {
        if (is_dutch(fp))
        {
          continue;
        }
        auto const b  = kind(fp) == MechanismKind::Batch ? Benchmark::Batch : Benchmark::Immediate;
        auto const g  = gaps(rfDA, reduced_form(prim, fp, cfg.entry.valueDist));
        auto       add = [&](char const *side, double a, double bgap, DominanceVerdict const &v,
                       std::vector<double> const &ws) {
          for (double w : ws)
          {
            t.rows.push_back({describe(da), describe(fp), th, std::string(side), a, bgap,
                              std::string(to_string(v.kase)), or_nan(v.threshold), w,
                              yes_no(v.dominates_at(w))});
          }
        };
        add("driver", g.deltaPi, g.deltaTau, classify_driver(g, b), cfg.grids.lambda);
        if (std::isfinite(g.riderA) && std::isfinite(g.riderB))
        {
          add("rider", g.riderA, g.riderB, classify_rider(g, b), cfg.grids.kappa);
        }
      }
    }
  }
  return t;
}

struct Solved
{
  Mechanism         mech;
  EquilibriumResult eq;
  ReducedFormBundle rf;
  std::string       error;
};

std::vector<Solved> solve_all(ScenarioConfig const &cfg, std::vector<Mechanism> const &mechs)
{
  std::vector<Solved> out;
  for (auto const &m : mechs)
  {
    Solved s{m, {}, {}, {}};
    try
    {
      s.eq = solve_two_sided_robust(cfg.primitives, m, cfg.entry);
      if (!s.eq.collapsed)
      {
        s.rf = reduced_form(cfg.primitives.at(s.eq.Dstar, s.eq.Rstar), m, cfg.entry.valueDist);
      }
    }
    catch (NumericalError const &e)
    {
      s.error = e.what();
    }
    out.push_back(std::move(s));
  }
  return out;
}

Table equilibrium_table(std::vector<Solved> const &solved)
{
  Table t{"equilibrium",
          {"mechanism", "spec", "Dstar", "Rstar", "iterations", "residual", "omega", "collapsed",
           "q", "m", "pbar", "note"},
          {},
          {}};
  for (auto const &s : solved)
  {
    bool const ok = s.error.empty();
    t.rows.push_back({std::string(short_name(s.mech)), describe(s.mech), ok ? s.eq.Dstar : kNA,
                      ok ? s.eq.Rstar : kNA, static_cast<double>(s.eq.iterations),
                      ok ? s.eq.residual : kNA, ok ? s.eq.omega : kNA,
                      yes_no(s.eq.collapsed), s.rf.q, s.rf.m, or_nan(s.rf.pbarM), s.error});
  }
  return t;
}

Table outcomes_table(ScenarioConfig const &cfg, std::vector<Solved> const &solved)
{
  Table t{"outcomes",
          {"dutch", "posted", "s", "rev_DA", "rev_FP", "rev_ratio", "entry_gain",
           "match_rate_ratio", "price_gain", "W_DA", "W_FP", "delta_W", "gain_tau", "gain_m",
           "welfare_case", "s_threshold", "note"},
          {},
          {}};
  for (auto const &a : solved)
  {
    if (!is_dutch(a.mech))
    {
      continue;
    }
    for (auto const &f : solved)
    {
      if (is_dutch(f.mech))
      {
        continue;
      }
      for (double s : cfg.grids.s)
      {
        std::vector<TableValue> row{describe(a.mech), describe(f.mech), s};
        if (!a.error.empty() || !f.error.empty())
        {
          row.insert(row.end(), 13, kNA);
          row.emplace_back(std::string("equilibrium not found"));
          t.rows.push_back(std::move(row));
          continue;
        }
        std::string note;
        if (a.eq.collapsed || f.eq.collapsed)
        {
          row.insert(row.end(), 6, kNA);
          note = "collapsed equilibrium";
        }
        else
        {
          auto const r = revenue_report(cfg.primitives.alpha, a.eq.Dstar, a.rf, f.eq.Dstar, f.rf);
          row.insert(row.end(), {r.revDA, r.revFP, r.ratio, r.entryGain, r.matchRateRatio, r.priceGain});
        }
        auto const w =
            welfare_equilibrium(a.eq, a.rf, f.eq, f.rf, cfg.entry.lambda, cfg.entry.kappa, s);
        row.insert(row.end(), {w.WDA, w.WFP, w.deltaW(), w.driverWaitTerm + w.riderWaitTerm,
                               w.volumeTerm});
        row.emplace_back(std::string(to_string(w.kase)));
        row.emplace_back(or_nan(w.threshold));
        row.emplace_back(note);
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

}  // namespace

std::vector<CellEstimates> estimate_cells(std::vector<SessionRecord> const &recs,
                                          BootstrapOptions const &opt)
{
  std::vector<std::string> mechs;
  std::vector<Cell>        cells;
  std::map<std::pair<int, int>, std::map<std::string, std::vector<SessionRecord const *>>> groups;
  for (auto const &r : recs)
  {
    if (std::find(mechs.begin(), mechs.end(), r.mechanism) == mechs.end())
    {
      mechs.push_back(r.mechanism);
    }
    auto &g = groups[{r.D, r.R}];
    if (g.empty())
    {
      cells.push_back({r.D, r.R});
    }
    g[r.mechanism].push_back(&r);
  }
  std::vector<CellEstimates> out;
  for (auto const &c : cells)
  {
    CellEstimates ce{c, {}};
    auto const   &g = groups[{c.D, c.R}];
    for (auto const &m : mechs)
    {
      auto const it = g.find(m);
      if (it != g.end())
      {
        ce.bundles.push_back(estimate_bundle(it->second, opt));
      }
    }
    out.push_back(std::move(ce));
  }
  return out;
}

std::vector<std::string> write_estimate_outputs(std::vector<CellEstimates> const &cells,
                                                double lambda, fs::path const &dir)
{
  std::vector<std::string> files;
  {
    std::vector<EstimatedBundle> all;
    for (auto const &c : cells)
    {
      all.insert(all.end(), c.bundles.begin(), c.bundles.end());
    }
    auto os = open_out(dir, "cells.csv");
    write_estimates(os, all);
    files.push_back("cells.csv");
  }

  Table dom{"sim_dominance", {"D", "R", "benchmark", "lambda", "delta", "se", "dominates"}, {}, {}};
  Table lam{"sim_lambda",
            {"D", "R", "benchmark", "payment_gap", "timing_gap", "case", "lambda_star"},
            {},
            {}};
  std::map<int, std::vector<std::pair<int, EstimatedBundle const *>>> byR;  // Dutch bundles
  for (auto const &c : cells)
  {
    EstimatedBundle const *da = nullptr;
    for (auto const &b : c.bundles)
    {
      if (b.mechanism == "DA")
      {
        da = &b;
      }
    }
    if (!da)
    {
      continue;
    }
    byR[c.cell.R].push_back({c.cell.D, da});
    for (auto const &b : c.bundles)
    {
      if (&b == da)
      {
        continue;
      }
      auto const d = dominance_test(*da, b, lambda);
      dom.rows.push_back({static_cast<double>(c.cell.D), static_cast<double>(c.cell.R), b.mechanism,
                          lambda, d.margin, d.se, yes_no(d.dominates())});
      auto const l = lambda_star_hat(*da, b);
      lam.rows.push_back({static_cast<double>(c.cell.D), static_cast<double>(c.cell.R), b.mechanism,
                          l.paymentGap, l.timingGap,
                          std::string(to_string(l.report.verdict.kase)), l.display()});
    }
  }
  save(dir, dom, files);
  save(dir, lam, files);

  Table mono{"monotonicity", {"R", "D_from", "D_to", "cutoff_diff", "cutoff_se", "volume_diff",
                              "volume_se", "congestion", "volume"}, {}, {}};
  for (auto &[R, list] : byR)
  {
    if (list.size() < 3)
    {
      continue;
    }
    std::sort(list.begin(), list.end(),
              [](auto const &a, auto const &b) { return a.first < b.first; });
    std::vector<EstimatedBundle> ordered;
    for (auto const &[D, b] : list)
    {
      ordered.push_back(*b);
    }
    auto const rep = monotonicity_test(ordered, lambda);
    for (std::size_t k = 0; k < rep.cutoffDiffs.size(); ++k)
    {
      mono.rows.push_back({static_cast<double>(R), static_cast<double>(list[k].first),
                           static_cast<double>(list[k + 1].first), rep.cutoffDiffs[k],
                           rep.cutoffSe[k], rep.volumeDiffs[k], rep.volumeSe[k],
                           std::string(to_string(rep.congestion)), std::string(to_string(rep.volume))});
    }
  }
  if (!mono.rows.empty())
  {
    save(dir, mono, files);
  }
  return files;
}

std::vector<std::string> run_scenario(ScenarioConfig const &cfg, fs::path const &dir)
{
  fs::create_directories(dir);
  std::vector<std::string> files;
  {
    auto os = open_out(dir, "config.json");
    os << dump_config(cfg);
    files.push_back("config.json");
  }
  auto const mechs = cfg.expanded_mechanisms();
  if (cfg.runs(Stage::ReducedForms))
  {
    save(dir, reduced_forms_table(cfg, mechs), files);
  }
  if (cfg.runs(Stage::Dominance))
  {
    save(dir, dominance_table(cfg, mechs), files);
  }
  if (cfg.runs(Stage::Equilibrium) || cfg.runs(Stage::Outcomes))
  {
    auto const solved = solve_all(cfg, mechs);
    if (cfg.runs(Stage::Equilibrium))
    {
      save(dir, equilibrium_table(solved), files);
    }
    if (cfg.runs(Stage::Outcomes))
    {
      save(dir, outcomes_table(cfg, solved), files);
    }
  }
  if (cfg.runs(Stage::Simulate))
  {
    auto const cells = run_grid(cfg.sim_config(), cfg.simulation.cells, cfg.simulation.mechanisms);
    std::vector<SessionRecord> recs;
    for (auto const &c : cells)
    {
      for (auto const &m : c.sessions)
      {
        recs.insert(recs.end(), m.begin(), m.end());
      }
    }
    {
      auto os = open_out(dir, "sessions.csv");
      write_session_log(os, recs);
      files.push_back("sessions.csv");
    }
    {
      auto os = open_out(dir, "session_summary.csv");
      write_session_summary(os, recs);
      files.push_back("session_summary.csv");
    }
    BootstrapOptions const bo{cfg.simulation.bootstrap, cfg.simulation.sim.baseSeed};
    auto const             est = estimate_cells(recs, bo);
    if (cfg.runs(Stage::Estimate))
    {
      auto more = write_estimate_outputs(est, cfg.simulation.lambda, dir);
      files.insert(files.end(), more.begin(), more.end());
    }
    else
    {
      std::vector<EstimatedBundle> all;
      for (auto const &c : est)
      {
        all.insert(all.end(), c.bundles.begin(), c.bundles.end());
      }
      auto os = open_out(dir, "cells.csv");
      write_estimates(os, all);
      files.push_back("cells.csv");
    }
  }
  return files;
}

}  // namespace dutchclock
