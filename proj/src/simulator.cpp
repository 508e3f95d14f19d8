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

#include "dutchclock/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "dutchclock/microfoundation.hpp"

namespace dutchclock {
namespace {

double exp_draw(std::mt19937_64 &rng)
{
  return -std::log(uniform_open01(rng));
}

std::size_t pick(double u, std::size_t n)
{
  return std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
}

// Active set with O(1) removal; order depends only on the removal history.
class ActiveSet
{
public:
  explicit ActiveSet(int n)
    : items_(n)
    , where_(n)
  {
    for (int i = 0; i < n; ++i)
    {
      items_[i] = where_[i] = i;
    }
  }
  std::size_t size() const { return items_.size(); }
  bool        empty() const { return items_.empty(); }
  int         at(std::size_t k) const { return items_[k]; }
  bool        contains(int id) const { return where_[id] >= 0; }
  void        remove(int id)
  {
    int const k    = where_[id];
    int const last = items_.back();
    items_[k]      = last;
    where_[last]   = k;
    items_.pop_back();
    where_[id] = -1;
  }

private:
  std::vector<int> items_;
  std::vector<int> where_;
};

std::string fmt_double(double x)
{
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, std::size_t line)
{
  double v = 0.0;
  auto   r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
  {
    throw InvalidInput(fmt::format("session log line {}: bad number '{}'", line, s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t                   start = 0;
  while (true)
  {
    auto const pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos)
    {
      return out;
    }
    start = pos + 1;
  }
}

constexpr char const *kLogHeader =
    "session_id,mechanism,side,agent_id,value_or_cost,matched,tau,price_or_payment";

}  // namespace

std::string_view to_string(MeetingProcess m)
{
  return m == MeetingProcess::PerDriver ? "per-driver" : "aggregate";
}

void validate(SimConfig const &cfg)
{
  if (cfg.D < 1 || cfg.R < 1)
  {
    throw InvalidInput(fmt::format("pool sizes must be >= 1, got D={} R={}", cfg.D, cfg.R));
  }
  if (!(cfg.mu > 0.0) || !(cfg.horizon > 0.0))
  {
    throw InvalidInput("meeting rate and horizon must be > 0");
  }
  if (cfg.sessionsPerCell < 1)
  {
    throw InvalidInput("sessionsPerCell must be >= 1");
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0))
  {
    throw InvalidInput(fmt::format("commission must lie in [0,1), got {}", cfg.alpha));
  }
}

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void Fnv1a::add(void const *data, std::size_t n)
{
  auto const *p = static_cast<unsigned char const *>(data);
  for (std::size_t i = 0; i < n; ++i)
  {
    h_ ^= p[i];
    h_ *= 0x100000001b3ULL;
  }
}

std::uint64_t session_seed(std::uint64_t baseSeed, int D, int R, int sessionIndex)
{
  Fnv1a h;
  h.add(&baseSeed, sizeof baseSeed);
  h.add(&D, sizeof D);
  h.add(&R, sizeof R);
  h.add(&sessionIndex, sizeof sessionIndex);
  return splitmix64(h.value());
}

std::uint64_t SessionDraws::hash() const
{
  Fnv1a h;
  h.add(values.data(), values.size() * sizeof(double));
  h.add(costs.data(), costs.size() * sizeof(double));
  for (auto const &m : meetings)
  {
    h.add(m.t);
    h.add(m.uD);
    h.add(m.uR);
    h.add(m.xi1);
  }
  return h.value();
}

SessionDraws draw_session(SimConfig const &cfg, std::uint64_t seed)
{
  validate(cfg);
  std::mt19937_64 rng(splitmix64(seed));
  SessionDraws    d;
  d.values.resize(cfg.R);
  d.costs.resize(cfg.D);
  for (auto &v : d.values)
  {
    v = cfg.valueDist.sample(rng);
  }
  for (auto &c : d.costs)
  {
    c = cfg.costDist.sample(rng);
  }
  double const rate = cfg.meeting == MeetingProcess::PerDriver ? cfg.mu * cfg.D : cfg.mu;
  d.meetings.reserve(static_cast<std::size_t>(rate * cfg.horizon * 1.2) + 16);
  double t = 0.0;
  while (true)
  {
    t += exp_draw(rng) / rate;
    if (t > cfg.horizon)
    {
      break;
    }
    MeetingDraw m;
    m.t   = t;
    m.uD  = uniform_open01(rng);
    m.uR  = uniform_open01(rng);
    m.xi1 = exp_draw(rng);
    d.meetings.push_back(m);
  }
  return d;
}

SessionRecord run_session(SimConfig const &cfg, SessionDraws const &draws, Mechanism const &mech)
{
  validate(mech);
  int const  D     = static_cast<int>(draws.costs.size());
  int const  R     = static_cast<int>(draws.values.size());
  bool const batch = kind(mech) == MechanismKind::Batch;
  double const phi = friction(mech);

  SessionRecord rec;
  rec.mechanism = std::string(short_name(mech));
  rec.D         = D;
  rec.R         = R;
  rec.drawHash  = draws.hash();
  rec.drivers.resize(D);
  rec.riders.resize(R);
  for (int j = 0; j < D; ++j)
  {
    rec.drivers[j] = {draws.costs[j], false, cfg.horizon, 0.0};
  }
  for (int i = 0; i < R; ++i)
  {
    rec.riders[i] = {draws.values[i], false, cfg.horizon, 0.0};
  }

  ActiveSet drivers(D), riders(R);
  for (auto const &ev : draws.meetings)
  {
    if (drivers.empty() || riders.empty())
    {
      break;
    }
    int j = 0;
    if (cfg.meeting == MeetingProcess::PerDriver)
    {
      j = static_cast<int>(pick(ev.uD, static_cast<std::size_t>(D)));
      if (!drivers.contains(j))
      {
        continue;  // the meeting belonged to a driver who already left
      }
    }
    else
    {
      j = drivers.at(pick(ev.uD, drivers.size()));
    }
    int const    i      = riders.at(pick(ev.uR, riders.size()));
    double const p      = price_path(mech, ev.t);
    double const payout = (1.0 - cfg.alpha) * p;
    bool const   riderOk  = draws.values[i] >= p;
    bool const   driverOk = !cfg.costAcceptance || payout >= draws.costs[j];
    if (!(riderOk && driverOk))
    {
      continue;
    }
    double const tExec = batch ? cfg.horizon : ev.t + phi * ev.xi1;
    rec.drivers[j]     = {draws.costs[j], true, tExec, payout};
    rec.riders[i]      = {draws.values[i], true, tExec, p};
    drivers.remove(j);
    riders.remove(i);
    ++rec.m;
  }
  return rec;
}

SessionRecord run_session(SimConfig const &cfg, std::uint64_t seed, Mechanism const &mech)
{
  auto rec = run_session(cfg, draw_session(cfg, seed), mech);
  rec.seed = seed;
  return rec;
}

std::string check_record(SessionRecord const &rec, double alpha, double horizon)
{
  int                 md = 0, mr = 0;
  std::vector<double> pay, price;
  for (auto const &a : rec.drivers)
  {
    if (!a.matched)
    {
      if (a.tau != horizon)
      {
        return "unmatched driver with tau != horizon";
      }
      continue;
    }
    ++md;
    pay.push_back(a.price);
    if (rec.mechanism == "FPb" && a.tau != horizon)
    {
      return "batch execution before the horizon";
    }
    if (rec.mechanism == "DA" && a.tau > horizon)
    {
      return "Dutch execution after the horizon";
    }
  }
  for (auto const &a : rec.riders)
  {
    if (a.matched)
    {
      ++mr;
      price.push_back((1.0 - alpha) * a.price);
    }
    else if (a.tau != horizon)
    {
      return "unmatched rider with tau != horizon";
    }
  }
  if (md != rec.m || mr != rec.m)
  {
    return fmt::format("match counts disagree: m={} drivers={} riders={}", rec.m, md, mr);
  }
  std::sort(pay.begin(), pay.end());
  std::sort(price.begin(), price.end());
  if (pay != price)
  {
    return "driver payments do not reconcile with rider prices";
  }
  return {};
}

namespace {

std::vector<CellRecords> allocate(SimConfig const &cfg, std::vector<Cell> const &grid,
                                  std::vector<Mechanism> const &mechs)
{
  if (grid.empty() || mechs.empty())
  {
    throw InvalidInput("run_grid needs a non-empty grid and mechanism list");
  }
  validate(cfg);
  std::vector<CellRecords> out(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c)
  {
    out[c].cell = grid[c];
    out[c].sessions.assign(mechs.size(), std::vector<SessionRecord>(cfg.sessionsPerCell));
  }
  return out;
}

void run_task(SimConfig const &base, std::vector<Mechanism> const &mechs, CellRecords &cell,
              int cellIndex, int s)
{
  SimConfig cfg      = base;
  cfg.D              = cell.cell.D;
  cfg.R              = cell.cell.R;
  auto const   seed  = session_seed(cfg.baseSeed, cfg.D, cfg.R, s);
  auto const   draws = draw_session(cfg, seed);
  for (std::size_t k = 0; k < mechs.size(); ++k)
  {
    auto rec      = run_session(cfg, draws, mechs[k]);
    rec.seed      = seed;
    rec.sessionId = cellIndex * cfg.sessionsPerCell + s;
    cell.sessions[k][s] = std::move(rec);
  }
}

}  // namespace

std::vector<CellRecords> run_grid(SimConfig const &cfg, std::vector<Cell> const &grid,
                                  std::vector<Mechanism> const &mechs)
{
  auto      out   = allocate(cfg, grid, mechs);
  int const cells = static_cast<int>(grid.size());
  int const total = cells * cfg.sessionsPerCell;
#pragma omp parallel for schedule(dynamic)
  for (int task = 0; task < total; ++task)
  {
    int const c = task / cfg.sessionsPerCell;
    run_task(cfg, mechs, out[c], c, task % cfg.sessionsPerCell);
  }
  return out;
}

std::vector<CellRecords> run_grid_serial(SimConfig const &cfg, std::vector<Cell> const &grid,
                                         std::vector<Mechanism> const &mechs)
{
  auto out = allocate(cfg, grid, mechs);
  for (std::size_t c = 0; c < grid.size(); ++c)
  {
    for (int s = 0; s < cfg.sessionsPerCell; ++s)
    {
      run_task(cfg, mechs, out[c], static_cast<int>(c), s);
    }
  }
  return out;
}

void write_session_log(std::ostream &os, std::vector<SessionRecord> const &recs)
{
  os << kLogHeader << '\n';
  auto row = [&](SessionRecord const &r, char const *side, std::size_t id, AgentOutcome const &a) {
    os << r.sessionId << ',' << r.mechanism << ',' << side << ',' << id << ','
       << fmt_double(a.trait) << ',' << (a.matched ? 1 : 0) << ',' << fmt_double(a.tau) << ','
       << fmt_double(a.price) << '\n';
  };
  for (auto const &r : recs)
  {
    for (std::size_t j = 0; j < r.drivers.size(); ++j)
    {
      row(r, "driver", j, r.drivers[j]);
    }
    for (std::size_t i = 0; i < r.riders.size(); ++i)
    {
      row(r, "rider", i, r.riders[i]);
    }
  }
}

std::vector<SessionRecord> read_session_log(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line) || line != kLogHeader)
  {
    throw InvalidInput("session log: missing or unexpected header");
  }
  std::vector<SessionRecord>               out;
  std::map<std::pair<int, std::string>, std::size_t> index;
  std::size_t                              lineNo = 1;
  while (std::getline(is, line))
  {
    ++lineNo;
    if (line.empty())
    {
      continue;
    }
    auto const f = split(line);
    if (f.size() != 8)
    {
      throw InvalidInput(fmt::format("session log line {}: expected 8 fields, got {}", lineNo,
                                     f.size()));
    }
    int const sid = static_cast<int>(parse_double(f[0], lineNo));
    auto      key = std::make_pair(sid, std::string(f[1]));
    auto      it  = index.find(key);
    if (it == index.end())
    {
      it = index.emplace(key, out.size()).first;
      SessionRecord r;
      r.sessionId = sid;
      r.mechanism = key.second;
      out.push_back(std::move(r));
    }
    auto        &rec = out[it->second];
    AgentOutcome a{parse_double(f[4], lineNo), f[5] == "1", parse_double(f[6], lineNo),
                   parse_double(f[7], lineNo)};
    if (f[2] == "driver")
    {
      rec.drivers.push_back(a);
      rec.m += a.matched ? 1 : 0;
    }
    else if (f[2] == "rider")
    {
      rec.riders.push_back(a);
    }
    else
    {
      throw InvalidInput(fmt::format("session log line {}: unknown side '{}'", lineNo, f[2]));
    }
  }
  for (auto &r : out)
  {
    r.D = static_cast<int>(r.drivers.size());
    r.R = static_cast<int>(r.riders.size());
  }
  return out;
}

void write_session_summary(std::ostream &os, std::vector<SessionRecord> const &recs)
{
  os << "session_id,mechanism,D,R,seed,m,draw_hash\n";
  for (auto const &r : recs)
  {
    os << r.sessionId << ',' << r.mechanism << ',' << r.D << ',' << r.R << ',' << r.seed << ','
       << r.m << ',' << fmt::format("{:016x}", r.drawHash) << '\n';
  }
}

}  // namespace dutchclock
