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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dutchclock/types.hpp"

namespace dutchclock {

/// How meeting events are generated.
///   PerDriver: each active driver meets at rate mu; the rider is uniform
///              among active riders.
///   Aggregate: one meeting stream at rate mu for the whole market; the pair
///              is uniform over active x active.
enum class MeetingProcess
{
  PerDriver,
  Aggregate
};

std::string_view to_string(MeetingProcess m);

struct SimConfig
{
  int            D       = 20;
  int            R       = 20;
  double         horizon = 10.0;
  double         mu      = 5.0;
  MeetingProcess meeting = MeetingProcess::PerDriver;
  Distribution   valueDist{Lognormal{2.5, 0.35}};
  Distribution   costDist{Lognormal{1.8, 0.40}};
  double         alpha = 0.2;
  // Drivers turn down prices whose net payout is below their cost.
  bool          costAcceptance  = true;
  int           sessionsPerCell = 200;
  std::uint64_t baseSeed        = 20260101;
};

void validate(SimConfig const &cfg);

// ---------------------------------------------------------------------------
// Seeds and common random numbers

std::uint64_t splitmix64(std::uint64_t x);

/// Per-(cell, session) seed. The mechanism never enters.
std::uint64_t session_seed(std::uint64_t baseSeed, int D, int R, int sessionIndex);

/// Order-sensitive FNV-1a over raw bytes.
class Fnv1a
{
public:
  void          add(void const *data, std::size_t n);
  void          add(double x) { add(&x, sizeof x); }
  std::uint64_t value() const { return h_; }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct MeetingDraw
{
  double t   = 0.0;
  double uD  = 0.0;  // driver selector
  double uR  = 0.0;  // rider selector
  double xi1 = 0.0;  // unit-mean exponential, scaled by the friction mean
};

/// Every exogenous draw a session can consume. Built from (cfg, seed) only.
struct SessionDraws
{
  std::vector<double>      values;  // one per rider
  std::vector<double>      costs;   // one per driver
  std::vector<MeetingDraw> meetings;

  std::uint64_t hash() const;
};

SessionDraws draw_session(SimConfig const &cfg, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Records

struct AgentOutcome
{
  double trait   = 0.0;  // value for riders, cost for drivers
  bool   matched = false;
  double tau     = 0.0;
  double price   = 0.0;  // rider price or driver payment; 0 when unmatched
};

struct SessionRecord
{
  std::string               mechanism;  // short name
  int                       D = 0, R = 0;
  std::uint64_t             seed      = 0;
  std::uint64_t             drawHash  = 0;
  int                       sessionId = 0;
  int                       m         = 0;
  std::vector<AgentOutcome> drivers;
  std::vector<AgentOutcome> riders;
};

SessionRecord run_session(SimConfig const &cfg, SessionDraws const &draws, Mechanism const &mech);
SessionRecord run_session(SimConfig const &cfg, std::uint64_t seed, Mechanism const &mech);

/// Checks the accounting invariants; returns an empty string when they hold.
std::string check_record(SessionRecord const &rec, double alpha, double horizon);

// ---------------------------------------------------------------------------
// Grids

struct Cell
{
  int D = 0;
  int R = 0;
};

struct CellRecords
{
  Cell cell;
  // sessions[k][s]: mechanism k, session s
  std::vector<std::vector<SessionRecord>> sessions;
};

/// OpenMP over (cell, session); each task owns its draws.
std::vector<CellRecords> run_grid(SimConfig const &cfg, std::vector<Cell> const &grid,
                                  std::vector<Mechanism> const &mechs);
std::vector<CellRecords> run_grid_serial(SimConfig const &cfg, std::vector<Cell> const &grid,
                                         std::vector<Mechanism> const &mechs);

// ---------------------------------------------------------------------------
// Equilibrium-embedded outer loop

struct SimEquilibriumOptions
{
  double omega         = 0.5;
  int    maxOuter      = 50;
  int    sessions      = 200;  // per outer iterate
  double stepTolerance = 1.0;  // agents
  // When set, PerDriver mu follows A * (R/D)^beta at each iterate.
  bool   scaleMeeting = true;
  double A            = 0.5;
  double beta         = 0.5;
  int    bootstrap    = 200;
};

struct SimEquilibriumResult
{
  double                             Dstar = 0.0, Rstar = 0.0;
  double                             seD = 0.0, seR = 0.0;  // of the final map evaluation
  // mean over the second half of the trajectory; smooths Monte Carlo noise
  double                             tailD = 0.0, tailR = 0.0;
  int                                iterations = 0;
  bool                               converged  = false;
  std::vector<std::array<double, 2>> trajectory;
  std::string                        diagnostic;
};

SimEquilibriumResult simulate_equilibrium(SimConfig const &cfg, Mechanism const &mech,
                                          EntryPrimitives const &entry,
                                          SimEquilibriumOptions const &opt = {});

// ---------------------------------------------------------------------------
// CSV logs

/// One row per agent per session. Doubles use the shortest round-trip form.
void write_session_log(std::ostream &os, std::vector<SessionRecord> const &recs);
std::vector<SessionRecord> read_session_log(std::istream &is);

/// One row per session.
void write_session_summary(std::ostream &os, std::vector<SessionRecord> const &recs);

}  // namespace dutchclock
