#pragma once

#include <optional>
#include <string>
#include <vector>

#include "readykit/equilibrium.hpp"
#include "readykit/types.hpp"

namespace readykit {

/// Country blocs of the decoupling scenario. Countries not listed are neutral
/// (their trade costs never change).
struct BlocSpec {
  std::vector<std::string> alliance;
  std::vector<std::string> partners;
  std::vector<std::string> axis;

  /// Checks membership against the baseline and disjointness; returns the
  /// neutral remainder.
  std::vector<std::string> validate(const CountrySectorIndex& idx) const;
};

/// Per-year multipliers on the baseline trade elasticities, non-decreasing:
/// substitution is harder in the first years than at long horizons.
struct ElasticitySchedule {
  std::vector<double> thetaMultipliers;
  int horizon() const { return static_cast<int>(thetaMultipliers.size()); }
};

/// Course of action for within-bloc trade costs after the decoupling. Rapid
/// diversion front-loads cost cuts toward alliance/partner origins; moderate
/// diversion keeps them unchanged and relies on endogenous substitution.
struct PolicyPath {
  enum class Kind { rapid_diversion, moderate_diversion };
  Kind kind = Kind::moderate_diversion;
  std::vector<double> partnerCostCut;  // per year, in [0, 0.9]

  double cutForYear(int year) const;  // 1-based; sustains the last listed cut
  void validate() const;

  static PolicyPath moderate();
  static PolicyPath rapid(double frontCut, int horizon);
};

struct YearOutcome {
  int year = 0;  // 1-based
  Vector gneChangePct;            // per country
  Vector defenceOutputChangePct;  // per country
  double allianceGnePct = 0.0;    // GNE-weighted alliance aggregate
  double allianceDefenceOutputPct = 0.0;  // output-weighted alliance aggregate
  SolveDiagnostics diag;
};

struct TrajectoryResult {
  std::vector<YearOutcome> years;
  std::string defenceSector;
  std::vector<std::string> countries;
};

struct TrajectoryOptions {
  std::string defenceSector;
  SolverConfig solver;
};

/// Prohibitive costs on every alliance/partner <-> axis pair in both
/// directions, all sectors, intermediate and final; within-bloc cross-border
/// costs cut per the policy year; neutral and domestic pairs untouched.
TradeCostShock build_decoupling_shock(const ModelBaseline& b, const BlocSpec& blocs,
                                      const PolicyPath& policy, int year,
                                      double prohibitiveCap = 1e6);

/// Non-decreasing default multipliers from a short-run fraction to 1.0 at the
/// final horizon. Configurable defaults, not calibrated ground truth.
ElasticitySchedule elasticity_schedule_default(int horizon,
                                               double shortRunFraction = 0.5);

/// One comparative-statics solve per year from the same baseline; the
/// elasticity schedule is the only carrier of time. Aborts naming the year on
/// any failed solve.
TrajectoryResult run_trajectory(const ModelBaseline& b, const BlocSpec& blocs,
                                const PolicyPath& policy,
                                const ElasticitySchedule& schedule,
                                const TrajectoryOptions& opts);

struct PolicyComparison {
  TrajectoryResult rapid;
  TrajectoryResult moderate;
  // First year where rapid's alliance defence-output change exceeds
  // moderate's; empty when it never does.
  std::optional<int> crossoverYear;
};

PolicyComparison compare_policies(const ModelBaseline& b, const BlocSpec& blocs,
                                  const ElasticitySchedule& schedule,
                                  const PolicyPath& rapid,
                                  const PolicyPath& moderate,
                                  const TrajectoryOptions& opts);

/// Scenario file: `key = value` lines, `#` comments. Keys: alliance, partners,
/// axis (comma-separated country lists), horizon, theta_multipliers or
/// schedule_short_run, policy, cuts or cut_front, prohibitive_cap,
/// defence_sector.
struct ScenarioSpec {
  BlocSpec blocs;
  ElasticitySchedule schedule;
  PolicyPath policy;
  double prohibitiveCap = 1e6;
  std::string defenceSector;
};

ScenarioSpec load_scenario_file(const std::string& path);

/// Long format per Figures 3-4 plotting needs:
/// year,country,metric,value_pct with ALLIANCE aggregate rows.
void write_trajectory_csv(const TrajectoryResult& t, const std::string& path);

}  // namespace readykit
