#pragma once

#include <optional>
#include <string>
#include <vector>

#include "readykit/icio.hpp"
#include "readykit/types.hpp"

namespace readykit {

/// Baseline shares and parameters of the multi-country multi-sector trade
/// model. Flat tensor layouts (J countries, S sectors):
///   piInt(origin i, dest j, supply r, use s)  at ((j*S+s)*S+r)*J + i
///   piFin(origin i, dest j, supply r)         at (j*S+r)*J + i
///   gamma(country j, supply r, use s)         at (j*S+s)*S + r
///   alpha, output0                            at j*S + s
struct ModelBaseline {
  CountrySectorIndex index;
  Vector piInt;     // origin shares of intermediate purchases, sum_i = 1
  Vector piFin;     // origin shares of final purchases, sum_i = 1
  Vector gamma;     // input cost shares; labor share beta = 1 - sum_r gamma
  Vector alpha;     // final expenditure shares, sum_s = 1
  Vector theta;     // per-supply-sector trade elasticities, > 1
  Vector wageBill;  // w_j L_j
  Vector deficit;   // D_j, sums to ~0
  Vector output0;   // baseline gross output
  std::vector<std::string> warnings;

  int J() const { return index.countryCount(); }
  int S() const { return index.sectorCount(); }
  int js(int j, int s) const { return j * S() + s; }
  int jsr(int country, int supply, int use) const {
    return (country * S() + use) * S() + supply;
  }
  int intIdx(int origin, int dest, int supply, int use) const {
    return ((dest * S() + use) * S() + supply) * J() + origin;
  }
  int finIdx(int origin, int dest, int supply) const {
    return (dest * S() + supply) * J() + origin;
  }
  double beta(int j, int s) const {
    double g = 0.0;
    for (int r = 0; r < S(); ++r) g += gamma[jsr(j, r, s)];
    return 1.0 - g;
  }
};

/// Multiplicative trade-cost changes, 1 = no change. Same tensor layouts as
/// the baseline shares. Values in (0, prohibitiveCap].
struct TradeCostShock {
  Vector tauInt;
  Vector tauFin;
  double prohibitiveCap = 1e6;

  static TradeCostShock unit(const ModelBaseline& b);
  bool isUnit() const;
};

struct SolverConfig {
  double tolerance = 1e-8;        // outer: trade-balance residual / world GDP
  double innerTolerance = 1e-10;  // cost/price fixed point
  double damping = 0.5;           // weight on the wage update
  int maxIterations = 10000;
  int maxInnerIterations = 5000;
  // Numeraire: empty = world wage bill held fixed; otherwise a country code
  // whose wage change is pinned to 1.
  std::string numeraireCountry;
  enum class DeficitMode { fixed, zero } deficitMode = DeficitMode::fixed;
  double prohibitiveCap = 1e6;
  double logDomainThreshold = 1e3;  // cells with larger tau-hat use log-sum-exp
};

struct SolveDiagnostics {
  int iterations = 0;
  double worstResidual = 0.0;  // relative to world GDP
  bool converged = false;
};

/// Counterfactual in proportional changes: hats on wages, costs and prices,
/// counterfactual shares and nominal outputs, and deflated real changes.
struct EquilibriumChange {
  CountrySectorIndex index;
  Vector wageHat;           // J
  Vector costHat;           // J*S at j*S+s
  Vector priceIntHat;       // (j, supply r, use s) at (j*S+s)*S+r
  Vector priceFinHat;       // (j, supply r) at j*S+r
  Vector priceConsHat;      // J: prod_s priceFinHat^alpha
  Vector piIntNew;          // counterfactual shares, baseline layout
  Vector piFinNew;
  Vector expenditure;       // X' at j*S+s
  Vector output;            // Y' at j*S+s
  Vector realGneChange;     // J, fractional change
  Vector realOutputChange;  // J*S, fractional change (NaN when output0 = 0)
  SolveDiagnostics diag;
};

struct BaselineReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Shares and parameters from an ICIO table. Wage bills and deficits default
/// to the table's implied labor income and final-spending gaps, which keeps
/// the baseline an exact fixed point of the output system.
ModelBaseline baseline_from_icio(const IcioTable& t, const Vector& theta,
                                 const std::optional<Vector>& wageBills = {},
                                 const std::optional<Vector>& deficits = {});

/// Checks every baseline invariant; report-only.
BaselineReport validate_baseline(const ModelBaseline& b);

/// Solves the counterfactual fixed point for a trade-cost shock. Throws
/// SolverError on non-convergence (message carries the worst residual).
EquilibriumChange solve_hat(const ModelBaseline& b, const TradeCostShock& shock,
                            const SolverConfig& cfg = {});

/// Real GNE change for a country, percent.
double gne_change(const EquilibriumChange& e, const std::string& country);

/// Real gross output change of a (country, sector), percent.
double sector_output_change(const EquilibriumChange& e, const std::string& country,
                            const std::string& sector);

}  // namespace readykit
