#pragma once

#include "readykit/equilibrium.hpp"
#include "readykit/types.hpp"

namespace readykit {

/// Primitives for the desk-scale levels model (J*S <= 16). Constants of the
/// cost and price-index equations are absorbed into units. sigma is recorded
/// and validated (sigma < 1 + theta) but plays no role in equilibrium shares.
struct LevelsPrimitives {
  CountrySectorIndex index;
  Vector technology;  // T(j,s) > 0, at j*S+s
  Vector tauInt;      // trade-cost levels, baseline piInt layout
  Vector tauFin;      // baseline piFin layout
  Vector labor;       // L(j) > 0
  Vector gamma;       // as in ModelBaseline
  Vector alpha;
  Vector theta;
  Vector sigma;  // per sector

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

struct LevelsEquilibrium {
  Vector wage;      // J, normalized so sum_j w_j L_j = sum_j L_j
  Vector cost;      // J*S
  Vector priceInt;  // (j, supply r, use s) at (j*S+s)*S+r
  Vector priceFin;  // (j, supply r) at j*S+r
  Vector piInt;     // shares, baseline layout
  Vector piFin;
  Vector output;       // nominal gross output
  Vector expenditure;  // X at j*S+s
  SolveDiagnostics diag;
};

/// Direct fixed-point solution in levels from technology and trade-cost
/// levels (balanced trade). Desk-scale only: J*S <= 16.
LevelsEquilibrium solve_levels(const LevelsPrimitives& p, const SolverConfig& cfg = {});

/// Baseline shares implied by a levels equilibrium (deficits zero).
ModelBaseline baseline_from_levels(const LevelsPrimitives& p,
                                   const LevelsEquilibrium& base);

/// Ratios of two levels equilibria packaged like a hat-solver result; the
/// reference side of the oracle-equivalence checks.
EquilibriumChange hats_from_levels(const LevelsPrimitives& p,
                                   const LevelsEquilibrium& base,
                                   const LevelsEquilibrium& shocked);

/// Elementwise tau-hat between two trade-cost level sets.
TradeCostShock shock_between(const LevelsPrimitives& base,
                             const LevelsPrimitives& shocked);

}  // namespace readykit
