#pragma once

#include <string>

#include "readykit/equilibrium.hpp"
#include "readykit/types.hpp"

namespace readykit {

/// Baseline bundle: a directory of CSVs (shares, cost shares, expenditure
/// shares, elasticities, factors, outputs) plus baseline_manifest.json.
void save_baseline(const ModelBaseline& b, const std::string& dir);
ModelBaseline load_baseline(const std::string& dir);

/// Trade-cost shock CSV: origin,dest,supply_sector,use,tau_hat where use is a
/// sector code or FINAL; `*` wildcards expand over countries/sectors. Later
/// rows override earlier ones; unlisted entries stay at 1.
TradeCostShock load_shock_csv(const ModelBaseline& b, const std::string& path,
                              double prohibitiveCap);

/// Country-level results: wage hats, consumer price hats, real GNE changes.
void write_equilibrium_country_csv(const EquilibriumChange& e,
                                   const ModelBaseline& b, const std::string& path);
/// Sector-level results: cost hats, outputs, expenditures, real output changes.
void write_equilibrium_sector_csv(const EquilibriumChange& e, const ModelBaseline& b,
                                  const std::string& path);
/// Counterfactual shares (large on big baselines; written on request).
void write_equilibrium_shares_csv(const EquilibriumChange& e, const ModelBaseline& b,
                                  const std::string& intPath,
                                  const std::string& finPath);

/// Per-sector elasticities: `sector,theta`.
Vector load_theta_csv(const CountrySectorIndex& idx, const std::string& path);
/// Country-keyed vector: `country,value`.
Vector load_country_vector_csv(const CountrySectorIndex& idx, const std::string& path,
                               const std::string& valueColumn);

}  // namespace readykit
