#pragma once

#include <optional>
#include <string>
#include <vector>

#include "readykit/types.hpp"

namespace readykit {

enum class WeaponSystem {
  MBT,
  IFV,
  APC,
  ARTY_HOW,
  MOR,
  MRL,
  AD,
  SAM,
  SUB,
  PSC,
  AIRCRAFT,
  PERSONNEL
};

const char* weapon_system_name(WeaponSystem w);
WeaponSystem weapon_system_from_name(const std::string& name);
std::vector<WeaponSystem> all_weapon_systems();

struct InventoryRecord {
  std::string country;
  WeaponSystem system;
  int year;
  std::optional<long long> count;  // >= 0 when present
};

struct ProductionProfile {
  WeaponSystem system;
  double economicRate;  // units/year, > 0
  double maxRate;       // units/year, >= economicRate
  double leadTime;      // years, >= 0
};

enum class RateMode { economic, maximum };
enum class ObjectiveBasis { gap, absolute_level };

struct ExpansionResult {
  WeaponSystem system;
  double objectiveUnits;
  double yearsEconomic;
  double yearsMax;
};

struct ManufacturerShares {
  WeaponSystem system;
  std::vector<std::pair<std::string, double>> shares;  // sum to 1, all >= 0
};

enum class FragmentationVariant { reciprocal, complement };

/// One cell of the stock-ratio table: 100 * current / base. A cell with no
/// base-year stock stays blank when the current stock is also zero and is
/// flagged as a new capability otherwise.
struct StockRatioCell {
  enum class Flag { ok, blank, new_capability };
  Flag flag = Flag::blank;
  double ratioPct = 0.0;  // meaningful only when flag == ok
};

struct StockRatioTable {
  std::vector<std::string> countries;  // input order
  std::vector<WeaponSystem> systems;   // enum order, only systems present
  std::vector<std::vector<StockRatioCell>> cells;  // [system][country]
  const StockRatioCell& cell(int systemRow, int countryCol) const {
    return cells[systemRow][countryCol];
  }
};

/// Ratio of current-year to base-year stocks per (country, system), in percent.
/// Missing counts propagate as blank cells.
StockRatioTable stock_ratio_table(const std::vector<InventoryRecord>& records,
                                  int baseYear, int currentYear);

/// Years to reach the objective: objective_units / rate + lead time. The gap
/// basis nets out the current stock (floored at zero); the absolute basis
/// takes the objective stock as the production target itself.
double inventory_expansion_time(long long current, long long objectiveStock,
                                const ProductionProfile& p, RateMode mode,
                                ObjectiveBasis basis = ObjectiveBasis::gap);

ExpansionResult expansion_result(long long current, long long objectiveStock,
                                 const ProductionProfile& p,
                                 ObjectiveBasis basis = ObjectiveBasis::gap);

/// Per-period loss fraction exactly offset by replacement production, percent.
double threshold_attrition_rate(long long current, const ProductionProfile& p,
                                RateMode mode, double periodYears = 1.0);

/// reciprocal: 1 / sum(share^2), >= 1, equals the manufacturer count under
/// equal shares. complement: 1 - sum(share^2), in [0, 1).
double fragmentation_index(const ManufacturerShares& m, FragmentationVariant variant);

/// Builds shares from unit counts (units / total per system).
ManufacturerShares shares_from_units(
    WeaponSystem system, const std::vector<std::pair<std::string, double>>& units);

// CSV surfaces: inventories `country,system,year,count` (blank count = missing),
// production profiles `system,economic_rate,max_rate,lead_time_years`,
// manufacturer shares `system,manufacturer,units`.
std::vector<InventoryRecord> load_inventories_csv(const std::string& path);
std::vector<ProductionProfile> load_production_profiles_csv(const std::string& path);
std::vector<ManufacturerShares> load_manufacturer_shares_csv(const std::string& path);

/// Pivoted presentation table (one decimal, blank/new cells marked).
void write_stock_ratio_csv(const StockRatioTable& t, const std::string& path);
/// Long-format data file with full precision.
void write_stock_ratio_long_csv(const StockRatioTable& t, const std::string& path);

}  // namespace readykit
