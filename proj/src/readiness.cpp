#include "readykit/readiness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "readykit/csv.hpp"

namespace readykit {

namespace {

struct SystemName {
  WeaponSystem system;
  const char* name;
};

constexpr SystemName kSystemNames[] = {
    {WeaponSystem::MBT, "MBT"},           {WeaponSystem::IFV, "IFV"},
    {WeaponSystem::APC, "APC"},           {WeaponSystem::ARTY_HOW, "ARTY_HOW"},
    {WeaponSystem::MOR, "MOR"},           {WeaponSystem::MRL, "MRL"},
    {WeaponSystem::AD, "AD"},             {WeaponSystem::SAM, "SAM"},
    {WeaponSystem::SUB, "SUB"},           {WeaponSystem::PSC, "PSC"},
    {WeaponSystem::AIRCRAFT, "AIRCRAFT"}, {WeaponSystem::PERSONNEL, "PERSONNEL"},
};

void checkProfile(const ProductionProfile& p) {
  if (!(p.economicRate > 0.0))
    throw ValidationError("production profile: economic rate must be > 0");
  if (p.maxRate < p.economicRate)
    throw ValidationError("production profile: max rate below economic rate");
  if (p.leadTime < 0.0)
    throw ValidationError("production profile: negative lead time");
}

}  // namespace

const char* weapon_system_name(WeaponSystem w) {
  for (const auto& e : kSystemNames)
    if (e.system == w) return e.name;
  return "?";
}

WeaponSystem weapon_system_from_name(const std::string& name) {
  for (const auto& e : kSystemNames)
    if (name == e.name) return e.system;
  throw ValidationError("unknown weapon system: " + name);
}

std::vector<WeaponSystem> all_weapon_systems() {
  std::vector<WeaponSystem> out;
  for (const auto& e : kSystemNames) out.push_back(e.system);
  return out;
}

StockRatioTable stock_ratio_table(const std::vector<InventoryRecord>& records,
                                  int baseYear, int currentYear) {
  StockRatioTable t;
  std::map<std::pair<std::string, WeaponSystem>, long long> base, current;
  std::set<std::tuple<std::string, WeaponSystem, int>> unique;
  std::set<WeaponSystem> present;

  for (const auto& r : records) {
    if (r.count && *r.count < 0)
      throw ValidationError("negative inventory count for " + r.country);
    if (!unique.insert({r.country, r.system, r.year}).second)
      throw ValidationError("duplicate inventory record for " + r.country + "/" +
                            weapon_system_name(r.system) + "/" +
                            std::to_string(r.year));
    if (r.year != baseYear && r.year != currentYear) continue;
    if (std::find(t.countries.begin(), t.countries.end(), r.country) ==
        t.countries.end())
      t.countries.push_back(r.country);
    present.insert(r.system);
    if (!r.count) continue;
    auto key = std::make_pair(r.country, r.system);
    if (r.year == baseYear) base[key] = *r.count;
    if (r.year == currentYear) current[key] = *r.count;
  }

  for (WeaponSystem w : all_weapon_systems())
    if (present.count(w)) t.systems.push_back(w);

  t.cells.resize(t.systems.size());
  for (size_t si = 0; si < t.systems.size(); ++si) {
    t.cells[si].resize(t.countries.size());
    for (size_t ci = 0; ci < t.countries.size(); ++ci) {
      auto key = std::make_pair(t.countries[ci], t.systems[si]);
      StockRatioCell& cell = t.cells[si][ci];
      auto b = base.find(key);
      auto c = current.find(key);
      if (b == base.end() || c == current.end()) {
        cell.flag = StockRatioCell::Flag::blank;
      } else if (b->second == 0) {
        cell.flag = (c->second == 0) ? StockRatioCell::Flag::blank
                                     : StockRatioCell::Flag::new_capability;
      } else {
        cell.flag = StockRatioCell::Flag::ok;
        cell.ratioPct =
            100.0 * static_cast<double>(c->second) / static_cast<double>(b->second);
      }
    }
  }
  return t;
}

double inventory_expansion_time(long long current, long long objectiveStock,
                                const ProductionProfile& p, RateMode mode,
                                ObjectiveBasis basis) {
  checkProfile(p);
  if (current < 0 || objectiveStock < 0)
    throw ValidationError("inventory_expansion_time: negative counts");
  double objectiveUnits = (basis == ObjectiveBasis::gap)
                              ? std::max<double>(0.0, static_cast<double>(objectiveStock - current))
                              : static_cast<double>(objectiveStock);
  double rate = (mode == RateMode::economic) ? p.economicRate : p.maxRate;
  return objectiveUnits / rate + p.leadTime;
}

ExpansionResult expansion_result(long long current, long long objectiveStock,
                                 const ProductionProfile& p, ObjectiveBasis basis) {
  ExpansionResult r;
  r.system = p.system;
  r.objectiveUnits = (basis == ObjectiveBasis::gap)
                         ? std::max<double>(0.0, static_cast<double>(objectiveStock - current))
                         : static_cast<double>(objectiveStock);
  r.yearsEconomic =
      inventory_expansion_time(current, objectiveStock, p, RateMode::economic, basis);
  r.yearsMax =
      inventory_expansion_time(current, objectiveStock, p, RateMode::maximum, basis);
  return r;
}

double threshold_attrition_rate(long long current, const ProductionProfile& p,
                                RateMode mode, double periodYears) {
  checkProfile(p);
  if (current <= 0)
    throw ValidationError("threshold_attrition_rate: stock must be > 0");
  if (periodYears <= 0.0)
    throw ValidationError("threshold_attrition_rate: period must be > 0");
  double rate = (mode == RateMode::economic) ? p.economicRate : p.maxRate;
  return 100.0 * rate * periodYears / static_cast<double>(current);
}

double fragmentation_index(const ManufacturerShares& m, FragmentationVariant variant) {
  if (m.shares.empty())
    throw ValidationError("fragmentation_index: no manufacturer shares");
  double sum = 0.0, hhi = 0.0;
  for (const auto& [name, share] : m.shares) {
    if (share < 0.0)
      throw ValidationError("fragmentation_index: negative share for " + name);
    sum += share;
    hhi += share * share;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw ValidationError("fragmentation_index: shares sum to " + csv::full(sum) +
                          ", not 1");
  return variant == FragmentationVariant::reciprocal ? 1.0 / hhi : 1.0 - hhi;
}

ManufacturerShares shares_from_units(
    WeaponSystem system, const std::vector<std::pair<std::string, double>>& units) {
  double total = 0.0;
  for (const auto& [name, u] : units) {
    if (u < 0.0) throw ValidationError("negative unit count for " + name);
    total += u;
  }
  if (total <= 0.0) throw ValidationError("shares_from_units: zero total units");
  ManufacturerShares m;
  m.system = system;
  for (const auto& [name, u] : units) m.shares.emplace_back(name, u / total);
  return m;
}

std::vector<InventoryRecord> load_inventories_csv(const std::string& path) {
  csv::Table tab = csv::read(path);
  int cc = csv::column(tab, "country");
  int cs = csv::column(tab, "system");
  int cy = csv::column(tab, "year");
  int cn = csv::column(tab, "count");
  std::vector<InventoryRecord> out;
  for (const auto& row : tab.rows) {
    InventoryRecord r;
    r.country = row.at(cc);
    r.system = weapon_system_from_name(row.at(cs));
    r.year = static_cast<int>(csv::toInteger(row.at(cy), "year"));
    if (!row.at(cn).empty() && row.at(cn) != "na")
      r.count = csv::toInteger(row.at(cn), "count");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ProductionProfile> load_production_profiles_csv(const std::string& path) {
  csv::Table tab = csv::read(path);
  int cs = csv::column(tab, "system");
  int ce = csv::column(tab, "economic_rate");
  int cm = csv::column(tab, "max_rate");
  int cl = csv::column(tab, "lead_time_years");
  std::vector<ProductionProfile> out;
  for (const auto& row : tab.rows) {
    ProductionProfile p;
    p.system = weapon_system_from_name(row.at(cs));
    p.economicRate = csv::toDouble(row.at(ce), "economic_rate");
    p.maxRate = csv::toDouble(row.at(cm), "max_rate");
    p.leadTime = csv::toDouble(row.at(cl), "lead_time_years");
    checkProfile(p);
    out.push_back(p);
  }
  return out;
}

std::vector<ManufacturerShares> load_manufacturer_shares_csv(const std::string& path) {
  csv::Table tab = csv::read(path);
  int cs = csv::column(tab, "system");
  int cm = csv::column(tab, "manufacturer");
  int cu = csv::column(tab, "units");
  std::map<WeaponSystem, std::vector<std::pair<std::string, double>>> units;
  std::vector<WeaponSystem> order;
  for (const auto& row : tab.rows) {
    WeaponSystem w = weapon_system_from_name(row.at(cs));
    if (!units.count(w)) order.push_back(w);
    units[w].emplace_back(row.at(cm), csv::toDouble(row.at(cu), "units"));
  }
  std::vector<ManufacturerShares> out;
  for (WeaponSystem w : order) out.push_back(shares_from_units(w, units[w]));
  return out;
}

void write_stock_ratio_csv(const StockRatioTable& t, const std::string& path) {
  csv::Writer w(path);
  std::vector<std::string> header{"system"};
  header.insert(header.end(), t.countries.begin(), t.countries.end());
  w.row(header);
  for (size_t si = 0; si < t.systems.size(); ++si) {
    std::vector<std::string> row{weapon_system_name(t.systems[si])};
    for (size_t ci = 0; ci < t.countries.size(); ++ci) {
      const StockRatioCell& cell = t.cell(static_cast<int>(si), static_cast<int>(ci));
      switch (cell.flag) {
        case StockRatioCell::Flag::ok:
          row.push_back(csv::pct1(cell.ratioPct));
          break;
        case StockRatioCell::Flag::new_capability:
          row.push_back("new");
          break;
        case StockRatioCell::Flag::blank:
          row.push_back("");
          break;
      }
    }
    w.row(row);
  }
}

void write_stock_ratio_long_csv(const StockRatioTable& t, const std::string& path) {
  csv::Writer w(path);
  w.row({"country", "system", "ratio_pct", "flag"});
  for (size_t si = 0; si < t.systems.size(); ++si) {
    for (size_t ci = 0; ci < t.countries.size(); ++ci) {
      const StockRatioCell& cell = t.cell(static_cast<int>(si), static_cast<int>(ci));
      std::string flag = cell.flag == StockRatioCell::Flag::ok ? "ok"
                         : cell.flag == StockRatioCell::Flag::new_capability
                             ? "new_capability"
                             : "blank";
      w.row({t.countries[ci], weapon_system_name(t.systems[si]),
             cell.flag == StockRatioCell::Flag::ok ? csv::full(cell.ratioPct) : "",
             flag});
    }
  }
}

}  // namespace readykit
