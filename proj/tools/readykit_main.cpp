#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "readykit/csv.hpp"
#include "readykit/equilibrium.hpp"
#include "readykit/exposure.hpp"
#include "readykit/icio.hpp"
#include "readykit/io.hpp"
#include "readykit/manifest.hpp"
#include "readykit/readiness.hpp"
#include "readykit/resilience.hpp"
#include "readykit/scenario.hpp"
#include "readykit/types.hpp"

namespace fs = std::filesystem;
using namespace readykit;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 validation failure, 2 solver non-convergence,
// 64 usage errors.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::string joinPath(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string dataDir() {
  const char* env = std::getenv("READYKIT_DATA_DIR");
  return env ? env : "data";
}

std::map<std::string, std::string> parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = csv::trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line is not key = value: " + s);
    kv[csv::trim(s.substr(0, eq))] = csv::trim(s.substr(eq + 1));
  }
  return kv;
}

// Solver options shared by simulate/scenario. CLI flags override config-file
// keys which override defaults.
struct SolverOptions {
  std::string configFile;
  std::optional<double> tolerance, damping, prohibitiveCap;
  std::optional<int> maxIter;
  std::optional<std::string> numeraire, deficitMode;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", configFile, "config file with solver keys");
    cmd->add_option("--tolerance", tolerance, "outer solver tolerance");
    cmd->add_option("--damping", damping, "wage update damping");
    cmd->add_option("--max-iter", maxIter, "maximum outer iterations");
    cmd->add_option("--numeraire", numeraire,
                    "world (default) or a country code whose wage hat is pinned");
    cmd->add_option("--prohibitive-cap", prohibitiveCap,
                    "trade-cost multiplier treated as prohibitive");
    cmd->add_option("--deficit-mode", deficitMode, "fixed (default) or zero");
  }

  SolverConfig resolve(RunManifest& manifest) const {
    SolverConfig cfg;
    std::map<std::string, std::string> file;
    if (!configFile.empty()) {
      file = parseConfigFile(configFile);
      manifest.addInput(configFile);
      static const std::set<std::string> known = {"tolerance",       "damping",
                                                  "max_iter",        "numeraire",
                                                  "prohibitive_cap", "deficit_mode"};
      for (const auto& [k, v] : file)
        if (!known.count(k)) throw ValidationError("unknown config key: " + k);
    }
    auto fromFile = [&](const char* key) -> std::optional<std::string> {
      auto it = file.find(key);
      if (it == file.end()) return std::nullopt;
      return it->second;
    };

    if (auto v = fromFile("tolerance")) cfg.tolerance = csv::toDouble(*v, "tolerance");
    if (tolerance) cfg.tolerance = *tolerance;
    if (auto v = fromFile("damping")) cfg.damping = csv::toDouble(*v, "damping");
    if (damping) cfg.damping = *damping;
    if (auto v = fromFile("max_iter"))
      cfg.maxIterations = static_cast<int>(csv::toInteger(*v, "max_iter"));
    if (maxIter) cfg.maxIterations = *maxIter;
    if (auto v = fromFile("prohibitive_cap"))
      cfg.prohibitiveCap = csv::toDouble(*v, "prohibitive_cap");
    if (prohibitiveCap) cfg.prohibitiveCap = *prohibitiveCap;

    std::string num = numeraire.value_or(fromFile("numeraire").value_or("world"));
    if (num != "world") cfg.numeraireCountry = num;
    std::string dm = deficitMode.value_or(fromFile("deficit_mode").value_or("fixed"));
    if (dm == "fixed")
      cfg.deficitMode = SolverConfig::DeficitMode::fixed;
    else if (dm == "zero")
      cfg.deficitMode = SolverConfig::DeficitMode::zero;
    else
      throw ValidationError("unknown deficit mode: " + dm);

    manifest.config["tolerance"] = csv::full(cfg.tolerance);
    manifest.config["damping"] = csv::full(cfg.damping);
    manifest.config["max_iter"] = std::to_string(cfg.maxIterations);
    manifest.config["numeraire"] = num;
    manifest.config["prohibitive_cap"] = csv::full(cfg.prohibitiveCap);
    manifest.config["deficit_mode"] = dm;
    return cfg;
  }
};

void finishManifest(RunManifest& m, const std::string& out, const Clock& clock) {
  m.artifactVersion = kVersion;
  m.wallClockSeconds = clock.seconds();
  m.write(out);
}

// ---------------------------------------------------------------------------
// ingest

int runIngest(const std::string& flows, const std::string& totals,
              const std::string& format, double tolerance, const std::string& out,
              RunManifest manifest) {
  Clock clock;
  manifest.addInput(flows);
  manifest.addInput(totals);
  manifest.config["format"] = format;
  manifest.config["tolerance"] = csv::full(tolerance);

  IcioLoadOptions opts;
  opts.tolerance = tolerance;
  if (format == "long") opts.format = IcioLoadOptions::Format::longForm;
  if (format == "matrix") opts.format = IcioLoadOptions::Format::matrix;
  IcioTable t = load_icio(flows, totals, opts);
  IcioCheck check = check_identities(t, tolerance);

  fs::create_directories(out);
  write_icio_matrix(t, joinPath(out, "icio_flows.csv"),
                    joinPath(out, "icio_totals.csv"));
  manifest.outputs = {joinPath(out, "icio_flows.csv"),
                      joinPath(out, "icio_totals.csv")};
  manifest.diagnostics["max_row_residual"] = csv::full(check.maxRowResidual);
  manifest.diagnostics["max_col_residual"] = csv::full(check.maxColResidual);
  manifest.diagnostics["countries"] = std::to_string(t.index.countryCount());
  manifest.diagnostics["sectors"] = std::to_string(t.index.sectorCount());
  for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";

  std::cout << "ingested " << t.index.countryCount() << " countries x "
            << t.index.sectorCount() << " sectors; max row residual "
            << check.maxRowResidual << ", max column residual "
            << check.maxColResidual << "\n";
  finishManifest(manifest, out, clock);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// exposure

int runExposure(const std::string& flows, const std::string& totals,
                const std::string& sectorsArg, const std::string& aggregateFile,
                const std::string& linkage, const std::string& out,
                RunManifest manifest) {
  Clock clock;
  manifest.addInput(flows);
  manifest.addInput(totals);
  manifest.config["linkage"] = linkage;

  IcioTable t = load_icio(flows, totals);
  if (!aggregateFile.empty()) {
    manifest.addInput(aggregateFile);
    csv::Table map = csv::read(aggregateFile);
    int cs = csv::column(map, "sector");
    int cg = csv::column(map, "group");
    std::map<std::string, std::string> mapping;
    for (const auto& row : map.rows) mapping[row.at(cs)] = row.at(cg);
    t = aggregate_sectors(t, mapping);
  }

  std::vector<std::string> sectors;
  if (sectorsArg.empty()) {
    sectors = t.index.sectors();
  } else {
    std::stringstream ss(sectorsArg);
    std::string item;
    while (std::getline(ss, item, ',')) sectors.push_back(csv::trim(item));
  }
  manifest.config["sectors"] = sectorsArg.empty() ? "(all)" : sectorsArg;

  CoefficientMatrix a = technical_coefficients(t);
  LeontiefInverse L = linkage == "direct" ? direct_linkage(a) : leontief_inverse(a);
  std::vector<ExposureRecord> records = exposure_table(L, t.index, t.x, sectors);

  fs::create_directories(out);
  write_exposure_long_csv(records, joinPath(out, "exposure_long.csv"));
  write_exposure_matrix_csv(records, "FIR", joinPath(out, "exposure_fir_matrix.csv"));
  write_exposure_matrix_csv(records, "FMR", joinPath(out, "exposure_fmr_matrix.csv"));
  manifest.outputs = {joinPath(out, "exposure_long.csv"),
                      joinPath(out, "exposure_fir_matrix.csv"),
                      joinPath(out, "exposure_fmr_matrix.csv")};
  std::cout << "exposure table: " << records.size() << " records\n";
  finishManifest(manifest, out, clock);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// readiness

int runReadinessTable(std::string inventories, int base, int current,
                      const std::string& out, RunManifest manifest) {
  Clock clock;
  if (inventories.empty())
    inventories = joinPath(dataDir(), "table_a1_inventories.csv");
  manifest.addInput(inventories);
  manifest.config["base_year"] = std::to_string(base);
  manifest.config["current_year"] = std::to_string(current);

  StockRatioTable t =
      stock_ratio_table(load_inventories_csv(inventories), base, current);
  fs::create_directories(out);
  write_stock_ratio_csv(t, joinPath(out, "stock_ratios.csv"));
  write_stock_ratio_long_csv(t, joinPath(out, "stock_ratios_long.csv"));
  manifest.outputs = {joinPath(out, "stock_ratios.csv"),
                      joinPath(out, "stock_ratios_long.csv")};
  std::cout << "stock ratios: " << t.systems.size() << " systems x "
            << t.countries.size() << " countries\n";
  finishManifest(manifest, out, clock);
  return kExitOk;
}

int runReadinessExpansion(const std::string& inventories, const std::string& profiles,
                          int base, int current, const std::string& basisArg,
                          double period, const std::string& out,
                          RunManifest manifest) {
  Clock clock;
  manifest.addInput(inventories);
  manifest.addInput(profiles);
  manifest.config["base_year"] = std::to_string(base);
  manifest.config["current_year"] = std::to_string(current);
  manifest.config["objective_basis"] = basisArg;
  manifest.config["attrition_period_years"] = csv::full(period);

  ObjectiveBasis basis =
      basisArg == "absolute" ? ObjectiveBasis::absolute_level : ObjectiveBasis::gap;
  auto records = load_inventories_csv(inventories);
  auto profs = load_production_profiles_csv(profiles);

  // Aggregate totals per system and year across the listed countries.
  std::map<WeaponSystem, long long> baseTotal, currentTotal;
  for (const auto& r : records) {
    if (!r.count) continue;
    if (r.year == base) baseTotal[r.system] += *r.count;
    if (r.year == current) currentTotal[r.system] += *r.count;
  }

  fs::create_directories(out);
  csv::Writer w(joinPath(out, "expansion.csv"));
  w.row({"system", "stock_ratio_pct", "objective_units", "expansion_years_economic",
         "expansion_years_max", "attrition_pct_economic", "attrition_pct_max"});
  for (const auto& p : profs) {
    if (!baseTotal.count(p.system) || !currentTotal.count(p.system)) continue;
    long long b0 = baseTotal[p.system];
    long long c0 = currentTotal[p.system];
    ExpansionResult r = expansion_result(c0, b0, p, basis);
    double ratio = b0 > 0 ? 100.0 * static_cast<double>(c0) / b0 : 0.0;
    w.row({weapon_system_name(p.system), csv::pct1(ratio), csv::full(r.objectiveUnits),
           csv::pct1(r.yearsEconomic), csv::pct1(r.yearsMax),
           csv::pct1(threshold_attrition_rate(c0, p, RateMode::economic, period)),
           csv::pct1(threshold_attrition_rate(c0, p, RateMode::maximum, period))});
  }
  manifest.outputs = {joinPath(out, "expansion.csv")};
  finishManifest(manifest, out, clock);
  std::cout << "expansion table written\n";
  return kExitOk;
}

int runReadinessFragmentation(const std::string& shares, const std::string& variantArg,
                              const std::string& out, RunManifest manifest) {
  Clock clock;
  manifest.addInput(shares);
  manifest.config["variant"] = variantArg;
  FragmentationVariant variant = variantArg == "complement"
                                     ? FragmentationVariant::complement
                                     : FragmentationVariant::reciprocal;

  auto list = load_manufacturer_shares_csv(shares);
  fs::create_directories(out);
  csv::Writer w(joinPath(out, "fragmentation.csv"));
  w.row({"system", "fragmentation_index", "manufacturer_count",
         "largest_manufacturer", "largest_share"});
  for (const auto& m : list) {
    double value = fragmentation_index(m, variant);
    auto largest = *std::max_element(
        m.shares.begin(), m.shares.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    w.row({weapon_system_name(m.system), csv::pct1(value),
           std::to_string(m.shares.size()), largest.first,
           csv::dec2(largest.second)});
  }
  manifest.outputs = {joinPath(out, "fragmentation.csv")};
  finishManifest(manifest, out, clock);
  std::cout << "fragmentation table written\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// resilience

int runResilience(const std::string& metadata, const std::string& values,
                  const std::string& normalization, const std::string& order,
                  bool includeRisk, const std::string& out, RunManifest manifest) {
  Clock clock;
  manifest.addInput(metadata);
  manifest.addInput(values);
  manifest.config["normalization"] = normalization;
  manifest.config["order"] = order;
  manifest.config["include_risk_exposure"] = includeRisk ? "true" : "false";

  EariOptions opts;
  if (normalization == "zscore")
    opts.normalization = EariOptions::Normalization::zscore;
  else if (normalization != "minmax")
    throw ValidationError("unknown normalization: " + normalization);
  if (order == "impute-normalize")
    opts.order = EariOptions::Order::impute_then_normalize;
  else if (order != "normalize-impute")
    throw ValidationError("unknown order: " + order);
  opts.includeRiskExposure = includeRisk;

  ResilienceDataset d = load_resilience_csv(metadata, values);
  EariResult r = eari_table(d, opts);

  fs::create_directories(out);
  write_eari_csv(r, joinPath(out, "eari.csv"));
  {
    csv::Writer w(joinPath(out, "eari_data.csv"));
    std::vector<std::string> header{"country"};
    for (Component c : r.components) header.push_back(component_name(c));
    header.push_back("overall");
    w.row(header);
    for (size_t c = 0; c < r.countries.size(); ++c) {
      std::vector<std::string> row{r.countries[c]};
      for (size_t k = 0; k < r.components.size(); ++k)
        row.push_back(csv::full(r.scores(c, k)));
      row.push_back(csv::full(r.overall[c]));
      w.row(row);
    }
  }
  manifest.outputs = {joinPath(out, "eari.csv"), joinPath(out, "eari_data.csv")};
  std::cout << "resilience index: " << r.countries.size() << " countries, "
            << r.components.size() << " components\n";
  finishManifest(manifest, out, clock);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// baseline

int runBaselineBuild(const std::string& flows, const std::string& totals,
                     const std::string& thetaFile, const std::string& wageBillsFile,
                     const std::string& deficitsFile, const std::string& out,
                     RunManifest manifest) {
  Clock clock;
  manifest.addInput(flows);
  manifest.addInput(totals);
  manifest.addInput(thetaFile);

  IcioTable t = load_icio(flows, totals);
  Vector theta = load_theta_csv(t.index, thetaFile);
  std::optional<Vector> wageBills, deficits;
  if (!wageBillsFile.empty()) {
    manifest.addInput(wageBillsFile);
    wageBills = load_country_vector_csv(t.index, wageBillsFile, "wage_bill");
  }
  if (!deficitsFile.empty()) {
    manifest.addInput(deficitsFile);
    deficits = load_country_vector_csv(t.index, deficitsFile, "deficit");
  }

  ModelBaseline b = baseline_from_icio(t, theta, wageBills, deficits);
  BaselineReport rep = validate_baseline(b);
  for (const auto& v : rep.violations) std::cerr << "violation: " << v << "\n";
  if (!rep.ok()) return kExitValidation;

  save_baseline(b, out);
  manifest.outputs = {joinPath(out, "baseline_manifest.json")};
  manifest.diagnostics["countries"] = std::to_string(b.J());
  manifest.diagnostics["sectors"] = std::to_string(b.S());
  for (const auto& w : b.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "baseline written to " << out << "\n";
  finishManifest(manifest, out, clock);
  return kExitOk;
}

int runBaselineValidate(const std::string& baselineDir) {
  ModelBaseline b = load_baseline(baselineDir);
  BaselineReport rep = validate_baseline(b);
  if (rep.ok()) {
    std::cout << "baseline valid: no violations\n";
    return kExitOk;
  }
  for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
  return kExitValidation;
}

// ---------------------------------------------------------------------------
// simulate

int runSimulate(const std::string& baselineDir, const std::string& shockFile,
                bool writeShares, const SolverOptions& solverOpts,
                const std::string& out, RunManifest manifest) {
  Clock clock;
  SolverConfig cfg = solverOpts.resolve(manifest);
  ModelBaseline b = load_baseline(baselineDir);
  manifest.addInput(joinPath(baselineDir, "baseline_manifest.json"));
  manifest.config["shock"] = shockFile;

  TradeCostShock shock = TradeCostShock::unit(b);
  shock.prohibitiveCap = cfg.prohibitiveCap;
  if (shockFile != "none") {
    manifest.addInput(shockFile);
    shock = load_shock_csv(b, shockFile, cfg.prohibitiveCap);
  }

  EquilibriumChange e = solve_hat(b, shock, cfg);

  fs::create_directories(out);
  write_equilibrium_country_csv(e, b, joinPath(out, "counterfactual_countries.csv"));
  write_equilibrium_sector_csv(e, b, joinPath(out, "counterfactual_sectors.csv"));
  manifest.outputs = {joinPath(out, "counterfactual_countries.csv"),
                      joinPath(out, "counterfactual_sectors.csv")};
  if (writeShares) {
    write_equilibrium_shares_csv(e, b, joinPath(out, "counterfactual_pi_int.csv"),
                                 joinPath(out, "counterfactual_pi_fin.csv"));
    manifest.outputs.push_back(joinPath(out, "counterfactual_pi_int.csv"));
    manifest.outputs.push_back(joinPath(out, "counterfactual_pi_fin.csv"));
  }
  manifest.diagnostics["iterations"] = std::to_string(e.diag.iterations);
  manifest.diagnostics["worst_residual"] = csv::full(e.diag.worstResidual);
  std::cout << "solved in " << e.diag.iterations << " iterations, worst residual "
            << e.diag.worstResidual << "\n";
  finishManifest(manifest, out, clock);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// scenario

int runScenario(const std::string& baselineDir, const std::string& scenarioFile,
                bool compare, const SolverOptions& solverOpts, const std::string& out,
                RunManifest manifest) {
  Clock clock;
  SolverConfig cfg = solverOpts.resolve(manifest);
  ModelBaseline b = load_baseline(baselineDir);
  manifest.addInput(joinPath(baselineDir, "baseline_manifest.json"));
  manifest.addInput(scenarioFile);

  ScenarioSpec spec = load_scenario_file(scenarioFile);
  cfg.prohibitiveCap = spec.prohibitiveCap;
  TrajectoryOptions opts;
  opts.defenceSector = spec.defenceSector;
  opts.solver = cfg;
  manifest.config["defence_sector"] = spec.defenceSector;
  manifest.config["horizon"] = std::to_string(spec.schedule.horizon());

  fs::create_directories(out);
  if (!compare) {
    TrajectoryResult t =
        run_trajectory(b, spec.blocs, spec.policy, spec.schedule, opts);
    write_trajectory_csv(t, joinPath(out, "trajectory.csv"));
    manifest.outputs = {joinPath(out, "trajectory.csv")};
    double worst = 0.0;
    for (const auto& y : t.years) worst = std::max(worst, y.diag.worstResidual);
    manifest.diagnostics["worst_residual"] = csv::full(worst);
    std::cout << "trajectory over " << t.years.size() << " years written\n";
  } else {
    PolicyPath rapid = spec.policy;
    if (rapid.kind != PolicyPath::Kind::rapid_diversion)
      throw ValidationError("scenario compare requires a rapid_diversion policy");
    PolicyComparison cmp = compare_policies(b, spec.blocs, spec.schedule, rapid,
                                            PolicyPath::moderate(), opts);
    write_trajectory_csv(cmp.rapid, joinPath(out, "trajectory_rapid.csv"));
    write_trajectory_csv(cmp.moderate, joinPath(out, "trajectory_moderate.csv"));
    csv::Writer w(joinPath(out, "policy_comparison.csv"));
    w.row({"year", "defence_output_rapid_pct", "defence_output_moderate_pct",
           "gne_rapid_pct", "gne_moderate_pct"});
    for (size_t i = 0; i < cmp.rapid.years.size(); ++i)
      w.row({std::to_string(cmp.rapid.years[i].year),
             csv::full(cmp.rapid.years[i].allianceDefenceOutputPct),
             csv::full(cmp.moderate.years[i].allianceDefenceOutputPct),
             csv::full(cmp.rapid.years[i].allianceGnePct),
             csv::full(cmp.moderate.years[i].allianceGnePct)});
    manifest.outputs = {joinPath(out, "trajectory_rapid.csv"),
                        joinPath(out, "trajectory_moderate.csv"),
                        joinPath(out, "policy_comparison.csv")};
    manifest.diagnostics["crossover_year"] =
        cmp.crossoverYear ? std::to_string(*cmp.crossoverYear) : "none";
    std::cout << "policy comparison written; crossover year: "
              << (cmp.crossoverYear ? std::to_string(*cmp.crossoverYear) : "none")
              << "\n";
  }
  finishManifest(manifest, out, clock);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

// Compares a stock-ratio run against the bundled expected ratios, if present.
void reportStockRatios(std::ostream& os, const std::string& runDir) {
  std::string produced = joinPath(runDir, "stock_ratios.csv");
  std::string expected = joinPath(dataDir(), "table1_expected_ratios.csv");
  if (!fs::exists(produced)) return;
  if (!fs::exists(expected)) {
    os << "  golden table: expected ratios not found under " << dataDir() << "\n";
    return;
  }
  csv::Table got = csv::read(produced);
  csv::Table want = csv::read(expected);
  int pass = 0, fail = 0;
  for (const auto& wrow : want.rows) {
    const std::string& system = wrow.at(0);
    for (size_t c = 1; c < want.header.size(); ++c) {
      if (c >= wrow.size() || wrow[c].empty()) continue;
      std::string cell;
      for (const auto& grow : got.rows) {
        if (grow.at(0) != system) continue;
        for (size_t gc = 1; gc < got.header.size(); ++gc)
          if (got.header[gc] == want.header[c] && gc < grow.size()) cell = grow[gc];
      }
      if (cell.empty() || cell == "new") {
        ++fail;
        continue;
      }
      double a = csv::toDouble(cell, "ratio");
      double b = csv::toDouble(wrow[c], "expected ratio");
      if (std::abs(a - b) <= 0.1)
        ++pass;
      else
        ++fail;
    }
  }
  os << "  golden table reproduction: " << pass << " cells pass, " << fail
     << " fail (tolerance 0.1 pp)\n";
}

void reportTrajectory(std::ostream& os, const std::string& runDir,
                      const std::string& file) {
  std::string path = joinPath(runDir, file);
  if (!fs::exists(path)) return;
  csv::Table t = csv::read(path);
  int cy = csv::column(t, "year"), cc = csv::column(t, "country");
  int cm = csv::column(t, "metric"), cv = csv::column(t, "value_pct");
  os << "  " << file << ":\n";
  for (const auto& row : t.rows) {
    if (row.at(cc) != "ALLIANCE") continue;
    os << "    year " << row.at(cy) << " " << row.at(cm) << " = "
       << csv::pct1(csv::toDouble(row.at(cv), "value")) << "%\n";
  }
}

int runReport(const std::string& resultsDir) {
  std::vector<std::string> runs;
  if (fs::exists(joinPath(resultsDir, "run_manifest.json"))) runs.push_back(resultsDir);
  if (fs::exists(resultsDir))
    for (const auto& entry : fs::directory_iterator(resultsDir))
      if (entry.is_directory() && fs::exists(entry.path() / "run_manifest.json"))
        runs.push_back(entry.path().string());
  std::sort(runs.begin(), runs.end());

  if (runs.empty()) {
    std::cout << "no runs found\n";
    return kExitOk;
  }
  for (const auto& dir : runs) {
    RunManifest m = RunManifest::load(dir);
    std::cout << "run: " << dir << "\n";
    std::cout << "  command: " << m.command << "\n";
    if (m.diagnostics.count("worst_residual"))
      std::cout << "  worst residual: " << m.diagnostics.at("worst_residual") << "\n";
    if (m.diagnostics.count("crossover_year"))
      std::cout << "  crossover year: " << m.diagnostics.at("crossover_year") << "\n";
    reportTrajectory(std::cout, dir, "trajectory.csv");
    reportTrajectory(std::cout, dir, "trajectory_rapid.csv");
    reportTrajectory(std::cout, dir, "trajectory_moderate.csv");
    if (m.command == "readiness") reportStockRatios(std::cout, dir);
    for (const auto& o : m.outputs) std::cout << "  output: " << o << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"defence-readiness metrics and trade-decoupling counterfactuals"};
  app.require_subcommand(1);

  std::string out = "out";
  int threads = 1;
  long long seed = 0;
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--threads", threads,
                 "worker threads (results are thread-count independent)");
  app.add_option("--seed", seed, "reserved; all computation is deterministic");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load and validate an ICIO table");
  std::string flows, totals, format = "auto";
  double icioTolerance = 1e-6;
  ingest->add_option("--flows", flows, "flows CSV (long or matrix form)")->required();
  ingest->add_option("--totals", totals, "totals CSV")->required();
  ingest->add_option("--format", format, "auto|long|matrix");
  ingest->add_option("--tolerance", icioTolerance, "identity tolerance (relative)");

  // exposure
  auto* exposure = app.add_subcommand("exposure", "foreign input/market reliance");
  std::string expSectors, aggregateFile, linkage = "total";
  exposure->add_option("--flows", flows, "flows CSV")->required();
  exposure->add_option("--totals", totals, "totals CSV")->required();
  exposure->add_option("--sectors", expSectors, "comma-separated sector filter");
  exposure->add_option("--aggregate", aggregateFile,
                       "sector aggregation map CSV (sector,group)");
  exposure->add_option("--linkage", linkage, "total (default) or direct");

  // readiness
  auto* readiness = app.add_subcommand("readiness", "mobilisation readiness metrics");
  readiness->require_subcommand(1);
  auto* rTable = readiness->add_subcommand("table", "stock-ratio table");
  std::string inventories;
  int baseYear = 1990, currentYear = 2024;
  rTable->add_option("--inventories", inventories,
                     "inventories CSV (default: READYKIT_DATA_DIR bundle)");
  rTable->add_option("--base", baseYear, "base year")->capture_default_str();
  rTable->add_option("--current", currentYear, "current year")->capture_default_str();

  auto* rExp = readiness->add_subcommand("expansion", "expansion time + attrition");
  std::string profiles, basis = "gap";
  double attritionPeriod = 1.0;
  rExp->add_option("--inventories", inventories, "inventories CSV")->required();
  rExp->add_option("--profiles", profiles, "production profiles CSV")->required();
  rExp->add_option("--base", baseYear, "objective year")->capture_default_str();
  rExp->add_option("--current", currentYear, "current year")->capture_default_str();
  rExp->add_option("--basis", basis, "gap (default) or absolute");
  rExp->add_option("--period", attritionPeriod, "attrition period in years");

  auto* rFrag = readiness->add_subcommand("fragmentation", "market fragmentation");
  std::string sharesFile, variant = "reciprocal";
  rFrag->add_option("--shares", sharesFile, "manufacturer units CSV")->required();
  rFrag->add_option("--variant", variant, "reciprocal (default) or complement");

  // resilience
  auto* resilience = app.add_subcommand("resilience", "composite resilience index");
  std::string metadata, values, normalization = "minmax", order = "normalize-impute";
  bool includeRisk = false;
  resilience->add_option("--metadata", metadata, "variable metadata CSV")->required();
  resilience->add_option("--values", values, "country values CSV")->required();
  resilience->add_option("--normalization", normalization, "minmax|zscore");
  resilience->add_option("--order", order, "normalize-impute|impute-normalize");
  resilience->add_flag("--include-risk-exposure", includeRisk,
                       "include the risk-exposure component");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "model baseline construction");
  baseline->require_subcommand(1);
  auto* bBuild = baseline->add_subcommand("build", "baseline from an ICIO table");
  std::string thetaFile, wageBillsFile, deficitsFile;
  bBuild->add_option("--flows", flows, "flows CSV")->required();
  bBuild->add_option("--totals", totals, "totals CSV")->required();
  bBuild->add_option("--theta", thetaFile, "per-sector elasticities CSV")->required();
  bBuild->add_option("--wage-bills", wageBillsFile, "override wage bills CSV");
  bBuild->add_option("--deficits", deficitsFile, "override deficits CSV");
  auto* bValidate = baseline->add_subcommand("validate", "check baseline invariants");
  std::string baselineDir;
  bValidate->add_option("--baseline", baselineDir, "baseline directory")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "solve one trade-cost shock");
  std::string shockFile = "none";
  bool writeShares = false;
  SolverOptions simulateSolver;
  simulate->add_option("--baseline", baselineDir, "baseline directory")->required();
  simulate->add_option("--shock", shockFile, "shock CSV or 'none'");
  simulate->add_flag("--shares", writeShares, "also write counterfactual shares");
  simulateSolver.attach(simulate);

  // scenario
  auto* scenario = app.add_subcommand("scenario", "multi-year decoupling scenarios");
  scenario->require_subcommand(1);
  auto* sRun = scenario->add_subcommand("run", "run one trajectory");
  std::string scenarioFile;
  SolverOptions scenarioSolver;
  sRun->add_option("--baseline", baselineDir, "baseline directory")->required();
  sRun->add_option("--scenario", scenarioFile, "scenario file")->required();
  scenarioSolver.attach(sRun);
  auto* sCompare = scenario->add_subcommand("compare", "rapid vs moderate diversion");
  sCompare->add_option("--baseline", baselineDir, "baseline directory")->required();
  sCompare->add_option("--scenario", scenarioFile, "scenario file")->required();
  SolverOptions compareSolver;
  compareSolver.attach(sCompare);

  // report
  auto* report = app.add_subcommand("report", "summarize runs in a results directory");
  std::string resultsDir;
  report->add_option("--results", resultsDir, "results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kExitUsage;
  }

  Eigen::setNbThreads(threads);

  RunManifest manifest;
  for (int i = 0; i < argc; ++i) manifest.argv.push_back(argv[i]);
  manifest.config["seed"] = std::to_string(seed);
  manifest.config["threads"] = std::to_string(threads);

  try {
    if (*ingest) {
      manifest.command = "ingest";
      return runIngest(flows, totals, format, icioTolerance, out, manifest);
    }
    if (*exposure) {
      manifest.command = "exposure";
      return runExposure(flows, totals, expSectors, aggregateFile, linkage, out,
                         manifest);
    }
    if (*readiness) {
      manifest.command = "readiness";
      if (*rTable)
        return runReadinessTable(inventories, baseYear, currentYear, out, manifest);
      if (*rExp)
        return runReadinessExpansion(inventories, profiles, baseYear, currentYear,
                                     basis, attritionPeriod, out, manifest);
      if (*rFrag) return runReadinessFragmentation(sharesFile, variant, out, manifest);
    }
    if (*resilience) {
      manifest.command = "resilience";
      return runResilience(metadata, values, normalization, order, includeRisk, out,
                           manifest);
    }
    if (*baseline) {
      manifest.command = "baseline";
      if (*bBuild)
        return runBaselineBuild(flows, totals, thetaFile, wageBillsFile, deficitsFile,
                                out, manifest);
      if (*bValidate) return runBaselineValidate(baselineDir);
    }
    if (*simulate) {
      manifest.command = "simulate";
      return runSimulate(baselineDir, shockFile, writeShares, simulateSolver, out,
                         manifest);
    }
    if (*scenario) {
      manifest.command = "scenario";
      if (*sRun)
        return runScenario(baselineDir, scenarioFile, false, scenarioSolver, out,
                           manifest);
      if (*sCompare)
        return runScenario(baselineDir, scenarioFile, true, compareSolver, out,
                           manifest);
    }
    if (*report) return runReport(resultsDir);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
