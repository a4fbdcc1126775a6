#include "readykit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "readykit/csv.hpp"

namespace readykit {

namespace {

std::set<std::string> toSet(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    std::string t = csv::trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<std::string> BlocSpec::validate(const CountrySectorIndex& idx) const {
  auto a = toSet(alliance), p = toSet(partners), x = toSet(axis);
  if (a.size() != alliance.size() || p.size() != partners.size() ||
      x.size() != axis.size())
    throw ValidationError("bloc lists contain duplicate countries");
  for (const auto& c : alliance)
    if (p.count(c) || x.count(c))
      throw ValidationError("country in multiple blocs: " + c);
  for (const auto& c : partners)
    if (x.count(c)) throw ValidationError("country in multiple blocs: " + c);
  std::vector<std::string> all;
  all.insert(all.end(), alliance.begin(), alliance.end());
  all.insert(all.end(), partners.begin(), partners.end());
  all.insert(all.end(), axis.begin(), axis.end());
  for (const auto& c : all)
    if (!idx.hasCountry(c))
      throw ValidationError("bloc country absent from baseline: " + c);
  std::vector<std::string> neutral;
  for (const auto& c : idx.countries())
    if (!a.count(c) && !p.count(c) && !x.count(c)) neutral.push_back(c);
  return neutral;
}

double PolicyPath::cutForYear(int year) const {
  if (partnerCostCut.empty() || year < 1) return 0.0;
  size_t i = std::min(static_cast<size_t>(year) - 1, partnerCostCut.size() - 1);
  return partnerCostCut[i];
}

void PolicyPath::validate() const {
  for (double c : partnerCostCut)
    if (c < 0.0 || c > 0.9)
      throw ValidationError("policy cut out of [0, 0.9]: " + csv::full(c));
  if (kind == Kind::moderate_diversion) {
    for (double c : partnerCostCut)
      if (c != 0.0)
        throw ValidationError("moderate diversion must have zero cuts");
  } else if (!partnerCostCut.empty()) {
    for (size_t t = 1; t < partnerCostCut.size(); ++t) {
      double increment = partnerCostCut[t] - partnerCostCut[t - 1];
      if (increment < 0.0)
        throw ValidationError("rapid diversion cuts must be non-decreasing");
      if (increment > partnerCostCut[0] + 1e-12)
        throw ValidationError(
            "rapid diversion must front-load cuts (later increments cannot exceed "
            "the first-year cut)");
    }
  }
}

PolicyPath PolicyPath::moderate() {
  PolicyPath p;
  p.kind = Kind::moderate_diversion;
  return p;
}

PolicyPath PolicyPath::rapid(double frontCut, int horizon) {
  PolicyPath p;
  p.kind = Kind::rapid_diversion;
  p.partnerCostCut.assign(std::max(horizon, 1), frontCut);
  p.validate();
  return p;
}

TradeCostShock build_decoupling_shock(const ModelBaseline& b, const BlocSpec& blocs,
                                      const PolicyPath& policy, int year,
                                      double prohibitiveCap) {
  blocs.validate(b.index);
  policy.validate();
  if (year < 1) throw ValidationError("scenario year must be >= 1");
  if (!(prohibitiveCap > 1.0))
    throw ValidationError("prohibitive cap must exceed 1");

  const int J = b.J(), S = b.S();
  auto west = toSet(blocs.alliance);
  for (const auto& c : blocs.partners) west.insert(c);
  auto axis = toSet(blocs.axis);

  std::vector<int> side(J, 0);  // 0 neutral, 1 west, 2 axis
  for (int j = 0; j < J; ++j) {
    if (west.count(b.index.country(j))) side[j] = 1;
    if (axis.count(b.index.country(j))) side[j] = 2;
  }

  double cut = policy.cutForYear(year);
  TradeCostShock shock = TradeCostShock::unit(b);
  shock.prohibitiveCap = prohibitiveCap;

  // tau for an (origin, dest) country pair; 1 on the diagonal and for any pair
  // touching a neutral country.
  auto pairTau = [&](int i, int j) {
    if (i == j) return 1.0;
    if ((side[i] == 1 && side[j] == 2) || (side[i] == 2 && side[j] == 1))
      return prohibitiveCap;
    if (side[i] == 1 && side[j] == 1) return 1.0 - cut;
    return 1.0;
  };

  for (int j = 0; j < J; ++j)
    for (int i = 0; i < J; ++i) {
      double tau = pairTau(i, j);
      if (tau == 1.0) continue;
      for (int s = 0; s < S; ++s) {
        for (int r = 0; r < S; ++r) shock.tauInt[b.intIdx(i, j, r, s)] = tau;
        shock.tauFin[b.finIdx(i, j, s)] = tau;
      }
    }
  return shock;
}

ElasticitySchedule elasticity_schedule_default(int horizon, double shortRunFraction) {
  if (horizon < 1) throw ValidationError("schedule horizon must be >= 1");
  if (!(shortRunFraction > 0.0) || shortRunFraction > 1.0)
    throw ValidationError("short-run fraction must be in (0, 1]");
  ElasticitySchedule s;
  s.thetaMultipliers.resize(horizon);
  if (horizon == 1) {
    s.thetaMultipliers[0] = shortRunFraction;
    return s;
  }
  for (int t = 0; t < horizon; ++t)
    s.thetaMultipliers[t] =
        shortRunFraction + (1.0 - shortRunFraction) * t / (horizon - 1);
  return s;
}

TrajectoryResult run_trajectory(const ModelBaseline& b, const BlocSpec& blocs,
                                const PolicyPath& policy,
                                const ElasticitySchedule& schedule,
                                const TrajectoryOptions& opts) {
  if (schedule.horizon() < 1)
    throw ValidationError("run_trajectory: empty elasticity schedule");
  for (size_t t = 1; t < schedule.thetaMultipliers.size(); ++t)
    if (schedule.thetaMultipliers[t] < schedule.thetaMultipliers[t - 1])
      throw ValidationError("elasticity schedule must be non-decreasing");
  for (double m : schedule.thetaMultipliers)
    if (!(m > 0.0)) throw ValidationError("elasticity multipliers must be positive");
  if (opts.defenceSector.empty())
    throw ValidationError("run_trajectory: defence sector not named");
  int defence = b.index.sectorIndex(opts.defenceSector);
  std::vector<std::string> neutral = blocs.validate(b.index);
  (void)neutral;

  TrajectoryResult result;
  result.defenceSector = opts.defenceSector;
  result.countries = b.index.countries();

  const int J = b.J();
  Vector gneWeight(J), defWeight(J);
  double gneTotal = 0.0, defTotal = 0.0;
  auto allianceSet = toSet(blocs.alliance);
  for (int j = 0; j < J; ++j) {
    bool in = allianceSet.count(b.index.country(j)) > 0;
    gneWeight[j] = in ? b.wageBill[j] + b.deficit[j] : 0.0;
    defWeight[j] = in ? b.output0[b.js(j, defence)] : 0.0;
    gneTotal += gneWeight[j];
    defTotal += defWeight[j];
  }
  if (!(gneTotal > 0.0))
    throw ValidationError("run_trajectory: alliance has no baseline expenditure");

  for (int year = 1; year <= schedule.horizon(); ++year) {
    ModelBaseline scaled = b;
    double mult = schedule.thetaMultipliers[year - 1];
    scaled.theta = b.theta * mult;
    for (int r = 0; r < scaled.theta.size(); ++r)
      if (scaled.theta[r] <= 1.0)
        throw ValidationError("scaled elasticity <= 1 in year " +
                              std::to_string(year) + " for sector " +
                              b.index.sector(r));
    TradeCostShock shock = build_decoupling_shock(scaled, blocs, policy, year,
                                                  opts.solver.prohibitiveCap);
    EquilibriumChange e;
    try {
      e = solve_hat(scaled, shock, opts.solver);
    } catch (const SolverError& err) {
      throw SolverError("trajectory aborted in year " + std::to_string(year) + ": " +
                        err.what());
    }

    YearOutcome out;
    out.year = year;
    out.diag = e.diag;
    out.gneChangePct = 100.0 * e.realGneChange;
    out.defenceOutputChangePct = Vector::Zero(J);
    for (int j = 0; j < J; ++j)
      out.defenceOutputChangePct[j] = 100.0 * e.realOutputChange[b.js(j, defence)];
    out.allianceGnePct = gneWeight.dot(out.gneChangePct) / gneTotal;
    out.allianceDefenceOutputPct =
        defTotal > 0.0 ? defWeight.dot(out.defenceOutputChangePct) / defTotal : 0.0;
    result.years.push_back(std::move(out));
  }
  return result;
}

PolicyComparison compare_policies(const ModelBaseline& b, const BlocSpec& blocs,
                                  const ElasticitySchedule& schedule,
                                  const PolicyPath& rapid, const PolicyPath& moderate,
                                  const TrajectoryOptions& opts) {
  PolicyComparison cmp;
  cmp.rapid = run_trajectory(b, blocs, rapid, schedule, opts);
  cmp.moderate = run_trajectory(b, blocs, moderate, schedule, opts);
  for (int t = 0; t < schedule.horizon(); ++t) {
    if (cmp.rapid.years[t].allianceDefenceOutputPct >
        cmp.moderate.years[t].allianceDefenceOutputPct) {
      cmp.crossoverYear = t + 1;
      break;
    }
  }
  return cmp;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = csv::trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ValidationError("scenario file line is not key = value: " + s);
    std::string key = csv::trim(s.substr(0, eq));
    if (kv.count(key)) throw ValidationError("duplicate scenario key: " + key);
    kv[key] = csv::trim(s.substr(eq + 1));
  }

  static const std::set<std::string> known = {
      "alliance",      "partners",         "axis",
      "horizon",       "theta_multipliers", "schedule_short_run",
      "policy",        "cuts",             "cut_front",
      "prohibitive_cap", "defence_sector"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ValidationError("unknown scenario key: " + k);

  ScenarioSpec spec;
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  if (auto v = get("alliance")) spec.blocs.alliance = splitList(*v);
  if (auto v = get("partners")) spec.blocs.partners = splitList(*v);
  if (auto v = get("axis")) spec.blocs.axis = splitList(*v);
  if (spec.blocs.alliance.empty())
    throw ValidationError("scenario file must list alliance countries");

  int horizon = 1;
  if (auto v = get("horizon"))
    horizon = static_cast<int>(csv::toInteger(*v, "horizon"));
  if (auto v = get("theta_multipliers")) {
    for (const auto& m : splitList(*v))
      spec.schedule.thetaMultipliers.push_back(csv::toDouble(m, "theta_multipliers"));
    if (get("horizon") && spec.schedule.horizon() != horizon)
      throw ValidationError("theta_multipliers length does not match horizon");
  } else {
    double shortRun = 0.5;
    if (auto v = get("schedule_short_run"))
      shortRun = csv::toDouble(*v, "schedule_short_run");
    spec.schedule = elasticity_schedule_default(horizon, shortRun);
  }

  std::string policy = get("policy").value_or("moderate_diversion");
  if (policy == "moderate_diversion") {
    spec.policy = PolicyPath::moderate();
    if (get("cuts") || get("cut_front"))
      throw ValidationError("moderate diversion takes no cuts");
  } else if (policy == "rapid_diversion") {
    if (auto v = get("cuts")) {
      spec.policy.kind = PolicyPath::Kind::rapid_diversion;
      for (const auto& c : splitList(*v))
        spec.policy.partnerCostCut.push_back(csv::toDouble(c, "cuts"));
      spec.policy.validate();
    } else {
      double front = 0.10;
      if (auto v = get("cut_front")) front = csv::toDouble(*v, "cut_front");
      spec.policy = PolicyPath::rapid(front, spec.schedule.horizon());
    }
  } else {
    throw ValidationError("unknown policy kind: " + policy);
  }

  if (auto v = get("prohibitive_cap"))
    spec.prohibitiveCap = csv::toDouble(*v, "prohibitive_cap");
  spec.defenceSector = get("defence_sector").value_or("");
  if (spec.defenceSector.empty())
    throw ValidationError("scenario file must name defence_sector");
  return spec;
}

void write_trajectory_csv(const TrajectoryResult& t, const std::string& path) {
  csv::Writer w(path);
  w.row({"year", "country", "metric", "value_pct"});
  for (const auto& y : t.years) {
    std::string year = std::to_string(y.year);
    for (size_t j = 0; j < t.countries.size(); ++j)
      w.row({year, t.countries[j], "gne_change", csv::full(y.gneChangePct[j])});
    w.row({year, "ALLIANCE", "gne_change", csv::full(y.allianceGnePct)});
    for (size_t j = 0; j < t.countries.size(); ++j)
      w.row({year, t.countries[j], "defence_output_change",
             csv::full(y.defenceOutputChangePct[j])});
    w.row({year, "ALLIANCE", "defence_output_change",
           csv::full(y.allianceDefenceOutputPct)});
  }
}

}  // namespace readykit
