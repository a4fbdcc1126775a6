#include "readykit/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "readykit/csv.hpp"

namespace readykit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ComponentName {
  Component component;
  const char* name;
};

constexpr ComponentName kComponentNames[] = {
    {Component::prerequisites, "prerequisites"},
    {Component::preparedness, "preparedness"},
    {Component::shock_resistance, "shock_resistance"},
    {Component::crisis_recovery, "crisis_recovery"},
    {Component::risk_exposure, "risk_exposure"},
};

std::vector<int> rankDescending(const Vector& scores,
                                const std::vector<std::string>& countries) {
  std::vector<int> order(countries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return countries[a] < countries[b];
  });
  std::vector<int> rank(countries.size());
  for (size_t pos = 0; pos < order.size(); ++pos)
    rank[order[pos]] = static_cast<int>(pos) + 1;
  return rank;
}

}  // namespace

const char* component_name(Component c) {
  for (const auto& e : kComponentNames)
    if (e.component == c) return e.name;
  return "?";
}

Component component_from_name(const std::string& name) {
  for (const auto& e : kComponentNames)
    if (name == e.name) return e.component;
  throw ValidationError("unknown resilience component: " + name);
}

const char* direction_name(Direction d) {
  return d == Direction::higher_better ? "higher_better" : "lower_better";
}

Direction direction_from_name(const std::string& name) {
  if (name == "higher_better") return Direction::higher_better;
  if (name == "lower_better") return Direction::lower_better;
  throw ValidationError("unknown variable direction: " + name);
}

int ResilienceDataset::recordedCount(int variable) const {
  int n = 0;
  for (int c = 0; c < static_cast<int>(countries.size()); ++c)
    if (recorded(c, variable)) ++n;
  return n;
}

Vector normalize_variable(const Vector& values, Direction direction,
                          EariOptions::Normalization method, std::string* warning) {
  // Orient so that higher is better before mapping onto [0, 10].
  Vector v = values;
  if (direction == Direction::lower_better) v = -v;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double mean = 0.0, m2 = 0.0;
  int n = 0;
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) continue;
    ++n;
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
    double delta = v[i] - mean;
    mean += delta / n;
    m2 += delta * (v[i] - mean);
  }
  if (n == 0) throw ValidationError("normalize_variable: no recorded values");

  Vector out = Vector::Constant(v.size(), kNaN);
  if (hi == lo) {
    if (warning) *warning = "constant variable mapped to 5.0";
    for (int i = 0; i < v.size(); ++i)
      if (std::isfinite(v[i])) out[i] = 5.0;
    return out;
  }

  if (method == EariOptions::Normalization::minmax) {
    for (int i = 0; i < v.size(); ++i)
      if (std::isfinite(v[i])) out[i] = 10.0 * (v[i] - lo) / (hi - lo);
  } else {
    // z-scores clipped at +-3 sigma, then affinely mapped onto [0, 10].
    double sd = std::sqrt(m2 / (n - 1));
    for (int i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) continue;
      double z = std::clamp((v[i] - mean) / sd, -3.0, 3.0);
      out[i] = 10.0 * (z + 3.0) / 6.0;
    }
  }
  return out;
}

ResilienceDataset impute_missing(const ResilienceDataset& d) {
  ResilienceDataset out = d;
  for (int q = 0; q < static_cast<int>(d.variables.size()); ++q) {
    double sum = 0.0;
    int n = 0;
    for (int c = 0; c < static_cast<int>(d.countries.size()); ++c) {
      if (d.recorded(c, q)) {
        sum += d.values(c, q);
        ++n;
      }
    }
    if (n == 0)
      throw ValidationError("impute_missing: variable '" + d.variables[q].name +
                            "' has no recorded values");
    double mean = sum / n;
    for (int c = 0; c < static_cast<int>(d.countries.size()); ++c)
      if (!d.recorded(c, q)) out.values(c, q) = mean;
  }
  return out;
}

ResilienceDataset normalize_dataset(const ResilienceDataset& d,
                                    EariOptions::Normalization method) {
  ResilienceDataset out = d;
  for (int q = 0; q < static_cast<int>(d.variables.size()); ++q) {
    std::string warning;
    out.values.col(q) =
        normalize_variable(d.values.col(q), d.variables[q].direction, method, &warning);
    if (!warning.empty())
      out.warnings.push_back(d.variables[q].name + ": " + warning);
    // Directions are consumed by normalization; downstream means treat all
    // columns as higher-is-better scores.
    out.variables[q].direction = Direction::higher_better;
  }
  return out;
}

double component_score(const ResilienceDataset& complete, const std::string& country,
                       Component comp, bool allowRiskExposure) {
  if (comp == Component::risk_exposure && !allowRiskExposure)
    throw ValidationError(
        "component_score: risk_exposure is excluded by default; pass the override "
        "to include it");
  auto it = std::find(complete.countries.begin(), complete.countries.end(), country);
  if (it == complete.countries.end())
    throw ValidationError("unknown country: " + country);
  int c = static_cast<int>(it - complete.countries.begin());

  double sum = 0.0;
  int n = 0;
  for (int q = 0; q < static_cast<int>(complete.variables.size()); ++q) {
    if (complete.variables[q].component != comp) continue;
    if (!complete.recorded(c, q))
      throw ValidationError("component_score requires a complete dataset (missing " +
                            complete.variables[q].name + " for " + country + ")");
    sum += complete.values(c, q);
    ++n;
  }
  if (n == 0)
    throw ValidationError(std::string("component_score: empty component ") +
                          component_name(comp));
  return sum / n;
}

EariResult eari_table(const ResilienceDataset& d, const EariOptions& opts) {
  ResilienceDataset prepared =
      opts.order == EariOptions::Order::normalize_then_impute
          ? impute_missing(normalize_dataset(d, opts.normalization))
          : normalize_dataset(impute_missing(d), opts.normalization);

  EariResult r;
  r.countries = d.countries;
  for (const auto& e : kComponentNames) {
    if (e.component == Component::risk_exposure && !opts.includeRiskExposure) continue;
    bool any = false;
    for (const auto& v : d.variables)
      if (v.component == e.component) any = true;
    if (any) r.components.push_back(e.component);
  }
  if (r.components.empty()) throw ValidationError("eari_table: no components present");

  int J = static_cast<int>(r.countries.size());
  int K = static_cast<int>(r.components.size());
  r.scores = Matrix::Zero(J, K);
  r.overall = Vector::Zero(J);
  for (int c = 0; c < J; ++c) {
    for (int k = 0; k < K; ++k)
      r.scores(c, k) = component_score(prepared, r.countries[c], r.components[k],
                                       opts.includeRiskExposure);
    r.overall[c] = r.scores.row(c).mean();
  }

  for (int k = 0; k < K; ++k)
    r.componentRanks.push_back(rankDescending(r.scores.col(k), r.countries));
  r.overallRank = rankDescending(r.overall, r.countries);
  return r;
}

ResilienceDataset load_resilience_csv(const std::string& metadataPath,
                                      const std::string& valuesPath) {
  ResilienceDataset d;
  {
    csv::Table tab = csv::read(metadataPath);
    int cv = csv::column(tab, "variable");
    int cc = csv::column(tab, "component");
    int cd = csv::column(tab, "direction");
    int cs = tab.header.size() > 3 ? csv::column(tab, "source") : -1;
    for (const auto& row : tab.rows) {
      VariableMeta m;
      m.name = row.at(cv);
      m.component = component_from_name(row.at(cc));
      m.direction = direction_from_name(row.at(cd));
      if (cs >= 0 && cs < static_cast<int>(row.size())) m.source = row[cs];
      for (const auto& existing : d.variables)
        if (existing.name == m.name)
          throw ValidationError("duplicate variable in metadata: " + m.name);
      d.variables.push_back(std::move(m));
    }
  }
  csv::Table tab = csv::read(valuesPath);
  int cc = csv::column(tab, "country");
  int cv = csv::column(tab, "variable");
  int cx = csv::column(tab, "value");
  for (const auto& row : tab.rows) {
    if (std::find(d.countries.begin(), d.countries.end(), row.at(cc)) ==
        d.countries.end())
      d.countries.push_back(row.at(cc));
  }
  d.values = Matrix::Constant(d.countries.size(), d.variables.size(), kNaN);
  for (const auto& row : tab.rows) {
    int c = static_cast<int>(std::find(d.countries.begin(), d.countries.end(),
                                       row.at(cc)) -
                             d.countries.begin());
    int q = -1;
    for (int i = 0; i < static_cast<int>(d.variables.size()); ++i)
      if (d.variables[i].name == row.at(cv)) q = i;
    if (q < 0)
      throw ValidationError("value row references unknown variable: " + row.at(cv));
    if (d.recorded(c, q))
      throw ValidationError("duplicate value for " + row.at(cc) + "/" + row.at(cv));
    d.values(c, q) = csv::toDouble(row.at(cx), "resilience value");
  }
  for (int q = 0; q < static_cast<int>(d.variables.size()); ++q)
    if (d.recordedCount(q) == 0)
      throw ValidationError("variable '" + d.variables[q].name +
                            "' has no recorded values");
  return d;
}

void write_eari_csv(const EariResult& r, const std::string& path) {
  csv::Writer w(path);
  std::vector<std::string> header{"country"};
  for (Component c : r.components) header.push_back(component_name(c));
  header.push_back("overall");
  for (Component c : r.components)
    header.push_back(std::string("rank_") + component_name(c));
  header.push_back("rank_overall");
  w.row(header);
  for (size_t c = 0; c < r.countries.size(); ++c) {
    std::vector<std::string> row{r.countries[c]};
    for (size_t k = 0; k < r.components.size(); ++k)
      row.push_back(csv::dec2(r.scores(c, k)));
    row.push_back(csv::dec2(r.overall[c]));
    for (size_t k = 0; k < r.components.size(); ++k)
      row.push_back(std::to_string(r.componentRanks[k][c]));
    row.push_back(std::to_string(r.overallRank[c]));
    w.row(row);
  }
}

}  // namespace readykit
