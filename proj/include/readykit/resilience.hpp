#pragma once

#include <string>
#include <vector>

#include "readykit/types.hpp"

namespace readykit {

enum class Component {
  prerequisites,
  preparedness,
  shock_resistance,
  crisis_recovery,
  risk_exposure
};

enum class Direction { higher_better, lower_better };

const char* component_name(Component c);
Component component_from_name(const std::string& name);
const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);

struct VariableMeta {
  std::string name;
  Component component;
  Direction direction;
  std::string source;  // free text, informational
};

/// Country x variable panel. Missing values are NaN cells.
struct ResilienceDataset {
  std::vector<std::string> countries;
  std::vector<VariableMeta> variables;
  Matrix values;  // countries x variables, NaN = missing

  bool recorded(int country, int variable) const {
    return std::isfinite(values(country, variable));
  }
  int recordedCount(int variable) const;
  std::vector<std::string> warnings;
};

struct EariOptions {
  enum class Normalization { minmax, zscore };
  enum class Order { normalize_then_impute, impute_then_normalize };
  Normalization normalization = Normalization::minmax;
  Order order = Order::normalize_then_impute;
  bool includeRiskExposure = false;
};

/// Maps one variable onto [0, 10]; lower-is-better variables are inverted
/// first. Missing entries stay missing. A constant variable maps every
/// recorded value to 5.0 (flagged via the returned warning).
Vector normalize_variable(const Vector& values, Direction direction,
                          EariOptions::Normalization method =
                              EariOptions::Normalization::minmax,
                          std::string* warning = nullptr);

/// Replaces each missing cell with the mean over the recorded countries of
/// that variable. Errors on a fully-missing variable.
ResilienceDataset impute_missing(const ResilienceDataset& d);

/// Normalizes every variable in place (per normalize_variable).
ResilienceDataset normalize_dataset(const ResilienceDataset& d,
                                    EariOptions::Normalization method =
                                        EariOptions::Normalization::minmax);

/// Arithmetic mean of the country's variable scores in one component; the
/// dataset must be complete. risk_exposure requires allowRiskExposure.
double component_score(const ResilienceDataset& complete, const std::string& country,
                       Component comp, bool allowRiskExposure = false);

struct EariResult {
  std::vector<std::string> countries;
  std::vector<Component> components;  // included components, enum order
  Matrix scores;                      // countries x components, in [0, 10]
  Vector overall;                     // mean over included components
  std::vector<std::vector<int>> componentRanks;  // [component][country], 1-based
  std::vector<int> overallRank;                  // 1-based
};

/// Component scores and ranks for every country. Rank 1 is the highest score;
/// ties break on country code.
EariResult eari_table(const ResilienceDataset& d, const EariOptions& opts = {});

// CSV surfaces: metadata `variable,component,direction,source`; values
// `country,variable,value` (absent rows = missing).
ResilienceDataset load_resilience_csv(const std::string& metadataPath,
                                      const std::string& valuesPath);

/// Presentation table (one decimal scores) plus rank columns.
void write_eari_csv(const EariResult& r, const std::string& path);

}  // namespace readykit
