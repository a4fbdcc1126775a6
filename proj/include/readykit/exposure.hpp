#pragma once

#include <string>
#include <vector>

#include "readykit/icio.hpp"
#include "readykit/types.hpp"

namespace readykit {

/// Foreign reliance of one (country, sector): FIR sums foreign gross output
/// embodied per unit of own gross output, FMR sums own output embodied in
/// foreign partners' gross output relative to own output. Both in percent.
struct ExposureRecord {
  std::string country;
  std::string sector;
  double firTotalPct = 0.0;
  double fmrTotalPct = 0.0;
  // Partner contributions in index country order, own country excluded.
  std::vector<std::pair<std::string, double>> firByPartner;
  std::vector<std::pair<std::string, double>> fmrByPartner;
};

/// Reliance is read off the net total-requirements entries (L - I), which
/// capture all higher-tier suppliers and buyers. Passing direct_linkage(a)
/// instead of the Leontief inverse restricts both measures to first-tier
/// linkages (diagnostic mode).
LeontiefInverse direct_linkage(const CoefficientMatrix& a);

ExposureRecord foreign_input_reliance(const LeontiefInverse& L,
                                      const CountrySectorIndex& idx, const Vector& x,
                                      const std::string& country,
                                      const std::string& sector);

ExposureRecord foreign_market_reliance(const LeontiefInverse& L,
                                       const CountrySectorIndex& idx, const Vector& x,
                                       const std::string& country,
                                       const std::string& sector);

/// One record per (country, sector in filter) with both FIR and FMR filled,
/// ordered by country code then sector filter order.
std::vector<ExposureRecord> exposure_table(const LeontiefInverse& L,
                                           const CountrySectorIndex& idx,
                                           const Vector& x,
                                           const std::vector<std::string>& sectors);

/// Long format: country,sector,metric,partner,value_pct (full precision).
void write_exposure_long_csv(const std::vector<ExposureRecord>& records,
                             const std::string& path);

/// Pivoted country x partner matrix for one metric, one decimal per cell.
void write_exposure_matrix_csv(const std::vector<ExposureRecord>& records,
                               const std::string& metric, const std::string& path);

}  // namespace readykit
