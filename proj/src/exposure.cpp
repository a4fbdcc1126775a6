#include "readykit/exposure.hpp"

#include <algorithm>
#include <cmath>

#include "readykit/csv.hpp"

namespace readykit {

LeontiefInverse direct_linkage(const CoefficientMatrix& a) {
  // I + A so that the net entries (L - I) reduce to the first tier.
  return LeontiefInverse{Matrix::Identity(a.A.rows(), a.A.cols()) + a.A};
}

ExposureRecord foreign_input_reliance(const LeontiefInverse& L,
                                      const CountrySectorIndex& idx, const Vector& x,
                                      const std::string& country,
                                      const std::string& sector) {
  int c = idx.countryIndex(country);
  int j = idx.sectorIndex(sector);
  int col = idx.flat(c, j);

  ExposureRecord rec;
  rec.country = country;
  rec.sector = sector;
  for (int cp = 0; cp < idx.countryCount(); ++cp) {
    if (cp == c) continue;
    double sum = 0.0;
    for (int jp = 0; jp < idx.sectorCount(); ++jp) sum += L.L(idx.flat(cp, jp), col);
    rec.firByPartner.emplace_back(idx.country(cp), 100.0 * sum);
    rec.firTotalPct += 100.0 * sum;
  }
  return rec;
}

ExposureRecord foreign_market_reliance(const LeontiefInverse& L,
                                       const CountrySectorIndex& idx, const Vector& x,
                                       const std::string& country,
                                       const std::string& sector) {
  int c = idx.countryIndex(country);
  int j = idx.sectorIndex(sector);
  int row = idx.flat(c, j);
  if (x[row] <= 0.0)
    throw ValidationError("foreign_market_reliance: zero gross output for " + country +
                          ":" + sector);

  ExposureRecord rec;
  rec.country = country;
  rec.sector = sector;
  for (int cp = 0; cp < idx.countryCount(); ++cp) {
    if (cp == c) continue;
    double sum = 0.0;
    for (int jp = 0; jp < idx.sectorCount(); ++jp) {
      int col = idx.flat(cp, jp);
      sum += L.L(row, col) * x[col];
    }
    rec.fmrByPartner.emplace_back(idx.country(cp), 100.0 * sum / x[row]);
    rec.fmrTotalPct += 100.0 * sum / x[row];
  }
  return rec;
}

std::vector<ExposureRecord> exposure_table(const LeontiefInverse& L,
                                           const CountrySectorIndex& idx,
                                           const Vector& x,
                                           const std::vector<std::string>& sectors) {
  if (sectors.empty()) throw ValidationError("exposure_table: empty sector filter");
  for (const auto& s : sectors) idx.sectorIndex(s);  // validate early

  std::vector<std::string> countries = idx.countries();
  std::sort(countries.begin(), countries.end());

  std::vector<ExposureRecord> out;
  for (const auto& c : countries) {
    for (const auto& s : sectors) {
      ExposureRecord fir = foreign_input_reliance(L, idx, x, c, s);
      ExposureRecord rec = foreign_market_reliance(L, idx, x, c, s);
      rec.firTotalPct = fir.firTotalPct;
      rec.firByPartner = std::move(fir.firByPartner);
      out.push_back(std::move(rec));
    }
  }
  return out;
}

void write_exposure_long_csv(const std::vector<ExposureRecord>& records,
                             const std::string& path) {
  csv::Writer w(path);
  w.row({"country", "sector", "metric", "partner", "value_pct"});
  for (const auto& r : records) {
    for (const auto& [p, v] : r.firByPartner)
      w.row({r.country, r.sector, "FIR", p, csv::full(v)});
    w.row({r.country, r.sector, "FIR", "TOTAL", csv::full(r.firTotalPct)});
    for (const auto& [p, v] : r.fmrByPartner)
      w.row({r.country, r.sector, "FMR", p, csv::full(v)});
    w.row({r.country, r.sector, "FMR", "TOTAL", csv::full(r.fmrTotalPct)});
  }
}

void write_exposure_matrix_csv(const std::vector<ExposureRecord>& records,
                               const std::string& metric, const std::string& path) {
  if (metric != "FIR" && metric != "FMR")
    throw ValidationError("unknown exposure metric: " + metric);

  std::vector<std::string> partners;
  for (const auto& r : records) {
    const auto& bil = (metric == "FIR") ? r.firByPartner : r.fmrByPartner;
    for (const auto& [p, v] : bil)
      if (std::find(partners.begin(), partners.end(), p) == partners.end())
        partners.push_back(p);
  }
  std::sort(partners.begin(), partners.end());

  csv::Writer w(path);
  std::vector<std::string> header{metric};
  header.insert(header.end(), partners.begin(), partners.end());
  header.push_back("TOTAL");
  w.row(header);
  for (const auto& r : records) {
    const auto& bil = (metric == "FIR") ? r.firByPartner : r.fmrByPartner;
    std::vector<std::string> row{r.country + ":" + r.sector};
    for (const auto& p : partners) {
      auto it = std::find_if(bil.begin(), bil.end(),
                             [&](const auto& e) { return e.first == p; });
      row.push_back(it == bil.end() ? "" : csv::pct1(it->second));
    }
    row.push_back(csv::pct1(metric == "FIR" ? r.firTotalPct : r.fmrTotalPct));
    w.row(row);
  }
}

}  // namespace readykit
