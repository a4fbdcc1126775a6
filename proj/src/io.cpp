#include "readykit/io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "readykit/csv.hpp"

namespace readykit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string joinPath(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

void save_baseline(const ModelBaseline& b, const std::string& dir) {
  fs::create_directories(dir);
  const int J = b.J(), S = b.S();

  json manifest;
  manifest["countries"] = b.index.countries();
  manifest["sectors"] = b.index.sectors();
  manifest["files"] = {"pi_int.csv", "pi_fin.csv",  "gamma.csv",  "alpha.csv",
                       "theta.csv",  "factors.csv", "output0.csv"};
  manifest["warnings"] = b.warnings;
  std::ofstream(joinPath(dir, "baseline_manifest.json")) << manifest.dump(2) << "\n";

  {
    csv::Writer w(joinPath(dir, "pi_int.csv"));
    w.row({"origin", "dest", "supply_sector", "use_sector", "share"});
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        for (int r = 0; r < S; ++r)
          for (int i = 0; i < J; ++i) {
            double v = b.piInt[b.intIdx(i, j, r, s)];
            if (v != 0.0)
              w.row({b.index.country(i), b.index.country(j), b.index.sector(r),
                     b.index.sector(s), csv::full(v)});
          }
  }
  {
    csv::Writer w(joinPath(dir, "pi_fin.csv"));
    w.row({"origin", "dest", "sector", "share"});
    for (int j = 0; j < J; ++j)
      for (int r = 0; r < S; ++r)
        for (int i = 0; i < J; ++i) {
          double v = b.piFin[b.finIdx(i, j, r)];
          if (v != 0.0)
            w.row({b.index.country(i), b.index.country(j), b.index.sector(r),
                   csv::full(v)});
        }
  }
  {
    csv::Writer w(joinPath(dir, "gamma.csv"));
    w.row({"country", "supply_sector", "use_sector", "share"});
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        for (int r = 0; r < S; ++r) {
          double v = b.gamma[b.jsr(j, r, s)];
          if (v != 0.0)
            w.row({b.index.country(j), b.index.sector(r), b.index.sector(s),
                   csv::full(v)});
        }
  }
  {
    csv::Writer w(joinPath(dir, "alpha.csv"));
    w.row({"country", "sector", "share"});
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        w.row({b.index.country(j), b.index.sector(s), csv::full(b.alpha[b.js(j, s)])});
  }
  {
    csv::Writer w(joinPath(dir, "theta.csv"));
    w.row({"sector", "theta"});
    for (int r = 0; r < S; ++r) w.row({b.index.sector(r), csv::full(b.theta[r])});
  }
  {
    csv::Writer w(joinPath(dir, "factors.csv"));
    w.row({"country", "wage_bill", "deficit"});
    for (int j = 0; j < J; ++j)
      w.row({b.index.country(j), csv::full(b.wageBill[j]), csv::full(b.deficit[j])});
  }
  {
    csv::Writer w(joinPath(dir, "output0.csv"));
    w.row({"country", "sector", "gross_output"});
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        w.row({b.index.country(j), b.index.sector(s),
               csv::full(b.output0[b.js(j, s)])});
  }
}

ModelBaseline load_baseline(const std::string& dir) {
  std::ifstream mf(joinPath(dir, "baseline_manifest.json"));
  if (!mf) throw ValidationError("missing baseline_manifest.json in " + dir);
  json manifest = json::parse(mf, nullptr, true, true);

  ModelBaseline b;
  b.index = CountrySectorIndex(manifest.at("countries").get<std::vector<std::string>>(),
                               manifest.at("sectors").get<std::vector<std::string>>());
  const int J = b.J(), S = b.S();
  b.piInt = Vector::Zero(static_cast<Eigen::Index>(J) * J * S * S);
  b.piFin = Vector::Zero(static_cast<Eigen::Index>(J) * J * S);
  b.gamma = Vector::Zero(static_cast<Eigen::Index>(J) * S * S);
  b.alpha = Vector::Zero(static_cast<Eigen::Index>(J) * S);
  b.theta = Vector::Zero(S);
  b.wageBill = Vector::Zero(J);
  b.deficit = Vector::Zero(J);
  b.output0 = Vector::Zero(static_cast<Eigen::Index>(J) * S);

  {
    csv::Table t = csv::read(joinPath(dir, "pi_int.csv"));
    int co = csv::column(t, "origin"), cd = csv::column(t, "dest");
    int cr = csv::column(t, "supply_sector"), cs = csv::column(t, "use_sector");
    int cv = csv::column(t, "share");
    for (const auto& row : t.rows)
      b.piInt[b.intIdx(b.index.countryIndex(row.at(co)),
                       b.index.countryIndex(row.at(cd)),
                       b.index.sectorIndex(row.at(cr)),
                       b.index.sectorIndex(row.at(cs)))] =
          csv::toDouble(row.at(cv), "pi_int share");
  }
  {
    csv::Table t = csv::read(joinPath(dir, "pi_fin.csv"));
    int co = csv::column(t, "origin"), cd = csv::column(t, "dest");
    int cr = csv::column(t, "sector"), cv = csv::column(t, "share");
    for (const auto& row : t.rows)
      b.piFin[b.finIdx(b.index.countryIndex(row.at(co)),
                       b.index.countryIndex(row.at(cd)),
                       b.index.sectorIndex(row.at(cr)))] =
          csv::toDouble(row.at(cv), "pi_fin share");
  }
  {
    csv::Table t = csv::read(joinPath(dir, "gamma.csv"));
    int cj = csv::column(t, "country"), cr = csv::column(t, "supply_sector");
    int cs = csv::column(t, "use_sector"), cv = csv::column(t, "share");
    for (const auto& row : t.rows)
      b.gamma[b.jsr(b.index.countryIndex(row.at(cj)),
                    b.index.sectorIndex(row.at(cr)),
                    b.index.sectorIndex(row.at(cs)))] =
          csv::toDouble(row.at(cv), "gamma share");
  }
  {
    csv::Table t = csv::read(joinPath(dir, "alpha.csv"));
    int cj = csv::column(t, "country"), cs = csv::column(t, "sector");
    int cv = csv::column(t, "share");
    for (const auto& row : t.rows)
      b.alpha[b.js(b.index.countryIndex(row.at(cj)),
                   b.index.sectorIndex(row.at(cs)))] =
          csv::toDouble(row.at(cv), "alpha share");
  }
  {
    csv::Table t = csv::read(joinPath(dir, "theta.csv"));
    int cs = csv::column(t, "sector"), cv = csv::column(t, "theta");
    for (const auto& row : t.rows)
      b.theta[b.index.sectorIndex(row.at(cs))] = csv::toDouble(row.at(cv), "theta");
  }
  {
    csv::Table t = csv::read(joinPath(dir, "factors.csv"));
    int cj = csv::column(t, "country"), cw = csv::column(t, "wage_bill");
    int cd = csv::column(t, "deficit");
    for (const auto& row : t.rows) {
      int j = b.index.countryIndex(row.at(cj));
      b.wageBill[j] = csv::toDouble(row.at(cw), "wage_bill");
      b.deficit[j] = csv::toDouble(row.at(cd), "deficit");
    }
  }
  {
    csv::Table t = csv::read(joinPath(dir, "output0.csv"));
    int cj = csv::column(t, "country"), cs = csv::column(t, "sector");
    int cv = csv::column(t, "gross_output");
    for (const auto& row : t.rows)
      b.output0[b.js(b.index.countryIndex(row.at(cj)),
                     b.index.sectorIndex(row.at(cs)))] =
          csv::toDouble(row.at(cv), "gross_output");
  }
  return b;
}

TradeCostShock load_shock_csv(const ModelBaseline& b, const std::string& path,
                              double prohibitiveCap) {
  TradeCostShock shock = TradeCostShock::unit(b);
  shock.prohibitiveCap = prohibitiveCap;

  csv::Table t = csv::read(path);
  int co = csv::column(t, "origin"), cd = csv::column(t, "dest");
  int cr = csv::column(t, "supply_sector"), cu = csv::column(t, "use");
  int cv = csv::column(t, "tau_hat");

  auto expandCountry = [&](const std::string& code) {
    std::vector<int> out;
    if (code == "*")
      for (int j = 0; j < b.J(); ++j) out.push_back(j);
    else
      out.push_back(b.index.countryIndex(code));
    return out;
  };
  auto expandSector = [&](const std::string& code) {
    std::vector<int> out;
    if (code == "*")
      for (int s = 0; s < b.S(); ++s) out.push_back(s);
    else
      out.push_back(b.index.sectorIndex(code));
    return out;
  };

  for (const auto& row : t.rows) {
    double tau = csv::toDouble(row.at(cv), "tau_hat");
    bool finalUse = row.at(cu) == "FINAL";
    bool anyUse = row.at(cu) == "*";
    for (int i : expandCountry(row.at(co)))
      for (int j : expandCountry(row.at(cd)))
        for (int r : expandSector(row.at(cr))) {
          if (finalUse || anyUse) shock.tauFin[b.finIdx(i, j, r)] = tau;
          if (!finalUse)
            for (int s : anyUse ? expandSector("*") : expandSector(row.at(cu)))
              shock.tauInt[b.intIdx(i, j, r, s)] = tau;
        }
  }
  return shock;
}

void write_equilibrium_country_csv(const EquilibriumChange& e, const ModelBaseline& b,
                                   const std::string& path) {
  csv::Writer w(path);
  w.row({"country", "wage_hat", "price_cons_hat", "real_gne_change_pct"});
  for (int j = 0; j < b.J(); ++j)
    w.row({b.index.country(j), csv::full(e.wageHat[j]), csv::full(e.priceConsHat[j]),
           csv::full(100.0 * e.realGneChange[j])});
}

void write_equilibrium_sector_csv(const EquilibriumChange& e, const ModelBaseline& b,
                                  const std::string& path) {
  csv::Writer w(path);
  w.row({"country", "sector", "cost_hat", "output", "expenditure",
         "real_output_change_pct"});
  for (int j = 0; j < b.J(); ++j)
    for (int s = 0; s < b.S(); ++s) {
      int k = b.js(j, s);
      double roc = e.realOutputChange[k];
      w.row({b.index.country(j), b.index.sector(s), csv::full(e.costHat[k]),
             csv::full(e.output[k]), csv::full(e.expenditure[k]),
             std::isfinite(roc) ? csv::full(100.0 * roc) : ""});
    }
}

void write_equilibrium_shares_csv(const EquilibriumChange& e, const ModelBaseline& b,
                                  const std::string& intPath,
                                  const std::string& finPath) {
  {
    csv::Writer w(intPath);
    w.row({"origin", "dest", "supply_sector", "use_sector", "share"});
    for (int j = 0; j < b.J(); ++j)
      for (int s = 0; s < b.S(); ++s)
        for (int r = 0; r < b.S(); ++r)
          for (int i = 0; i < b.J(); ++i) {
            double v = e.piIntNew[b.intIdx(i, j, r, s)];
            if (v != 0.0)
              w.row({b.index.country(i), b.index.country(j), b.index.sector(r),
                     b.index.sector(s), csv::full(v)});
          }
  }
  {
    csv::Writer w(finPath);
    w.row({"origin", "dest", "sector", "share"});
    for (int j = 0; j < b.J(); ++j)
      for (int r = 0; r < b.S(); ++r)
        for (int i = 0; i < b.J(); ++i) {
          double v = e.piFinNew[b.finIdx(i, j, r)];
          if (v != 0.0)
            w.row({b.index.country(i), b.index.country(j), b.index.sector(r),
                   csv::full(v)});
        }
  }
}

Vector load_theta_csv(const CountrySectorIndex& idx, const std::string& path) {
  csv::Table t = csv::read(path);
  int cs = csv::column(t, "sector"), cv = csv::column(t, "theta");
  Vector theta = Vector::Zero(idx.sectorCount());
  std::vector<bool> seen(idx.sectorCount(), false);
  for (const auto& row : t.rows) {
    int s = idx.sectorIndex(row.at(cs));
    theta[s] = csv::toDouble(row.at(cv), "theta");
    seen[s] = true;
  }
  for (int s = 0; s < idx.sectorCount(); ++s)
    if (!seen[s]) throw ValidationError("theta missing for sector " + idx.sector(s));
  return theta;
}

Vector load_country_vector_csv(const CountrySectorIndex& idx, const std::string& path,
                               const std::string& valueColumn) {
  csv::Table t = csv::read(path);
  int cc = csv::column(t, "country"), cv = csv::column(t, valueColumn);
  Vector v = Vector::Zero(idx.countryCount());
  std::vector<bool> seen(idx.countryCount(), false);
  for (const auto& row : t.rows) {
    int j = idx.countryIndex(row.at(cc));
    v[j] = csv::toDouble(row.at(cv), valueColumn);
    seen[j] = true;
  }
  for (int j = 0; j < idx.countryCount(); ++j)
    if (!seen[j])
      throw ValidationError(valueColumn + " missing for country " + idx.country(j));
  return v;
}

}  // namespace readykit
