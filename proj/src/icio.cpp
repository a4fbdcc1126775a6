#include "readykit/icio.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <set>

#include "readykit/csv.hpp"

namespace readykit {

namespace {

// Scale for the relative identity check. Zero-output rows fall back to a tiny
// fraction of the largest output so an all-zero row still passes.
double residualScale(double own, double worldMax) {
  return std::max(own, 1e-9 * worldMax);
}

IcioTable loadTotals(const std::string& totalsPath) {
  csv::Table tab = csv::read(totalsPath);
  int cc = csv::column(tab, "country");
  int cs = csv::column(tab, "sector");
  int cx = csv::column(tab, "gross_output");
  int cv = csv::column(tab, "value_added");

  std::vector<std::string> countries, sectors;
  for (const auto& row : tab.rows) {
    const std::string& c = row.at(cc);
    const std::string& s = row.at(cs);
    if (std::find(countries.begin(), countries.end(), c) == countries.end())
      countries.push_back(c);
    if (std::find(sectors.begin(), sectors.end(), s) == sectors.end())
      sectors.push_back(s);
  }

  IcioTable t;
  t.index = CountrySectorIndex(countries, sectors);
  int n = t.index.size();
  t.Z = Matrix::Zero(n, n);
  t.F = Matrix::Zero(n, t.index.countryCount());
  t.va = Vector::Zero(n);
  t.x = Vector::Zero(n);

  std::set<int> seen;
  for (const auto& row : tab.rows) {
    int k = t.index.flatOf(row.at(cc), row.at(cs));
    if (!seen.insert(k).second)
      throw ValidationError("duplicate totals row for " + t.index.label(k));
    t.x[k] = csv::toDouble(row.at(cx), "gross_output");
    t.va[k] = csv::toDouble(row.at(cv), "value_added");
    if (t.x[k] < 0.0)
      throw ValidationError("negative gross output for " + t.index.label(k));
    if (t.va[k] < 0.0)
      t.warnings.push_back("negative value added for " + t.index.label(k) +
                           " (accepted; excluded from coefficients)");
  }
  if (static_cast<int>(seen.size()) != n)
    throw ValidationError("totals file does not cover the full country x sector grid");

  auto it = tab.directives.find("unit");
  if (it != tab.directives.end()) t.unit = it->second;
  return t;
}

void fillLong(IcioTable& t, const csv::Table& tab) {
  int co = csv::column(tab, "origin_country");
  int cs = csv::column(tab, "origin_sector");
  int cd = csv::column(tab, "dest_country");
  int cu = csv::column(tab, "dest_sector");
  int cv = csv::column(tab, "value");
  for (const auto& row : tab.rows) {
    int from = t.index.flatOf(row.at(co), row.at(cs));
    double v = csv::toDouble(row.at(cv), "flow value");
    if (v < 0.0)
      throw ValidationError("negative flow entry at " + t.index.label(from) + " -> " +
                            row.at(cd) + ":" + row.at(cu));
    if (row.at(cu) == "FINAL") {
      t.F(from, t.index.countryIndex(row.at(cd))) += v;
    } else {
      t.Z(from, t.index.flatOf(row.at(cd), row.at(cu))) += v;
    }
  }
}

void fillMatrix(IcioTable& t, const csv::Table& tab) {
  // Header: empty corner, then country:sector columns and country:FINAL columns.
  struct Col {
    bool final;
    int idx;  // flat (c,s) or country index
  };
  std::vector<Col> cols;
  for (size_t i = 1; i < tab.header.size(); ++i) {
    const std::string& h = tab.header[i];
    size_t colon = h.find(':');
    if (colon == std::string::npos)
      throw ValidationError("malformed header: matrix column '" + h +
                            "' is not country:sector");
    std::string c = h.substr(0, colon), s = h.substr(colon + 1);
    if (s == "FINAL")
      cols.push_back({true, t.index.countryIndex(c)});
    else
      cols.push_back({false, t.index.flatOf(c, s)});
  }
  for (const auto& row : tab.rows) {
    const std::string& h = row.at(0);
    size_t colon = h.find(':');
    if (colon == std::string::npos)
      throw ValidationError("malformed matrix row label: '" + h + "'");
    int from = t.index.flatOf(h.substr(0, colon), h.substr(colon + 1));
    if (row.size() != cols.size() + 1)
      throw ValidationError("matrix row " + h + " has wrong field count");
    for (size_t i = 0; i < cols.size(); ++i) {
      double v = csv::toDouble(row[i + 1], "flow value");
      if (v < 0.0)
        throw ValidationError("negative flow entry in row " + h);
      if (cols[i].final)
        t.F(from, cols[i].idx) += v;
      else
        t.Z(from, cols[i].idx) += v;
    }
  }
}

}  // namespace

IcioCheck check_identities(const IcioTable& t, double tolerance) {
  IcioCheck r;
  int n = t.index.size();
  double worldMax = t.x.size() ? t.x.maxCoeff() : 0.0;
  for (int i = 0; i < n; ++i) {
    double rowSum = t.Z.row(i).sum() + t.F.row(i).sum();
    double rel = std::abs(t.x[i] - rowSum) / residualScale(t.x[i], worldMax);
    if (rel > r.maxRowResidual) {
      r.maxRowResidual = rel;
      r.worstRow = i;
    }
  }
  for (int j = 0; j < n; ++j) {
    double colSum = t.Z.col(j).sum() + t.va[j];
    double rel = std::abs(t.x[j] - colSum) / residualScale(t.x[j], worldMax);
    if (rel > r.maxColResidual) {
      r.maxColResidual = rel;
      r.worstCol = j;
    }
  }
  if (r.maxRowResidual > tolerance)
    r.violations.push_back("row identity violated at " + t.index.label(r.worstRow) +
                           " (relative residual " + csv::full(r.maxRowResidual) + ")");
  if (r.maxColResidual > tolerance)
    r.violations.push_back("column identity violated at " + t.index.label(r.worstCol) +
                           " (relative residual " + csv::full(r.maxColResidual) + ")");
  return r;
}

IcioTable load_icio(const std::string& flowsPath, const std::string& totalsPath,
                    const IcioLoadOptions& opts) {
  IcioTable t = loadTotals(totalsPath);
  csv::Table flows = csv::read(flowsPath);

  auto it = flows.directives.find("unit");
  if (it != flows.directives.end()) {
    if (t.unit != "unspecified" && t.unit != it->second)
      throw ValidationError("unit mismatch between flows (" + it->second +
                            ") and totals (" + t.unit + ")");
    t.unit = it->second;
  }

  using Format = IcioLoadOptions::Format;
  Format fmt = opts.format;
  if (fmt == Format::automatic) {
    fmt = (!flows.header.empty() && flows.header[0] == "origin_country")
              ? Format::longForm
              : Format::matrix;
  }
  if (fmt == Format::longForm)
    fillLong(t, flows);
  else
    fillMatrix(t, flows);

  IcioCheck check = check_identities(t, opts.tolerance);
  if (!check.ok()) throw ValidationError("ICIO table rejected: " + check.violations[0]);
  return t;
}

IcioTable aggregate_sectors(const IcioTable& t,
                            const std::map<std::string, std::string>& mapping) {
  std::vector<std::string> newSectors;
  std::vector<int> target(t.index.sectorCount());
  for (int s = 0; s < t.index.sectorCount(); ++s) {
    auto it = mapping.find(t.index.sector(s));
    if (it == mapping.end())
      throw ValidationError("sector mapping missing a sector: " + t.index.sector(s));
    auto pos = std::find(newSectors.begin(), newSectors.end(), it->second);
    if (pos == newSectors.end()) {
      target[s] = static_cast<int>(newSectors.size());
      newSectors.push_back(it->second);
    } else {
      target[s] = static_cast<int>(pos - newSectors.begin());
    }
  }

  IcioTable out;
  out.index = CountrySectorIndex(t.index.countries(), newSectors);
  out.unit = t.unit;
  int J = t.index.countryCount();
  int n = out.index.size();
  out.Z = Matrix::Zero(n, n);
  out.F = Matrix::Zero(n, J);
  out.va = Vector::Zero(n);
  out.x = Vector::Zero(n);

  auto mapFlat = [&](int k) {
    auto [c, s] = t.index.unflat(k);
    return out.index.flat(c, target[s]);
  };
  for (int i = 0; i < t.index.size(); ++i) {
    int gi = mapFlat(i);
    out.va[gi] += t.va[i];
    out.x[gi] += t.x[i];
    out.F.row(gi) += t.F.row(i);
    for (int j = 0; j < t.index.size(); ++j) out.Z(gi, mapFlat(j)) += t.Z(i, j);
  }
  return out;
}

CoefficientMatrix technical_coefficients(const IcioTable& t) {
  CoefficientMatrix c;
  int n = t.index.size();
  c.A = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (t.x[j] <= 0.0) {
      c.zeroOutputColumns.push_back(j);
      continue;
    }
    c.A.col(j) = t.Z.col(j) / t.x[j];
  }
  return c;
}

LeontiefInverse leontief_inverse(const CoefficientMatrix& a) {
  int n = static_cast<int>(a.A.rows());
  Matrix iMinusA = Matrix::Identity(n, n) - a.A;
  Eigen::PartialPivLU<Matrix> lu(iMinusA);
  Matrix L = lu.solve(Matrix::Identity(n, n));

  // For nonnegative A, the inverse equals the requirements series iff it is
  // entrywise >= I; negative entries certify a non-productive matrix.
  double residual = (L * iMinusA - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  double minExcess = (L - Matrix::Identity(n, n)).minCoeff();
  if (!std::isfinite(residual) || residual > 1e-10 || minExcess < -1e-12)
    throw SolverError(
        "coefficient matrix is not productive: total requirements series does not "
        "converge (inverse residual " +
        csv::full(residual) + ", min excess " + csv::full(minExcess) + ")");
  return LeontiefInverse{std::move(L)};
}

void write_icio_matrix(const IcioTable& t, const std::string& flowsPath,
                       const std::string& totalsPath) {
  int n = t.index.size();
  int J = t.index.countryCount();
  {
    csv::Writer w(flowsPath);
    w.directive("unit", t.unit);
    std::vector<std::string> header{""};
    for (int j = 0; j < n; ++j) header.push_back(t.index.label(j));
    for (int c = 0; c < J; ++c) header.push_back(t.index.country(c) + ":FINAL");
    w.row(header);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> row{t.index.label(i)};
      for (int j = 0; j < n; ++j) row.push_back(csv::full(t.Z(i, j)));
      for (int c = 0; c < J; ++c) row.push_back(csv::full(t.F(i, c)));
      w.row(row);
    }
  }
  {
    csv::Writer w(totalsPath);
    w.directive("unit", t.unit);
    w.row({"country", "sector", "gross_output", "value_added"});
    for (int k = 0; k < n; ++k) {
      auto [c, s] = t.index.unflat(k);
      w.row({t.index.country(c), t.index.sector(s), csv::full(t.x[k]),
             csv::full(t.va[k])});
    }
  }
}

}  // namespace readykit
