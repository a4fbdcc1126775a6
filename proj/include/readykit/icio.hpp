#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "readykit/types.hpp"

namespace readykit {

/// Inter-country input-output table. Z holds intermediate flows (supplier row,
/// buyer column), F final demand (supplier row, buyer country column), va value
/// added and x gross output, all in one declared currency unit.
struct IcioTable {
  CountrySectorIndex index;
  Matrix Z;   // (N*S) x (N*S)
  Matrix F;   // (N*S) x N
  Vector va;  // N*S
  Vector x;   // N*S
  std::string unit = "unspecified";
  std::vector<std::string> warnings;
};

/// Residual report for the two accounting identities.
struct IcioCheck {
  // Relative residuals: |x_i - rowsum_i| / scale_i, worst first.
  double maxRowResidual = 0.0;
  double maxColResidual = 0.0;
  int worstRow = -1;
  int worstCol = -1;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct IcioLoadOptions {
  enum class Format { automatic, longForm, matrix };
  Format format = Format::automatic;
  double tolerance = 1e-6;  // relative tolerance on the accounting identities
};

struct CoefficientMatrix {
  Matrix A;  // A(i,j) = Z(i,j) / x(j)
  std::vector<int> zeroOutputColumns;
};

struct LeontiefInverse {
  Matrix L;  // (I - A)^{-1}
};

/// Checks row identity x_i = sum_j Z_ij + sum_c F_ic and column identity
/// x_j = sum_i Z_ij + va_j against a relative tolerance.
IcioCheck check_identities(const IcioTable& t, double tolerance = 1e-6);

/// Loads an ICIO table from `flowsPath` (long or matrix form) plus the totals
/// file `country,sector,gross_output,value_added`. Rejects tables whose
/// identities are violated beyond tolerance, naming the worst offender.
IcioTable load_icio(const std::string& flowsPath, const std::string& totalsPath,
                    const IcioLoadOptions& opts = {});

/// Sums flows, final demand, value added and output within sector groups.
/// `mapping` must cover every sector of `t`.
IcioTable aggregate_sectors(const IcioTable& t,
                            const std::map<std::string, std::string>& mapping);

/// Direct-requirement coefficients A_ij = Z_ij / x_j; zero-output columns are
/// zeroed and recorded rather than dropped.
CoefficientMatrix technical_coefficients(const IcioTable& t);

/// (I - A)^{-1}. Throws SolverError when A is not productive (the total
/// requirements would not converge).
LeontiefInverse leontief_inverse(const CoefficientMatrix& a);

// Writers for the normalized on-disk form (matrix flows + totals).
void write_icio_matrix(const IcioTable& t, const std::string& flowsPath,
                       const std::string& totalsPath);

}  // namespace readykit
