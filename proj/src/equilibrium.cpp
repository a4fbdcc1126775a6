#include "readykit/equilibrium.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

#include "readykit/csv.hpp"

namespace readykit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-destination-cell kernel for price indices and share updates. Cells whose
// largest tau-hat exceeds the log-domain threshold run on log-sum-exp so that
// prohibitive costs cannot underflow the denominator.
struct CellKernel {
  const ModelBaseline& b;
  const TradeCostShock& shock;
  double logThreshold;

  // Precomputed per entry: tau^(-theta) for linear cells, log(tau) for log
  // cells. One flag per destination cell.
  Vector intWeight, finWeight;
  std::vector<char> intLog, finLog;

  explicit CellKernel(const ModelBaseline& bl, const TradeCostShock& sh,
                      double threshold)
      : b(bl), shock(sh), logThreshold(threshold) {
    int J = b.J(), S = b.S();
    intWeight.resize(b.piInt.size());
    finWeight.resize(b.piFin.size());
    intLog.assign(static_cast<size_t>(J) * S * S, 0);
    finLog.assign(static_cast<size_t>(J) * S, 0);

    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        for (int r = 0; r < S; ++r) {
          int cell = (j * S + s) * S + r;
          int base = cell * J;
          double mx = shock.tauInt.segment(base, J).maxCoeff();
          intLog[cell] = mx > logThreshold ? 1 : 0;
          for (int i = 0; i < J; ++i) {
            double tau = shock.tauInt[base + i];
            intWeight[base + i] =
                intLog[cell] ? std::log(tau) : std::pow(tau, -b.theta[r]);
          }
        }
    for (int j = 0; j < J; ++j)
      for (int r = 0; r < S; ++r) {
        int cell = j * S + r;
        int base = cell * J;
        double mx = shock.tauFin.segment(base, J).maxCoeff();
        finLog[cell] = mx > logThreshold ? 1 : 0;
        for (int i = 0; i < J; ++i) {
          double tau = shock.tauFin[base + i];
          finWeight[base + i] =
              finLog[cell] ? std::log(tau) : std::pow(tau, -b.theta[r]);
        }
      }
  }

  // log of the price-index hat for one cell, given cost hats of the supplying
  // sector. pi/weights start at `base`, origin-contiguous.
  double logPrice(const Vector& pi, const Vector& weights, bool logCell, int base,
                  int supply, const Vector& logC, const Vector& cPow) const {
    int J = b.J(), S = b.S();
    double theta = b.theta[supply];
    if (!logCell) {
      double acc = 0.0;
      for (int i = 0; i < J; ++i)
        acc += pi[base + i] * cPow[i * S + supply] * weights[base + i];
      return -std::log(acc) / theta;
    }
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < J; ++i) {
      if (pi[base + i] <= 0.0) continue;
      double t = std::log(pi[base + i]) -
                 theta * (logC[i * S + supply] + weights[base + i]);
      m = std::max(m, t);
    }
    if (!std::isfinite(m))
      throw SolverError("price index undefined: no positive origin share in cell");
    double acc = 0.0;
    for (int i = 0; i < J; ++i) {
      if (pi[base + i] <= 0.0) continue;
      double t = std::log(pi[base + i]) -
                 theta * (logC[i * S + supply] + weights[base + i]);
      acc += std::exp(t - m);
    }
    return -(m + std::log(acc)) / theta;
  }

  // Counterfactual shares for one cell, written into out[base..base+J).
  void shares(const Vector& pi, const Vector& weights, bool logCell, int base,
              int supply, const Vector& logC, const Vector& cPow,
              Vector& out) const {
    int J = b.J(), S = b.S();
    double theta = b.theta[supply];
    if (!logCell) {
      double denom = 0.0;
      for (int i = 0; i < J; ++i) {
        double w = pi[base + i] * cPow[i * S + supply] * weights[base + i];
        out[base + i] = w;
        denom += w;
      }
      for (int i = 0; i < J; ++i) out[base + i] /= denom;
      return;
    }
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < J; ++i) {
      if (pi[base + i] <= 0.0) continue;
      double t = std::log(pi[base + i]) -
                 theta * (logC[i * S + supply] + weights[base + i]);
      m = std::max(m, t);
    }
    double denom = 0.0;
    for (int i = 0; i < J; ++i) {
      if (pi[base + i] <= 0.0) {
        out[base + i] = 0.0;
        continue;
      }
      double t = std::log(pi[base + i]) -
                 theta * (logC[i * S + supply] + weights[base + i]);
      out[base + i] = std::exp(t - m);
      denom += out[base + i];
    }
    for (int i = 0; i < J; ++i) out[base + i] /= denom;
  }
};

void checkBaselineForSolve(const ModelBaseline& b) {
  for (int j = 0; j < b.J(); ++j) {
    if (b.wageBill[j] <= 0.0)
      throw ValidationError("solve_hat: nonpositive wage bill for country " +
                            b.index.country(j));
    for (int s = 0; s < b.S(); ++s)
      if (b.beta(j, s) <= 0.0)
        throw ValidationError("solve_hat: zero labor share in " +
                              b.index.country(j) + ":" + b.index.sector(s));
  }
  for (int r = 0; r < b.S(); ++r)
    if (b.theta[r] <= 1.0)
      throw ValidationError("solve_hat: trade elasticity must exceed 1 for sector " +
                            b.index.sector(r));
}

void checkShock(const ModelBaseline& b, const TradeCostShock& shock) {
  if (shock.tauInt.size() != b.piInt.size() || shock.tauFin.size() != b.piFin.size())
    throw ValidationError("trade-cost shock does not match baseline dimensions");
  auto checkRange = [&](const Vector& tau, const char* what) {
    for (int k = 0; k < tau.size(); ++k)
      if (!(tau[k] > 0.0) || tau[k] > shock.prohibitiveCap)
        throw ValidationError(std::string("trade-cost change out of range in ") +
                              what + " at entry " + std::to_string(k));
  };
  checkRange(shock.tauInt, "intermediates");
  checkRange(shock.tauFin, "final goods");
}

}  // namespace

TradeCostShock TradeCostShock::unit(const ModelBaseline& b) {
  TradeCostShock s;
  s.tauInt = Vector::Ones(b.piInt.size());
  s.tauFin = Vector::Ones(b.piFin.size());
  return s;
}

bool TradeCostShock::isUnit() const {
  return (tauInt.array() == 1.0).all() && (tauFin.array() == 1.0).all();
}

ModelBaseline baseline_from_icio(const IcioTable& t, const Vector& theta,
                                 const std::optional<Vector>& wageBills,
                                 const std::optional<Vector>& deficits) {
  ModelBaseline b;
  b.index = t.index;
  int J = b.J(), S = b.S();
  if (theta.size() != S)
    throw ValidationError("baseline_from_icio: theta must have one entry per sector");
  b.theta = theta;

  b.piInt = Vector::Zero(static_cast<Eigen::Index>(J) * J * S * S);
  b.piFin = Vector::Zero(static_cast<Eigen::Index>(J) * J * S);
  b.gamma = Vector::Zero(static_cast<Eigen::Index>(J) * S * S);
  b.alpha = Vector::Zero(static_cast<Eigen::Index>(J) * S);
  b.output0 = t.x;

  int uniformIntCells = 0, uniformFinCells = 0;

  // Intermediate shares and input cost shares per (dest j, use s, supply r).
  for (int j = 0; j < J; ++j)
    for (int s = 0; s < S; ++s) {
      int col = t.index.flat(j, s);
      for (int r = 0; r < S; ++r) {
        double spend = 0.0;
        for (int i = 0; i < J; ++i) spend += t.Z(t.index.flat(i, r), col);
        int base = b.intIdx(0, j, r, s);
        if (spend > 0.0) {
          for (int i = 0; i < J; ++i)
            b.piInt[base + i] = t.Z(t.index.flat(i, r), col) / spend;
        } else {
          ++uniformIntCells;
          for (int i = 0; i < J; ++i) b.piInt[base + i] = 1.0 / J;
        }
        if (t.x[col] > 0.0) b.gamma[b.jsr(j, r, s)] = spend / t.x[col];
      }
      if (t.x[col] > 0.0 && b.beta(j, s) <= 0.0)
        throw ValidationError(
            "baseline_from_icio: intermediate cost shares leave no labor share in " +
            t.index.label(col));
    }

  // Final-goods shares and expenditure shares per destination country.
  for (int j = 0; j < J; ++j) {
    double totalFinal = 0.0;
    Vector bySector = Vector::Zero(S);
    for (int r = 0; r < S; ++r) {
      for (int i = 0; i < J; ++i) bySector[r] += t.F(t.index.flat(i, r), j);
      totalFinal += bySector[r];
      int base = b.finIdx(0, j, r);
      if (bySector[r] > 0.0) {
        for (int i = 0; i < J; ++i)
          b.piFin[base + i] = t.F(t.index.flat(i, r), j) / bySector[r];
      } else {
        ++uniformFinCells;
        for (int i = 0; i < J; ++i) b.piFin[base + i] = 1.0 / J;
      }
    }
    if (totalFinal > 0.0) {
      for (int r = 0; r < S; ++r) b.alpha[b.js(j, r)] = bySector[r] / totalFinal;
    } else {
      b.warnings.push_back("no final demand recorded for " + t.index.country(j) +
                           "; uniform expenditure shares assumed");
      for (int r = 0; r < S; ++r) b.alpha[b.js(j, r)] = 1.0 / S;
    }
  }
  if (uniformIntCells > 0)
    b.warnings.push_back(std::to_string(uniformIntCells) +
                         " intermediate cells with zero spending: uniform share "
                         "fallback (inactive, cost share is zero)");
  if (uniformFinCells > 0)
    b.warnings.push_back(std::to_string(uniformFinCells) +
                         " final-goods cells with zero spending: uniform share "
                         "fallback (inactive, expenditure share is zero)");

  // Wage bill defaults to implied labor income so that the baseline is an
  // exact fixed point; the deficit closes the country budget.
  if (wageBills) {
    if (wageBills->size() != J)
      throw ValidationError("baseline_from_icio: wage bill vector has wrong size");
    b.wageBill = *wageBills;
  } else {
    b.wageBill = Vector::Zero(J);
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        b.wageBill[j] += b.beta(j, s) * t.x[t.index.flat(j, s)];
  }
  if (deficits) {
    if (deficits->size() != J)
      throw ValidationError("baseline_from_icio: deficit vector has wrong size");
    b.deficit = *deficits;
  } else {
    b.deficit = Vector::Zero(J);
    for (int j = 0; j < J; ++j) {
      double finalSpend = t.F.col(j).sum();
      b.deficit[j] = finalSpend - b.wageBill[j];
    }
  }
  return b;
}

BaselineReport validate_baseline(const ModelBaseline& b) {
  BaselineReport rep;
  int J = b.J(), S = b.S();
  auto add = [&](const std::string& v) { rep.violations.push_back(v); };

  if (b.theta.size() != S) add("theta has wrong size");
  for (int r = 0; r < S && r < b.theta.size(); ++r)
    if (!(b.theta[r] > 1.0))
      add("theta <= 1 for sector " + b.index.sector(r));

  for (int j = 0; j < J; ++j)
    for (int s = 0; s < S; ++s)
      for (int r = 0; r < S; ++r) {
        int base = b.intIdx(0, j, r, s);
        double sum = b.piInt.segment(base, J).sum();
        double mn = b.piInt.segment(base, J).minCoeff();
        if (std::abs(sum - 1.0) > 1e-9)
          add("intermediate shares do not sum to 1 at (" + b.index.country(j) + "," +
              b.index.sector(r) + "->" + b.index.sector(s) + "): " + csv::full(sum));
        if (mn < 0.0)
          add("negative intermediate share at (" + b.index.country(j) + "," +
              b.index.sector(r) + "->" + b.index.sector(s) + ")");
      }
  for (int j = 0; j < J; ++j)
    for (int r = 0; r < S; ++r) {
      int base = b.finIdx(0, j, r);
      double sum = b.piFin.segment(base, J).sum();
      if (std::abs(sum - 1.0) > 1e-9)
        add("final shares do not sum to 1 at (" + b.index.country(j) + "," +
            b.index.sector(r) + "): " + csv::full(sum));
      if (b.piFin.segment(base, J).minCoeff() < 0.0)
        add("negative final share at (" + b.index.country(j) + "," +
            b.index.sector(r) + ")");
    }
  for (int j = 0; j < J; ++j) {
    double asum = 0.0;
    for (int s = 0; s < S; ++s) {
      double a = b.alpha[b.js(j, s)];
      asum += a;
      if (a < 0.0) add("negative expenditure share at " + b.index.country(j) + ":" +
                       b.index.sector(s));
      double beta = b.beta(j, s);
      if (!(beta > 0.0) || beta > 1.0 + 1e-12)
        add("labor share out of (0,1] at " + b.index.country(j) + ":" +
            b.index.sector(s) + ": " + csv::full(beta));
    }
    if (std::abs(asum - 1.0) > 1e-9)
      add("expenditure shares do not sum to 1 for " + b.index.country(j) + ": " +
          csv::full(asum));
    if (b.wageBill[j] < 0.0) add("negative wage bill for " + b.index.country(j));
    if (b.wageBill[j] + b.deficit[j] <= 0.0)
      add("nonpositive baseline expenditure (wage bill + deficit) for " +
          b.index.country(j));
  }
  double world = b.wageBill.sum();
  if (std::abs(b.deficit.sum()) > 1e-9 * std::max(world, 1.0))
    add("deficits do not sum to zero: " + csv::full(b.deficit.sum()));
  for (int k = 0; k < b.output0.size(); ++k)
    if (b.output0[k] < 0.0) add("negative baseline output at " + b.index.label(k));

  // Baseline consistency: output0 should solve the output system at unit hats.
  {
    Vector rhs = Vector::Zero(J * S);
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s) {
        double acc = 0.0;
        for (int k = 0; k < J; ++k) {
          for (int r = 0; r < S; ++r)
            acc += b.piInt[b.intIdx(j, k, s, r)] * b.gamma[b.jsr(k, s, r)] *
                   b.output0[b.js(k, r)];
          acc += b.piFin[b.finIdx(j, k, s)] * b.alpha[b.js(k, s)] *
                 (b.wageBill[k] + b.deficit[k]);
        }
        rhs[b.js(j, s)] = acc;
      }
    double scale = std::max(b.output0.maxCoeff(), 1.0);
    double worst = (rhs - b.output0).cwiseAbs().maxCoeff() / scale;
    if (worst > 1e-6)
      add("baseline output is not a fixed point of the output system (relative "
          "residual " +
          csv::full(worst) + ")");
  }
  return rep;
}

EquilibriumChange solve_hat(const ModelBaseline& b, const TradeCostShock& shock,
                            const SolverConfig& cfg) {
  checkBaselineForSolve(b);
  checkShock(b, shock);

  const int J = b.J(), S = b.S(), JS = J * S;
  const double totalWageBill = b.wageBill.sum();

  int numeraireCountry = -1;
  if (!cfg.numeraireCountry.empty())
    numeraireCountry = b.index.countryIndex(cfg.numeraireCountry);

  CellKernel kernel(b, shock, cfg.logDomainThreshold);

  Vector betas(JS);
  for (int j = 0; j < J; ++j)
    for (int s = 0; s < S; ++s) betas[b.js(j, s)] = b.beta(j, s);

  Vector logW = Vector::Zero(J);
  Vector logC = Vector::Zero(JS);
  Vector logPInt = Vector::Zero(static_cast<Eigen::Index>(J) * S * S);
  Vector logPFin = Vector::Zero(JS);
  Vector cPow(JS);
  Vector piIntNew(b.piInt.size()), piFinNew(b.piFin.size());
  Vector output(JS);
  Matrix system(JS, JS);
  Vector rhs(JS);

  auto applyNumeraire = [&](Vector& lw) {
    if (numeraireCountry >= 0) {
      lw.array() -= lw[numeraireCountry];
    } else {
      double bill = 0.0;
      for (int j = 0; j < J; ++j) bill += std::exp(lw[j]) * b.wageBill[j];
      lw.array() += std::log(totalWageBill / bill);
    }
  };

  auto innerSolve = [&]() {
    for (int it = 0; it < cfg.maxInnerIterations; ++it) {
      for (int i = 0; i < J; ++i)
        for (int r = 0; r < S; ++r)
          cPow[i * S + r] = std::exp(-b.theta[r] * logC[i * S + r]);
      double delta = 0.0;
      for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s)
          for (int r = 0; r < S; ++r) {
            int cell = (j * S + s) * S + r;
            logPInt[cell] = kernel.logPrice(b.piInt, kernel.intWeight,
                                            kernel.intLog[cell], cell * J, r, logC,
                                            cPow);
          }
      for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s) {
          int base = (j * S + s) * S;
          double next = betas[b.js(j, s)] * logW[j] +
                        b.gamma.segment(base, S).dot(logPInt.segment(base, S));
          delta = std::max(delta, std::abs(next - logC[b.js(j, s)]));
          logC[b.js(j, s)] = next;
        }
      if (delta <= cfg.innerTolerance) return;
    }
    throw SolverError("cost/price loop did not converge within " +
                      std::to_string(cfg.maxInnerIterations) + " iterations");
  };

  SolveDiagnostics diag;
  Vector income(J), implied(J);

  for (int iter = 1; iter <= cfg.maxIterations; ++iter) {
    diag.iterations = iter;
    innerSolve();
    if (!logC.allFinite() || !logW.allFinite())
      throw SolverError("solve_hat: non-finite costs (NaN guard)");

    for (int i = 0; i < J; ++i)
      for (int r = 0; r < S; ++r)
        cPow[i * S + r] = std::exp(-b.theta[r] * logC[i * S + r]);

    for (int j = 0; j < J; ++j)
      for (int r = 0; r < S; ++r) {
        int cell = j * S + r;
        logPFin[cell] = kernel.logPrice(b.piFin, kernel.finWeight,
                                        kernel.finLog[cell], cell * J, r, logC, cPow);
        kernel.shares(b.piFin, kernel.finWeight, kernel.finLog[cell], cell * J, r,
                      logC, cPow, piFinNew);
        for (int s = 0; s < S; ++s) {
          int icell = (j * S + s) * S + r;
          kernel.shares(b.piInt, kernel.intWeight, kernel.intLog[icell], icell * J, r,
                        logC, cPow, piIntNew);
        }
      }

    // Deficits stay fixed in numeraire units; the world-wage-bill rebasing
    // keeps real outcomes identical across numeraire choices.
    double bill = 0.0;
    for (int j = 0; j < J; ++j) bill += std::exp(logW[j]) * b.wageBill[j];
    double gdpScale = bill / totalWageBill;
    for (int j = 0; j < J; ++j) {
      double def =
          cfg.deficitMode == SolverConfig::DeficitMode::zero ? 0.0 : b.deficit[j];
      income[j] = std::exp(logW[j]) * b.wageBill[j] + def * gdpScale;
    }

    // Output system Y = K Y + rhs.
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s) {
        int row = b.js(j, s);
        double acc = 0.0;
        for (int k = 0; k < J; ++k) {
          acc += piFinNew[b.finIdx(j, k, s)] * b.alpha[b.js(k, s)] * income[k];
          for (int r = 0; r < S; ++r)
            system(row, b.js(k, r)) =
                -piIntNew[b.intIdx(j, k, s, r)] * b.gamma[b.jsr(k, s, r)];
        }
        system(row, row) += 1.0;
        rhs[row] = acc;
      }
    output = Eigen::PartialPivLU<Matrix>(system).solve(rhs);
    if (!output.allFinite())
      throw SolverError("solve_hat: non-finite output solution (NaN guard)");

    double worst = 0.0;
    for (int j = 0; j < J; ++j) {
      implied[j] = 0.0;
      for (int s = 0; s < S; ++s)
        implied[j] += betas[b.js(j, s)] * output[b.js(j, s)];
      worst = std::max(worst,
                       std::abs(implied[j] - std::exp(logW[j]) * b.wageBill[j]));
    }
    diag.worstResidual = worst / bill;
    if (diag.worstResidual <= cfg.tolerance) {
      diag.converged = true;
      break;
    }
    if (iter == cfg.maxIterations) break;

    for (int j = 0; j < J; ++j) {
      if (!(implied[j] > 0.0))
        throw SolverError("solve_hat: implied labor income vanished for " +
                          b.index.country(j));
      double target = std::log(implied[j] / b.wageBill[j]);
      logW[j] += cfg.damping * (target - logW[j]);
    }
    applyNumeraire(logW);
  }

  if (!diag.converged)
    throw SolverError("solve_hat did not converge within " +
                      std::to_string(cfg.maxIterations) +
                      " iterations (worst relative residual " +
                      csv::full(diag.worstResidual) + ")");

  EquilibriumChange e;
  e.index = b.index;
  e.diag = diag;
  e.wageHat = logW.array().exp();
  e.costHat = logC.array().exp();
  e.priceIntHat = logPInt.array().exp();
  e.priceFinHat = logPFin.array().exp();
  e.piIntNew = piIntNew;
  e.piFinNew = piFinNew;
  e.output = output;

  e.priceConsHat = Vector::Zero(J);
  for (int j = 0; j < J; ++j) {
    double acc = 0.0;
    for (int s = 0; s < S; ++s) acc += b.alpha[b.js(j, s)] * logPFin[j * S + s];
    e.priceConsHat[j] = std::exp(acc);
  }

  double bill = 0.0;
  for (int j = 0; j < J; ++j) bill += e.wageHat[j] * b.wageBill[j];
  double gdpScale = bill / totalWageBill;

  e.expenditure = Vector::Zero(JS);
  e.realGneChange = Vector::Zero(J);
  e.realOutputChange = Vector::Zero(JS);
  for (int j = 0; j < J; ++j) {
    double def =
        cfg.deficitMode == SolverConfig::DeficitMode::zero ? 0.0 : b.deficit[j];
    double inc = e.wageHat[j] * b.wageBill[j] + def * gdpScale;
    for (int s = 0; s < S; ++s) {
      double acc = b.alpha[b.js(j, s)] * inc;
      for (int r = 0; r < S; ++r)
        acc += b.gamma[b.jsr(j, s, r)] * output[b.js(j, r)];
      e.expenditure[b.js(j, s)] = acc;
    }
    e.realGneChange[j] =
        inc / (b.wageBill[j] + b.deficit[j]) / e.priceConsHat[j] - 1.0;
    for (int s = 0; s < S; ++s) {
      int k = b.js(j, s);
      e.realOutputChange[k] = b.output0[k] > 0.0
                                  ? (output[k] / b.output0[k]) / e.costHat[k] - 1.0
                                  : kNaN;
    }
  }
  return e;
}

double gne_change(const EquilibriumChange& e, const std::string& country) {
  return 100.0 * e.realGneChange[e.index.countryIndex(country)];
}

double sector_output_change(const EquilibriumChange& e, const std::string& country,
                            const std::string& sector) {
  int j = e.index.countryIndex(country);
  int s = e.index.sectorIndex(sector);
  return 100.0 * e.realOutputChange[j * e.index.sectorCount() + s];
}

}  // namespace readykit
