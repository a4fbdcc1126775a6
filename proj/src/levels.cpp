#include "readykit/levels.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

#include "readykit/csv.hpp"

namespace readykit {

namespace {

void checkPrimitives(const LevelsPrimitives& p) {
  int J = p.J(), S = p.S();
  if (J * S > 16)
    throw ValidationError("solve_levels is desk-scale only (J*S <= 16)");
  if (p.technology.size() != J * S || p.labor.size() != J ||
      p.theta.size() != S || p.sigma.size() != S)
    throw ValidationError("levels primitives have inconsistent dimensions");
  for (int k = 0; k < p.technology.size(); ++k)
    if (!(p.technology[k] > 0.0))
      throw ValidationError("technology level must be positive");
  for (int j = 0; j < J; ++j)
    if (!(p.labor[j] > 0.0)) throw ValidationError("labor endowment must be positive");
  for (int r = 0; r < S; ++r) {
    if (!(p.theta[r] > 1.0))
      throw ValidationError("theta must exceed 1 for sector " + p.index.sector(r));
    if (!(p.sigma[r] < 1.0 + p.theta[r]))
      throw ValidationError("sigma must satisfy sigma < 1 + theta for sector " +
                            p.index.sector(r));
  }
  for (int j = 0; j < J; ++j)
    for (int s = 0; s < S; ++s)
      if (!(p.beta(j, s) > 0.0))
        throw ValidationError("labor share must be positive in " +
                              p.index.country(j) + ":" + p.index.sector(s));
}

}  // namespace

LevelsEquilibrium solve_levels(const LevelsPrimitives& p, const SolverConfig& cfg) {
  checkPrimitives(p);
  const int J = p.J(), S = p.S(), JS = J * S;
  const double totalLabor = p.labor.sum();

  Vector logW = Vector::Zero(J);
  Vector logC = Vector::Zero(JS);
  Vector logPInt = Vector::Zero(static_cast<Eigen::Index>(J) * S * S);
  Vector logPFin = Vector::Zero(JS);
  Vector piInt(p.tauInt.size()), piFin(p.tauFin.size());
  Vector output(JS);
  Matrix system(JS, JS);
  Vector rhs(JS);

  // log weight of origin i in a destination cell of supplying sector r.
  auto logTerm = [&](int i, int r, double logTau) {
    return std::log(p.technology[p.js(i, r)]) -
           p.theta[r] * (logC[p.js(i, r)] + logTau);
  };

  auto cellPrice = [&](const Vector& tau, int base, int r, Vector* sharesOut) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < J; ++i)
      m = std::max(m, logTerm(i, r, std::log(tau[base + i])));
    double acc = 0.0;
    for (int i = 0; i < J; ++i) {
      double t = std::exp(logTerm(i, r, std::log(tau[base + i])) - m);
      if (sharesOut) (*sharesOut)[base + i] = t;
      acc += t;
    }
    if (sharesOut)
      for (int i = 0; i < J; ++i) (*sharesOut)[base + i] /= acc;
    return -(m + std::log(acc)) / p.theta[r];
  };

  auto innerSolve = [&]() {
    for (int it = 0; it < cfg.maxInnerIterations; ++it) {
      for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s)
          for (int r = 0; r < S; ++r) {
            int cell = (j * S + s) * S + r;
            logPInt[cell] = cellPrice(p.tauInt, cell * J, r, nullptr);
          }
      double delta = 0.0;
      for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s) {
          int base = (j * S + s) * S;
          double next = p.beta(j, s) * logW[j] +
                        p.gamma.segment(base, S).dot(logPInt.segment(base, S));
          delta = std::max(delta, std::abs(next - logC[p.js(j, s)]));
          logC[p.js(j, s)] = next;
        }
      if (delta <= cfg.innerTolerance) return;
    }
    throw SolverError("levels cost/price loop did not converge");
  };

  SolveDiagnostics diag;
  Vector income(J), implied(J);

  for (int iter = 1; iter <= cfg.maxIterations; ++iter) {
    diag.iterations = iter;
    innerSolve();

    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s)
        for (int r = 0; r < S; ++r) {
          int cell = (j * S + s) * S + r;
          logPInt[cell] = cellPrice(p.tauInt, cell * J, r, &piInt);
        }
    for (int j = 0; j < J; ++j)
      for (int r = 0; r < S; ++r) {
        int cell = j * S + r;
        logPFin[cell] = cellPrice(p.tauFin, cell * J, r, &piFin);
      }

    for (int j = 0; j < J; ++j) income[j] = std::exp(logW[j]) * p.labor[j];

    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s) {
        int row = p.js(j, s);
        double acc = 0.0;
        for (int k = 0; k < J; ++k) {
          acc += piFin[p.finIdx(j, k, s)] * p.alpha[p.js(k, s)] * income[k];
          for (int r = 0; r < S; ++r)
            system(row, p.js(k, r)) =
                -piInt[p.intIdx(j, k, s, r)] * p.gamma[p.jsr(k, s, r)];
        }
        system(row, row) += 1.0;
        rhs[row] = acc;
      }
    output = Eigen::PartialPivLU<Matrix>(system).solve(rhs);
    if (!output.allFinite())
      throw SolverError("solve_levels: non-finite output solution");

    double world = income.sum();
    double worst = 0.0;
    for (int j = 0; j < J; ++j) {
      implied[j] = 0.0;
      for (int s = 0; s < S; ++s) implied[j] += p.beta(j, s) * output[p.js(j, s)];
      worst = std::max(worst, std::abs(implied[j] - income[j]));
    }
    diag.worstResidual = worst / world;
    if (diag.worstResidual <= cfg.tolerance) {
      diag.converged = true;
      break;
    }
    if (iter == cfg.maxIterations) break;

    for (int j = 0; j < J; ++j) {
      if (!(implied[j] > 0.0))
        throw SolverError("solve_levels: implied labor income vanished for " +
                          p.index.country(j));
      double target = std::log(implied[j] / p.labor[j]);
      logW[j] += cfg.damping * (target - logW[j]);
    }
    double bill = 0.0;
    for (int j = 0; j < J; ++j) bill += std::exp(logW[j]) * p.labor[j];
    logW.array() += std::log(totalLabor / bill);
  }

  if (!diag.converged)
    throw SolverError("solve_levels did not converge (worst relative residual " +
                      csv::full(diag.worstResidual) + ")");

  LevelsEquilibrium e;
  e.diag = diag;
  e.wage = logW.array().exp();
  e.cost = logC.array().exp();
  e.priceInt = logPInt.array().exp();
  e.priceFin = logPFin.array().exp();
  e.piInt = piInt;
  e.piFin = piFin;
  e.output = output;
  e.expenditure = Vector::Zero(JS);
  for (int j = 0; j < J; ++j)
    for (int s = 0; s < S; ++s) {
      double acc = p.alpha[p.js(j, s)] * e.wage[j] * p.labor[j];
      for (int r = 0; r < S; ++r)
        acc += p.gamma[p.jsr(j, s, r)] * output[p.js(j, r)];
      e.expenditure[p.js(j, s)] = acc;
    }
  return e;
}

ModelBaseline baseline_from_levels(const LevelsPrimitives& p,
                                   const LevelsEquilibrium& base) {
  ModelBaseline b;
  b.index = p.index;
  b.piInt = base.piInt;
  b.piFin = base.piFin;
  b.gamma = p.gamma;
  b.alpha = p.alpha;
  b.theta = p.theta;
  b.wageBill = Vector::Zero(p.J());
  for (int j = 0; j < p.J(); ++j) b.wageBill[j] = base.wage[j] * p.labor[j];
  b.deficit = Vector::Zero(p.J());
  b.output0 = base.output;
  return b;
}

EquilibriumChange hats_from_levels(const LevelsPrimitives& p,
                                   const LevelsEquilibrium& base,
                                   const LevelsEquilibrium& shocked) {
  EquilibriumChange e;
  e.index = p.index;
  e.diag = shocked.diag;
  e.wageHat = shocked.wage.cwiseQuotient(base.wage);
  e.costHat = shocked.cost.cwiseQuotient(base.cost);
  e.priceIntHat = shocked.priceInt.cwiseQuotient(base.priceInt);
  e.priceFinHat = shocked.priceFin.cwiseQuotient(base.priceFin);
  e.piIntNew = shocked.piInt;
  e.piFinNew = shocked.piFin;
  e.output = shocked.output;
  e.expenditure = shocked.expenditure;

  int J = p.J(), S = p.S();
  e.priceConsHat = Vector::Zero(J);
  e.realGneChange = Vector::Zero(J);
  e.realOutputChange = Vector::Zero(J * S);
  for (int j = 0; j < J; ++j) {
    double acc = 0.0;
    for (int s = 0; s < S; ++s)
      acc += p.alpha[p.js(j, s)] * std::log(e.priceFinHat[j * S + s]);
    e.priceConsHat[j] = std::exp(acc);
    e.realGneChange[j] = e.wageHat[j] / e.priceConsHat[j] - 1.0;
    for (int s = 0; s < S; ++s) {
      int k = p.js(j, s);
      e.realOutputChange[k] =
          (shocked.output[k] / base.output[k]) / e.costHat[k] - 1.0;
    }
  }
  return e;
}

TradeCostShock shock_between(const LevelsPrimitives& base,
                             const LevelsPrimitives& shocked) {
  if (base.tauInt.size() != shocked.tauInt.size() ||
      base.tauFin.size() != shocked.tauFin.size())
    throw ValidationError("shock_between: mismatched primitive dimensions");
  TradeCostShock s;
  s.tauInt = shocked.tauInt.cwiseQuotient(base.tauInt);
  s.tauFin = shocked.tauFin.cwiseQuotient(base.tauFin);
  return s;
}

}  // namespace readykit
