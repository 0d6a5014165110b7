#include "bsk/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsk/coherence.hpp"

namespace bsk {

std::string_view to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::Bomp: return "bomp";
    case Algorithm::L21: return "l21";
    case Algorithm::Omp: return "omp";
    case Algorithm::BasisPursuit: return "bp";
    case Algorithm::Oracle: return "oracle";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "bomp") return Algorithm::Bomp;
  if (name == "l21") return Algorithm::L21;
  if (name == "omp") return Algorithm::Omp;
  if (name == "bp") return Algorithm::BasisPursuit;
  if (name == "oracle") return Algorithm::Oracle;
  throw InvalidInput("unknown algorithm '" + std::string(name) +
                     "' (expected bomp, l21, omp, bp or oracle)");
}

void SolverParams::validate() const {
  if (maxIterations < 1) throw InvalidInput("maxIterations must be positive");
  if (!(penalty > 0.0)) throw InvalidInput("penalty must be positive");
  if (!(primalTol > 0.0) || !(dualTol > 0.0))
    throw InvalidInput("primal and dual tolerances must be positive");
  if (!(residualTol >= 0.0) || !(supportThreshold >= 0.0))
    throw InvalidInput("tolerances must be non-negative");
  if (subsetBudget < 1) throw InvalidInput("subset budget must be positive");
}

namespace {

void require_measurement(const BlockDictionary& D, const Vector& y) {
  if (y.size() != D.rows())
    throw InvalidInput("measurement has length " + std::to_string(y.size()) +
                       ", dictionary has " + std::to_string(D.rows()) + " rows");
}

struct SupportFit {
  Vector coeffs;  // stacked blocks in the order given
  Vector residual;
};

SupportFit fit_support(const BlockDictionary& D, const std::vector<Index>& blocks,
                       const Vector& y) {
  if (blocks.empty()) return {Vector(0), y};
  const Matrix D0 = D.gather(blocks);
  if (D0.cols() > D0.rows())
    throw RankDeficient(std::to_string(blocks.size()) + " blocks span " +
                        std::to_string(D0.cols()) + " columns but there are only " +
                        std::to_string(D0.rows()) + " rows");
  Eigen::ColPivHouseholderQR<Matrix> qr(D0);
  qr.setThreshold(1e-10);
  if (qr.rank() < D0.cols())
    throw RankDeficient("selected blocks are jointly rank deficient (rank " +
                        std::to_string(qr.rank()) + " < " + std::to_string(D0.cols()) + ")");
  SupportFit fit;
  fit.coeffs = qr.solve(y);
  fit.residual = y - D0 * fit.coeffs;
  return fit;
}

BlockVector scatter(BlockShape shape, const std::vector<Index>& blocks, const Vector& coeffs) {
  BlockVector x = BlockVector::zeros(shape);
  const Index d = shape.d();
  for (std::size_t i = 0; i < blocks.size(); ++i)
    x.block(blocks[i]) = coeffs.segment(static_cast<Index>(i) * d, d);
  return x;
}

RecoveryResult zero_result(const BlockDictionary& D, Algorithm alg) {
  return {BlockVector::zeros(D.shape()), SupportSet(D.shape().M()), 0.0, 0, true, alg};
}

}  // namespace

BlockVector least_squares_on_support(const BlockDictionary& D, const SupportSet& support,
                                     const Vector& y) {
  require_measurement(D, y);
  if (support.bound() != D.shape().M())
    throw InvalidInput("support is defined over a different number of blocks");
  const SupportFit fit = fit_support(D, support.indices(), y);
  return scatter(D.shape(), support.indices(), fit.coeffs);
}

// ---------------------------------------------------------------------------
// BOMP

RecoveryResult bomp(const BlockDictionary& D, const Vector& y, std::optional<Index> k,
                    const SolverParams& params, const BompObserver& observer) {
  params.validate();
  require_measurement(D, y);
  require_orthonormal_blocks(D);
  const Index d = D.d();
  const Index M = D.shape().M();
  if (k) {
    if (*k < 1) throw InvalidInput("k must be positive");
    if (*k > M || *k * d > D.rows())
      throw InvalidInput("k=" + std::to_string(*k) + " blocks need k*d <= L and k <= M");
  }

  RecoveryResult result = zero_result(D, Algorithm::Bomp);
  const double ynorm = y.norm();
  if (ynorm == 0.0) return result;

  const Index stages = k ? *k : std::min(M, D.rows() / d);
  const double stop = params.residualTol * ynorm;
  Vector residual = y;
  Vector coeffs;
  RealVector scores(M);

  for (Index stage = 1; stage <= stages; ++stage) {
    if (residual.norm() <= stop) break;

    const Vector corr = D.entries().adjoint() * residual;
    Index best = -1;
    double best_score = 0.0;
    for (Index i = 0; i < M; ++i) {
      scores(i) = corr.segment(i * d, d).norm();
      if (!result.support.contains(i) && (best < 0 || scores(i) > best_score)) {
        best = i;
        best_score = scores(i);
      }
    }
    // A residual orthogonal to every block cannot be reduced further.
    if (best < 0 || best_score == 0.0) break;

    if (observer) observer(BompStep{static_cast<int>(stage), residual, best, scores});
    result.support.insert(best);
    SupportFit fit = fit_support(D, result.support.indices(), y);
    coeffs = std::move(fit.coeffs);
    residual = std::move(fit.residual);
    result.iterations = static_cast<int>(stage);
  }

  result.xHat = scatter(D.shape(), result.support.indices(), coeffs);
  result.residualNorm = (y - D.entries() * result.xHat.values()).norm();
  result.converged = result.residualNorm <= stop;
  return result;
}

RecoveryResult omp(const BlockDictionary& D, const Vector& y, std::optional<Index> s,
                   const SolverParams& params) {
  RecoveryResult r = bomp(D.reshaped(1), y, s, params);
  r.algorithm = Algorithm::Omp;
  return r;
}

// ---------------------------------------------------------------------------
// Mixed l2/l1 minimisation by ADMM:
//
//   x <- P(z - u)                 projection onto {x : D x = y}
//   z <- S_{1/rho}(x + u)         block soft thresholding
//   u <- u + x - z
//
// y is scaled to unit norm beforehand; the program is positively homogeneous
// in y, so the penalty and tolerances act on a fixed scale.

BlockVector block_soft_threshold(const BlockVector& v, double threshold) {
  BlockVector out = v;
  for (Index l = 0; l < v.shape().M(); ++l) {
    const double n = v.block(l).norm();
    if (n <= threshold)
      out.block(l).setZero();
    else
      out.block(l) *= (n - threshold) / n;
  }
  return out;
}

RecoveryResult l21_minimize(const BlockDictionary& D, const Vector& y,
                            const SolverParams& params) {
  params.validate();
  require_measurement(D, y);
  RecoveryResult result = zero_result(D, Algorithm::L21);
  const double ynorm = y.norm();
  if (ynorm == 0.0) return result;
  const Vector yn = y / ynorm;

  Eigen::BDCSVD<Matrix> svd(D.entries(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Index rank = svd.rank();
  if (rank == 0) throw Infeasible("dictionary is zero; y is not in its range");
  const Matrix Ur = svd.matrixU().leftCols(rank);
  const Matrix Vr = svd.matrixV().leftCols(rank);
  const RealVector sr = svd.singularValues().head(rank);

  // Minimum-norm solution; every feasible point is x0 + (I - Vr Vr^H) v.
  const Vector x0 = Vr * (Ur.adjoint() * yn).cwiseQuotient(sr.cast<cplx>());
  const double infeasibility = (D.entries() * x0 - yn).norm();
  if (infeasibility > 1e-8)
    throw Infeasible("y is outside the range of D (relative projection residual " +
                     std::to_string(infeasibility) + ")");

  const auto project = [&](const Vector& v) -> Vector {
    return v - Vr * (Vr.adjoint() * v) + x0;
  };

  const BlockShape shape = D.shape();
  const double rho = params.penalty;
  Vector z = x0;
  Vector u = Vector::Zero(D.cols());
  Vector x = x0;
  int it = 0;
  bool converged = false;
  while (it < params.maxIterations) {
    ++it;
    x = project(z - u);
    const Vector z_old = z;
    z = block_soft_threshold(BlockVector(shape, x + u), 1.0 / rho).values();
    u += x - z;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    const double primal_scale = std::max({x.norm(), z.norm(), 1.0});
    const double dual_scale = std::max(rho * u.norm(), 1.0);
    if (primal <= params.primalTol * primal_scale && dual <= params.dualTol * dual_scale) {
      converged = true;
      break;
    }
  }

  BlockVector estimate(shape, z * ynorm);
  result.support = block_support(estimate, params.supportThreshold);
  result.xHat = BlockVector::zeros(shape);
  bool debiased = false;
  if (params.debias && !result.support.empty()) {
    try {
      result.xHat = least_squares_on_support(D, result.support, y);
      debiased = true;
    } catch (const RankDeficient&) {
      // Too many blocks survived thresholding; fall through to the raw iterate.
    }
  }
  if (!debiased)
    for (Index l : result.support) result.xHat.block(l) = estimate.block(l);

  result.iterations = it;
  result.converged = converged;
  result.residualNorm = (y - D.entries() * result.xHat.values()).norm();
  return result;
}

RecoveryResult basis_pursuit(const BlockDictionary& D, const Vector& y,
                             const SolverParams& params) {
  RecoveryResult r = l21_minimize(D.reshaped(1), y, params);
  r.algorithm = Algorithm::BasisPursuit;
  return r;
}

// ---------------------------------------------------------------------------

RecoveryResult oracle_support_search(const BlockDictionary& D, const Vector& y, Index k,
                                     const SolverParams& params) {
  params.validate();
  require_measurement(D, y);
  const Index M = D.shape().M();
  if (k < 0 || k > M)
    throw InvalidInput("k=" + std::to_string(k) + " outside [0, " + std::to_string(M) + "]");
  const Index subsets = binomial(M, k);
  if (subsets > params.subsetBudget)
    throw BudgetExceeded("oracle search needs C(" + std::to_string(M) + "," + std::to_string(k) +
                         ") = " + std::to_string(subsets) + " subsets, budget is " +
                         std::to_string(params.subsetBudget));

  const double ynorm = y.norm();
  const double floor = 1e-12 * ynorm;
  RecoveryResult result = zero_result(D, Algorithm::Oracle);
  result.residualNorm = ynorm;

  bool found = false;
  double best = 0.0;
  std::vector<Index> best_blocks;
  Vector best_coeffs;
  int visited = 0;
  for_each_subset(M, k, [&](const std::vector<Index>& blocks) {
    ++visited;
    try {
      SupportFit fit = fit_support(D, blocks, y);
      const double res = std::max(fit.residual.norm(), floor);
      if (!found || res < best) {
        found = true;
        best = res;
        best_blocks = blocks;
        best_coeffs = std::move(fit.coeffs);
      }
    } catch (const RankDeficient&) {
    }
    return true;
  });
  if (!found) throw RankDeficient("every " + std::to_string(k) + "-block support is rank deficient");

  result.support = SupportSet(M, best_blocks);
  result.xHat = scatter(D.shape(), best_blocks, best_coeffs);
  result.residualNorm = (y - D.entries() * result.xHat.values()).norm();
  result.iterations = visited;
  result.converged = result.residualNorm <= 1e-10 * ynorm;
  return result;
}

RecoveryResult run_algorithm(Algorithm alg, const BlockDictionary& D, const Vector& y,
                             std::optional<Index> k, const SolverParams& params) {
  switch (alg) {
    case Algorithm::Bomp: return bomp(D, y, k, params);
    case Algorithm::Omp: return omp(D, y, k, params);
    case Algorithm::L21: return l21_minimize(D, y, params);
    case Algorithm::BasisPursuit: return basis_pursuit(D, y, params);
    case Algorithm::Oracle:
      if (!k) throw InvalidInput("oracle search needs k");
      return oracle_support_search(D, y, *k, params);
  }
  throw InvalidInput("unknown algorithm");
}

}  // namespace bsk
