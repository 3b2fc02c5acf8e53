// Copyright 2026 The STORM Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <vector>

#include "storm/solvers.hpp"

namespace storm {

void LpProblem::validate() const {
  const Eigen::Index n = c.size();
  if (lower.size() != n) throw SolverError("LP: lower bounds have wrong size");
  if (G.rows() > 0 && G.cols() != n) throw SolverError("LP: G has wrong column count");
  if (G.rows() != h.size()) throw SolverError("LP: G and h disagree");
  if (!c.allFinite() || !lower.allFinite() || !h.allFinite() || !G.allFinite()) {
    throw SolverError("LP: non-finite data");
  }
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kDegenerateRunBeforeBland = 20;

// Standard form  A y = rhs,  y >= 0,  rhs >= 0  with a dense basis inverse.
class RevisedSimplex {
 public:
  RevisedSimplex(Eigen::MatrixXd a, Eigen::VectorXd rhs, std::vector<int> basis)
      : a_(std::move(a)), rhs_(std::move(rhs)), basis_(std::move(basis)) {
    // A slack/artificial start basis is diagonal; skip the factorization.
    const int rows = static_cast<int>(a_.rows());
    bool diagonal = true;
    for (int i = 0; i < rows && diagonal; ++i) {
      for (int k = 0; k < rows; ++k) {
        const double v = a_(k, basis_[i]);
        if ((k == i) != (v != 0.0)) {
          diagonal = false;
          break;
        }
      }
    }
    if (!diagonal) {
      refactor();
      return;
    }
    binv_ = Eigen::MatrixXd::Zero(rows, rows);
    for (int i = 0; i < rows; ++i) binv_(i, i) = 1.0 / a_(i, basis_[i]);
    xb_ = binv_.diagonal().cwiseProduct(rhs_);
  }

  enum class Outcome { kOptimal, kUnbounded, kIterationLimit };

  // Minimizes cost'y over columns with allowed[j] true (basic columns may be
  // disallowed; they simply never re-enter).
  Outcome minimize(const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
                   int& iterations, int max_iterations) {
    const int rows = static_cast<int>(a_.rows());
    const int cols = static_cast<int>(a_.cols());
    std::vector<bool> in_basis(cols, false);
    for (int v : basis_) in_basis[v] = true;
    const double cost_scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
    int degenerate_run = 0;
    int since_refactor = 0;

    while (true) {
      if (iterations >= max_iterations) return Outcome::kIterationLimit;
      Eigen::VectorXd cb(rows);
      for (int i = 0; i < rows; ++i) cb[i] = cost[basis_[i]];
      const Eigen::RowVectorXd y = cb.transpose() * binv_;
      const Eigen::RowVectorXd reduced = cost.transpose() - y * a_;

      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      int entering = -1;
      double best = -1e-9 * cost_scale;
      for (int j = 0; j < cols; ++j) {
        if (!allowed[j] || in_basis[j]) continue;
        if (reduced[j] < best) {
          entering = j;
          if (bland) break;
          best = reduced[j];
        }
      }
      if (entering < 0) return Outcome::kOptimal;

      const Eigen::VectorXd alpha = binv_ * a_.col(entering);
      int leave = -1;
      double theta = 0.0;
      for (int i = 0; i < rows; ++i) {
        if (alpha[i] <= kPivotTol) continue;
        const double ratio = std::max(xb_[i], 0.0) / alpha[i];
        if (leave < 0 || ratio < theta - 1e-12 * (1.0 + theta) ||
            (std::abs(ratio - theta) <= 1e-12 * (1.0 + theta) && basis_[i] < basis_[leave])) {
          leave = i;
          theta = ratio;
        }
      }
      if (leave < 0) return Outcome::kUnbounded;

      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(leave, entering, alpha);
      in_basis[entering] = true;
      ++iterations;
      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
      // Re-derive the leaving flag from the basis after the pivot.
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (int v : basis_) in_basis[v] = true;
    }
  }

  // Pivots basic variables listed in `drive_out` out of the basis where some
  // allowed column has a nonzero entry in their row.
  void driveOut(const std::vector<bool>& drive_out, const std::vector<bool>& allowed) {
    const int rows = static_cast<int>(a_.rows());
    const int cols = static_cast<int>(a_.cols());
    for (int r = 0; r < rows; ++r) {
      if (!drive_out[basis_[r]]) continue;
      std::vector<bool> in_basis(cols, false);
      for (int v : basis_) in_basis[v] = true;
      const Eigen::RowVectorXd row = binv_.row(r) * a_;
      for (int j = 0; j < cols; ++j) {
        if (!allowed[j] || in_basis[j]) continue;
        if (std::abs(row[j]) > kPivotTol) {
          pivot(r, j, binv_ * a_.col(j));
          break;
        }
      }
    }
    refactor();
  }

  const std::vector<int>& basis() const { return basis_; }
  const Eigen::VectorXd& basicValues() const { return xb_; }

 private:
  void pivot(int r, int entering, const Eigen::VectorXd& alpha) {
    const double piv = alpha[r];
    binv_.row(r) /= piv;
    xb_[r] /= piv;
    for (int i = 0; i < binv_.rows(); ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      binv_.row(i) -= alpha[i] * binv_.row(r);
      xb_[i] -= alpha[i] * xb_[r];
    }
    basis_[r] = entering;
  }

  void refactor() {
    const int rows = static_cast<int>(a_.rows());
    Eigen::MatrixXd b(rows, rows);
    for (int i = 0; i < rows; ++i) b.col(i) = a_.col(basis_[i]);
    binv_ = b.partialPivLu().inverse();
    xb_ = binv_ * rhs_;
  }

  Eigen::MatrixXd a_;
  Eigen::VectorXd rhs_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
};

}  // namespace

SolveResult solveLp(const LpProblem& problem) {
  problem.validate();
  const int nv = problem.numVariables();
  SolveResult result;

  // x = lower + y with y >= 0. Rows with non-positive coefficients that the
  // lower bounds already satisfy can never bind and are dropped.
  const Eigen::VectorXd shifted = problem.h - problem.G * problem.lower;
  std::vector<int> kept;
  for (int i = 0; i < problem.G.rows(); ++i) {
    const double scale = std::max(1.0, std::abs(problem.h[i]));
    const bool implied = problem.G.row(i).maxCoeff() <= 0.0 && shifted[i] >= -1e-12 * scale;
    if (!implied) kept.push_back(i);
  }
  const int mr = static_cast<int>(kept.size());

  if (mr == 0) {
    for (int j = 0; j < nv; ++j) {
      if (problem.c[j] < 0.0) throw SolverError("LP unbounded");
    }
    result.status = SolveStatus::kOptimal;
    result.x = problem.lower;
    result.objective = problem.c.dot(result.x);
    return result;
  }

  int n_art = 0;
  for (int r = 0; r < mr; ++r) n_art += shifted[kept[r]] < 0.0 ? 1 : 0;
  const int cols = nv + mr + n_art;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(mr, cols);
  Eigen::VectorXd rhs(mr);
  std::vector<int> basis(mr);
  std::vector<bool> artificial(cols, false);
  int next_art = nv + mr;
  for (int r = 0; r < mr; ++r) {
    const int i = kept[r];
    const double sign = shifted[i] < 0.0 ? -1.0 : 1.0;
    a.row(r).head(nv) = sign * problem.G.row(i);
    a(r, nv + r) = sign;
    rhs[r] = sign * shifted[i];
    if (sign < 0.0) {
      a(r, next_art) = 1.0;
      artificial[next_art] = true;
      basis[r] = next_art++;
    } else {
      basis[r] = nv + r;
    }
  }

  RevisedSimplex simplex(std::move(a), rhs, std::move(basis));
  const int max_iterations = 50 * (mr + cols) + 100;
  int iterations = 0;

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    for (int j = 0; j < cols; ++j) phase1[j] = artificial[j] ? 1.0 : 0.0;
    const std::vector<bool> all(cols, true);
    const auto outcome = simplex.minimize(phase1, all, iterations, max_iterations);
    if (outcome == RevisedSimplex::Outcome::kIterationLimit) {
      result.status = SolveStatus::kMaxIter;
      result.iterations = iterations;
      return result;
    }
    double infeasibility = 0.0;
    for (int i = 0; i < mr; ++i) {
      if (artificial[simplex.basis()[i]]) infeasibility += std::max(simplex.basicValues()[i], 0.0);
    }
    if (infeasibility > 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
      result.status = SolveStatus::kInfeasible;
      result.iterations = iterations;
      return result;
    }
    std::vector<bool> structural(cols);
    for (int j = 0; j < cols; ++j) structural[j] = !artificial[j];
    simplex.driveOut(artificial, structural);
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(nv) = problem.c;
  std::vector<bool> allowed(cols);
  for (int j = 0; j < cols; ++j) allowed[j] = !artificial[j];
  const auto outcome = simplex.minimize(phase2, allowed, iterations, max_iterations);
  if (outcome == RevisedSimplex::Outcome::kUnbounded) throw SolverError("LP unbounded");
  if (outcome == RevisedSimplex::Outcome::kIterationLimit) {
    result.status = SolveStatus::kMaxIter;
    result.iterations = iterations;
    return result;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < mr; ++i) {
    const int v = simplex.basis()[i];
    if (v < nv) y[v] = std::max(simplex.basicValues()[i], 0.0);
  }
  result.status = SolveStatus::kOptimal;
  result.x = problem.lower + y;
  result.objective = problem.c.dot(result.x);
  result.iterations = iterations;
  return result;
}

}  // namespace storm
