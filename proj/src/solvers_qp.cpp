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
#include <limits>
#include <vector>

#include "storm/solvers.hpp"

namespace storm {

std::string_view toString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kMaxIter: return "max_iter";
  }
  return "unknown";
}

void QpProblem::validate() const {
  const Eigen::Index n = q.size();
  if (H.rows() != n || H.cols() != n) throw SolverError("QP: H must be n x n");
  if (G.cols() != n && G.rows() > 0) throw SolverError("QP: G has wrong column count");
  if (G.rows() != h.size()) throw SolverError("QP: G and h disagree");
  if (A.cols() != n && A.rows() > 0) throw SolverError("QP: A has wrong column count");
  if (A.rows() != b.size()) throw SolverError("QP: A and b disagree");
  if (!H.allFinite() || !q.allFinite() || !G.allFinite() || !h.allFinite() || !A.allFinite() ||
      !b.allFinite()) {
    throw SolverError("QP: non-finite data");
  }
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (n > 0 && (H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw SolverError("QP: H is not symmetric");
  }
}

double QpProblem::objective(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(H * x) + q.dot(x);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Goldfarb-Idnani state. Constraints are stored in the form n'x >= c0.
class DualActiveSet {
 public:
  DualActiveSet(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& linear)
      : n_(static_cast<int>(linear.size())) {
    if (llt.info() != Eigen::Success) throw SolverError("QP: Hessian not positive definite");
    // J = L^{-T}, so that J J' = H^{-1}.
    const Eigen::MatrixXd l = llt.matrixL();
    j_ = l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n_, n_));
    r_ = Eigen::MatrixXd::Zero(n_, n_);
    x_ = -llt.solve(linear);
  }

  const Eigen::VectorXd& x() const { return x_; }
  int activeCount() const { return q_; }

  // Adds constraint `id` (normal, offset). Returns false when the problem is
  // infeasible. Equalities are never dropped later.
  bool enforce(int id, Eigen::VectorXd normal, double offset, bool equality,
               int& iterations, int max_iterations) {
    double slack = normal.dot(x_) - offset;
    if (equality && slack > 0.0) {
      normal = -normal;
      offset = -offset;
      slack = -slack;
      flipped_.push_back(id);
    }
    double u_plus = 0.0;
    while (true) {
      if (++iterations > max_iterations) return false;
      const Eigen::VectorXd d = j_.transpose() * normal;
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
      if (q_ < n_) z = j_.rightCols(n_ - q_) * d.tail(n_ - q_);
      Eigen::VectorXd r;
      if (q_ > 0) {
        r = r_.topLeftCorner(q_, q_).triangularView<Eigen::Upper>().solve(d.head(q_));
      }

      // Partial step: largest step keeping active inequality duals >= 0.
      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < q_; ++k) {
        if (is_equality_[k]) continue;
        if (r[k] > 0.0) {
          const double ratio = u_[k] / r[k];
          if (ratio < t1) {
            t1 = ratio;
            drop = k;
          }
        }
      }
      // Full step: makes the constraint active.
      const double curvature = z.dot(normal);
      const double dnorm = d.norm();
      const bool has_direction = q_ < n_ && d.tail(n_ - q_).norm() > 1e-12 * std::max(1.0, dnorm);
      double t2 = kInf;
      if (has_direction && curvature > 0.0) t2 = -slack / curvature;

      const double t = std::min(t1, t2);
      if (t == kInf) return false;
      if (t2 == kInf) {
        for (int k = 0; k < q_; ++k) u_[k] -= t * r[k];
        u_plus += t;
        dropConstraint(drop);
        continue;
      }
      x_ += t * z;
      for (int k = 0; k < q_; ++k) u_[k] -= t * r[k];
      u_plus += t;
      if (t == t2) {
        addConstraint(d);
        active_.push_back(id);
        u_.push_back(u_plus);
        is_equality_.push_back(equality);
        return true;
      }
      dropConstraint(drop);
      slack = normal.dot(x_) - offset;
    }
  }

  bool isActive(int id) const {
    return std::find(active_.begin(), active_.end(), id) != active_.end();
  }
  const std::vector<int>& active() const { return active_; }
  const std::vector<double>& multipliers() const { return u_; }
  bool wasFlipped(int id) const {
    return std::find(flipped_.begin(), flipped_.end(), id) != flipped_.end();
  }

 private:
  // Rotates d so that entries q+1.. vanish, updating J accordingly, then
  // appends d[0..q] as a new column of R.
  void addConstraint(Eigen::VectorXd d) {
    for (int k = n_ - 1; k > q_; --k) {
      double a = d[k - 1];
      double b = d[k];
      if (b == 0.0) continue;
      const double hyp = std::hypot(a, b);
      const double c = a / hyp;
      const double s = b / hyp;
      d[k - 1] = hyp;
      d[k] = 0.0;
      for (int row = 0; row < n_; ++row) {
        const double jl = j_(row, k - 1);
        const double jr = j_(row, k);
        j_(row, k - 1) = c * jl + s * jr;
        j_(row, k) = -s * jl + c * jr;
      }
    }
    r_.col(q_).head(q_ + 1) = d.head(q_ + 1);
    ++q_;
  }

  void dropConstraint(int pos) {
    active_.erase(active_.begin() + pos);
    u_.erase(u_.begin() + pos);
    is_equality_.erase(is_equality_.begin() + pos);
    for (int col = pos; col < q_ - 1; ++col) r_.col(col) = r_.col(col + 1);
    r_.col(q_ - 1).setZero();
    --q_;
    // R is now upper Hessenberg from column pos; restore triangular form.
    for (int k = pos; k < q_; ++k) {
      const double a = r_(k, k);
      const double b = r_(k + 1, k);
      if (b == 0.0) continue;
      const double hyp = std::hypot(a, b);
      const double c = a / hyp;
      const double s = b / hyp;
      for (int col = k; col < q_; ++col) {
        const double top = r_(k, col);
        const double bot = r_(k + 1, col);
        r_(k, col) = c * top + s * bot;
        r_(k + 1, col) = -s * top + c * bot;
      }
      r_(k + 1, k) = 0.0;
      for (int row = 0; row < n_; ++row) {
        const double jl = j_(row, k);
        const double jr = j_(row, k + 1);
        j_(row, k) = c * jl + s * jr;
        j_(row, k + 1) = -s * jl + c * jr;
      }
    }
  }

  int n_;
  int q_ = 0;
  Eigen::MatrixXd j_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd x_;
  std::vector<int> active_;
  std::vector<double> u_;
  std::vector<bool> is_equality_;
  std::vector<int> flipped_;
};

}  // namespace

SolveResult solveQp(const QpProblem& problem) {
  problem.validate();
  const int n = problem.numVariables();
  const int n_ineq = static_cast<int>(problem.G.rows());
  const int n_eq = static_cast<int>(problem.A.rows());
  SolveResult result;
  result.ineq_duals = Eigen::VectorXd::Zero(n_ineq);
  result.eq_duals = Eigen::VectorXd::Zero(n_eq);
  if (n == 0) {
    result.status = SolveStatus::kOptimal;
    result.x = Eigen::VectorXd(0);
    return result;
  }

  // The penalty mu |Ax - b|^2 vanishes on the feasible set, so it leaves the
  // solution and the multipliers unchanged.
  Eigen::MatrixXd hessian = problem.H;
  Eigen::VectorXd linear = problem.q;
  if (n_eq > 0) {
    const double mu = std::max(1.0, problem.H.diagonal().cwiseAbs().maxCoeff());
    hessian += mu * problem.A.transpose() * problem.A;
    linear -= mu * problem.A.transpose() * problem.b;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-9 * std::max(1.0, hessian.diagonal().cwiseAbs().maxCoeff());
    hessian.diagonal().array() += ridge;
    llt.compute(hessian);
  }

  DualActiveSet solver(llt, linear);
  const int max_iterations = 50 * (n + n_ineq + n_eq) + 100;
  int iterations = 0;

  for (int e = 0; e < n_eq; ++e) {
    const Eigen::VectorXd normal = problem.A.row(e).transpose();
    const double scale = std::max(1.0, normal.cwiseAbs().maxCoeff());
    const double residual = normal.dot(solver.x()) - problem.b[e];
    // Rows that are already satisfied and linearly dependent are skipped.
    if (!solver.enforce(e, normal, problem.b[e], true, iterations, max_iterations)) {
      if (std::abs(residual) <= 1e-9 * scale * (1.0 + std::abs(problem.b[e]))) continue;
      result.status = iterations > max_iterations ? SolveStatus::kMaxIter : SolveStatus::kInfeasible;
      result.x = solver.x();
      result.iterations = iterations;
      return result;
    }
  }

  Eigen::VectorXd row_scale(n_ineq);
  for (int i = 0; i < n_ineq; ++i) {
    row_scale[i] = std::max(problem.G.row(i).cwiseAbs().maxCoeff(), 1e-300);
  }
  while (true) {
    // Most violated inequality, lowest index on ties.
    int pick = -1;
    double worst = 0.0;
    const Eigen::VectorXd residual = problem.G * solver.x() - problem.h;
    for (int i = 0; i < n_ineq; ++i) {
      if (solver.isActive(n_eq + i)) continue;
      const double tol = 1e-11 * (1.0 + std::abs(problem.h[i]) / row_scale[i]);
      const double v = residual[i] / row_scale[i];
      if (v > tol && v > worst) {
        worst = v;
        pick = i;
      }
    }
    if (pick < 0) break;
    const int id = n_eq + pick;
    if (!solver.enforce(id, -problem.G.row(pick).transpose(), -problem.h[pick], false,
                        iterations, max_iterations)) {
      result.status = iterations > max_iterations ? SolveStatus::kMaxIter : SolveStatus::kInfeasible;
      result.x = solver.x();
      result.iterations = iterations;
      return result;
    }
  }

  result.status = SolveStatus::kOptimal;
  result.x = solver.x();
  result.iterations = iterations;
  result.objective = problem.objective(result.x);
  const auto& active = solver.active();
  const auto& u = solver.multipliers();
  for (std::size_t k = 0; k < active.size(); ++k) {
    const int id = active[k];
    if (id < n_eq) {
      // n'x >= b with n = a gives a multiplier of -u on a'x = b in the
      // Lagrangian convention H x + q + A'v = 0.
      result.eq_duals[id] = solver.wasFlipped(id) ? u[k] : -u[k];
    } else {
      result.ineq_duals[id - n_eq] = u[k];
    }
  }
  return result;
}

KktResiduals kktResiduals(const QpProblem& problem, const SolveResult& result) {
  KktResiduals k;
  const Eigen::VectorXd& x = result.x;
  if (problem.G.rows() > 0) {
    const Eigen::VectorXd slack = problem.h - problem.G * x;
    k.primal = std::max(0.0, -slack.minCoeff());
    if (result.ineq_duals.size() == slack.size()) {
      k.complementarity = result.ineq_duals.cwiseProduct(slack).cwiseAbs().maxCoeff();
      k.dual = std::max(0.0, -result.ineq_duals.minCoeff());
    }
  }
  if (problem.A.rows() > 0) {
    k.primal = std::max(k.primal, (problem.A * x - problem.b).cwiseAbs().maxCoeff());
  }
  Eigen::VectorXd grad = problem.H * x + problem.q;
  if (problem.G.rows() > 0 && result.ineq_duals.size() == problem.G.rows())
    grad += problem.G.transpose() * result.ineq_duals;
  if (problem.A.rows() > 0 && result.eq_duals.size() == problem.A.rows())
    grad += problem.A.transpose() * result.eq_duals;
  k.stationarity = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
  return k;
}

}  // namespace storm
