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

// Dense convex QP and LP solvers for problems with up to a few hundred
// variables. Both are deterministic: the same problem always produces the
// same result bit for bit.

#ifndef STORM_SOLVERS_HPP_
#define STORM_SOLVERS_HPP_

#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace storm {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min 1/2 x'Hx + q'x  s.t.  G x <= h,  A x = b.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd q;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int numVariables() const { return static_cast<int>(q.size()); }
  /// Throws SolverError on inconsistent dimensions or an asymmetric H.
  void validate() const;
  double objective(const Eigen::VectorXd& x) const;
};

/// min c'x  s.t.  G x <= h,  x >= lower.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::VectorXd lower;

  int numVariables() const { return static_cast<int>(c.size()); }
  void validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kMaxIter };

std::string_view toString(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kMaxIter;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  /// Multipliers of G rows (>= 0) and A rows; QP only.
  Eigen::VectorXd ineq_duals;
  Eigen::VectorXd eq_duals;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Dual active-set method (Goldfarb-Idnani). Equality rows are folded into
/// the Hessian with an exact penalty so H only needs to be positive definite
/// on the null space of A; a tiny ridge is added when that fails.
SolveResult solveQp(const QpProblem& problem);

/// Two-phase revised simplex with a dense basis inverse. Entering variable by
/// most negative reduced cost, lowest index on ties, switching to Bland's rule
/// after a run of degenerate pivots. Throws SolverError when unbounded.
SolveResult solveLp(const LpProblem& problem);

struct KktResiduals {
  double primal = 0.0;          // max violation of G x <= h and |A x - b|
  double stationarity = 0.0;    // |H x + q + G'l + A'v|_inf
  double complementarity = 0.0; // max |l_i (h - G x)_i|
  double dual = 0.0;            // max(-l_i, 0)
};

KktResiduals kktResiduals(const QpProblem& problem, const SolveResult& result);

}  // namespace storm

#endif  // STORM_SOLVERS_HPP_
