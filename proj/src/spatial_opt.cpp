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

#include "storm/spatial_opt.hpp"

#include <array>
#include <vector>

namespace storm {

Eigen::VectorXd flatten(const Points& points) {
  Eigen::VectorXd x(points.rows() * 3);
  for (Eigen::Index k = 0; k < points.rows(); ++k) x.segment<3>(3 * k) = points.row(k).transpose();
  return x;
}

Points unflatten(const Eigen::VectorXd& x) {
  Points points(x.size() / 3, 3);
  for (Eigen::Index k = 0; k < points.rows(); ++k) points.row(k) = x.segment<3>(3 * k).transpose();
  return points;
}

EqualityRows boundaryRows(int last_index, int degree, std::span<const double> spans,
                          const BoundaryConditions& bc) {
  const int n = last_index;
  const int vars = 3 * (n + 1);
  EqualityRows rows;
  rows.A = Eigen::MatrixXd::Zero(12, vars);
  rows.b = Eigen::VectorXd::Zero(12);
  const double first = static_cast<double>(degree) / spans.front();
  const double last = static_cast<double>(degree) / spans.back();
  for (int a = 0; a < 3; ++a) {
    rows.A(a, a) = 1.0;
    rows.b[a] = bc.p_start[a];
    rows.A(3 + a, 3 * n + a) = 1.0;
    rows.b[3 + a] = bc.p_goal[a];
    rows.A(6 + a, 3 + a) = first;
    rows.A(6 + a, a) = -first;
    rows.b[6 + a] = bc.v_start[a];
    rows.A(9 + a, 3 * n + a) = last;
    rows.A(9 + a, 3 * (n - 1) + a) = -last;
    rows.b[9 + a] = bc.v_goal[a];
  }
  return rows;
}

Eigen::MatrixXd axisEnergyHessian(int last_index, int degree, std::span<const double> spans) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(last_index + 1, last_index + 1);
  for (int j = 0; j < static_cast<int>(spans.size()); ++j) {
    const SegmentEnergy e = segmentEnergyMatrix(spans, degree, j);
    h.block(j, j, degree + 1, degree + 1) += 2.0 * spans[j] * e.weight;
  }
  return h;
}

QpProblem assembleQp(int last_index, int degree, std::span<const double> spans,
                     const PointConstraintSet& constraints, const EqualityRows& boundary,
                     const Eigen::VectorXd& guidance) {
  const int points = last_index + 1;
  const int vars = 3 * points;
  if (static_cast<int>(spans.size()) != last_index - degree + 1) throw SolverError("span count does not match shape");
  if (constraints.numPoints() != points) throw SolverError("constraint set has wrong point count");
  if (boundary.A.cols() != vars) throw SolverError("boundary rows have wrong width");
  if (guidance.size() != 0 && guidance.size() != vars) throw SolverError("guidance has wrong size");

  QpProblem qp;
  const Eigen::MatrixXd axis = axisEnergyHessian(last_index, degree, spans);
  qp.H = Eigen::MatrixXd::Zero(vars, vars);
  for (int r = 0; r < points; ++r)
    for (int c = 0; c < points; ++c)
      if (axis(r, c) != 0.0)
        for (int a = 0; a < 3; ++a) qp.H(3 * r + a, 3 * c + a) = axis(r, c);
  qp.q = guidance.size() == 0 ? Eigen::VectorXd::Zero(vars) : guidance;

  const int rows = constraints.totalRows();
  qp.G = Eigen::MatrixXd::Zero(rows, vars);
  qp.h = Eigen::VectorXd::Zero(rows);
  int row = 0;
  for (int k = 0; k < points; ++k) {
    const auto& g = constraints.G[k];
    for (Eigen::Index i = 0; i < g.rows(); ++i, ++row) {
      qp.G.block<1, 3>(row, 3 * k) = g.row(i);
      qp.h[row] = constraints.h[k][i];
    }
  }
  qp.A = boundary.A;
  qp.b = boundary.b;
  return qp;
}

namespace {

// Axis touched by a row when exactly one axis class has nonzeros; -1 when
// several do, 0 for an all-zero row.
int rowAxis(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int axis = -2;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row[j] == 0.0) continue;
    const int a = static_cast<int>(j % 3);
    if (axis == -2) axis = a;
    else if (axis != a) return -1;
  }
  return axis == -2 ? 0 : axis;
}

}  // namespace

SolveResult solveSeparable(const QpProblem& problem) {
  const int vars = problem.numVariables();
  if (vars % 3 != 0 || vars == 0) return solveQp(problem);
  for (int c = 0; c < vars; ++c)
    for (int r = 0; r < vars; ++r)
      if (r % 3 != c % 3 && problem.H(r, c) != 0.0) return solveQp(problem);
  std::vector<int> g_axis(problem.G.rows());
  std::vector<int> a_axis(problem.A.rows());
  for (Eigen::Index i = 0; i < problem.G.rows(); ++i) {
    g_axis[i] = rowAxis(problem.G.row(i));
    if (g_axis[i] < 0) return solveQp(problem);
  }
  for (Eigen::Index i = 0; i < problem.A.rows(); ++i) {
    a_axis[i] = rowAxis(problem.A.row(i));
    if (a_axis[i] < 0) return solveQp(problem);
  }

  const int per_axis = vars / 3;
  SolveResult combined;
  combined.status = SolveStatus::kOptimal;
  combined.x = Eigen::VectorXd::Zero(vars);
  combined.ineq_duals = Eigen::VectorXd::Zero(problem.G.rows());
  combined.eq_duals = Eigen::VectorXd::Zero(problem.A.rows());
  for (int a = 0; a < 3; ++a) {
    std::vector<int> g_rows;
    std::vector<int> a_rows;
    for (int i = 0; i < static_cast<int>(g_axis.size()); ++i)
      if (g_axis[i] == a) g_rows.push_back(i);
    for (int i = 0; i < static_cast<int>(a_axis.size()); ++i)
      if (a_axis[i] == a) a_rows.push_back(i);

    const auto cols = Eigen::seqN(a, per_axis, 3);
    QpProblem sub;
    sub.H = problem.H(cols, cols);
    sub.q = problem.q(cols);
    sub.G = problem.G(g_rows, cols);
    sub.h = problem.h(g_rows);
    sub.A = problem.A(a_rows, cols);
    sub.b = problem.b(a_rows);

    const SolveResult res = solveQp(sub);
    combined.iterations += res.iterations;
    if (!res.optimal()) {
      combined.status = res.status;
      combined.x = Eigen::VectorXd();
      return combined;
    }
    for (int r = 0; r < per_axis; ++r) combined.x[3 * r + a] = res.x[r];
    for (std::size_t i = 0; i < g_rows.size(); ++i) combined.ineq_duals[g_rows[i]] = res.ineq_duals[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i < a_rows.size(); ++i) combined.eq_duals[a_rows[i]] = res.eq_duals[static_cast<Eigen::Index>(i)];
  }
  combined.objective = problem.objective(combined.x);
  return combined;
}

CpsResult optimizeControlPoints(int last_index, int degree, std::span<const double> spans,
                                const PointConstraintSet& constraints,
                                const BoundaryConditions& bc, const Eigen::VectorXd& guidance) {
  const EqualityRows boundary = boundaryRows(last_index, degree, spans, bc);
  const QpProblem qp = assembleQp(last_index, degree, spans, constraints, boundary, guidance);
  const SolveResult res = solveSeparable(qp);
  CpsResult out;
  out.status = res.status;
  out.iterations = res.iterations;
  if (res.optimal()) {
    out.points = unflatten(res.x);
    out.objective = res.objective;
  }
  return out;
}

}  // namespace storm
