// Copyright 2026 The tnorm Authors
//
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

#pragma once

// Dense primal-dual interior-point solver for small semidefinite programs
//
//   optimize <Q, Z>  s.t.  <A_k, Z> = b_k,  <C_k, Z> <= d_k,  Z PSD.
//
// Inequalities get a nonnegative slack each, so internally the variable is
// blockdiag(Z, diag(slack)). Directions use Nesterov-Todd scaling with an
// optional Mehrotra predictor-corrector.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tnorm {

/// Sparse symmetric matrix stored as upper-triangle triplets (i <= j) with
/// A(i, j) = A(j, i) = value. Duplicates are summed.
class SparseSym {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  /// A(i, j) += v and A(j, i) += v for i != j; A(i, i) += v otherwise.
  void add(int i, int j, double v);
  /// Adds coef * Z(r, c) to the linear form <A, Z>.
  void add_pairing_term(int r, int c, double coef);

  /// Merged, sorted entries with zeros dropped.
  const std::vector<Entry>& entries() const;
  bool empty() const { return entries().empty(); }
  int max_index() const;

  /// <A, Z> for dense symmetric Z.
  double dot(const Eigen::MatrixXd& z) const;
  Eigen::MatrixXd dense(int n) const;
  double frobenius_norm() const;

 private:
  mutable std::vector<Entry> entries_;
  mutable bool dirty_ = false;
};

enum class Sense { kMaximize, kMinimize };

struct LinearConstraint {
  SparseSym a;
  double rhs = 0.0;
};

struct SdpProblem {
  int dim = 0;
  Sense sense = Sense::kMaximize;
  SparseSym objective;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;

  void add_equality(SparseSym a, double rhs) { equalities.push_back({std::move(a), rhs}); }
  void add_inequality(SparseSym a, double rhs) { inequalities.push_back({std::move(a), rhs}); }
};

enum class SdpStatus { kOptimal, kPrimalInfeasible, kDualInfeasible, kMaxIterations };

std::string to_string(SdpStatus status);

struct SdpOptions {
  double tol = 1e-8;
  int max_iterations = 300;
  bool mehrotra = true;
  double step_fraction = 0.98;
  int dim_cap = 512;
  int constraint_cap = 20000;
  /// Threshold on the normalized ray residual used to declare infeasibility.
  double infeasibility_tol = 1e-8;
  bool keep_history = false;
};

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
};

/// One interior-point iterate; values in the caller's sense.
struct IterateRecord {
  int iteration = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double mu = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kMaxIterations;
  Eigen::MatrixXd z;
  Eigen::VectorXd slack;
  /// Multipliers: equalities first, then inequalities (minimization form).
  Eigen::VectorXd y;
  Eigen::MatrixXd dual_slack;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal - dual| / (1 + |primal|).
  double gap = 0.0;
  int iterations = 0;
  KktResiduals kkt;
  std::vector<IterateRecord> history;
};

/// Throws CapExceeded when dimension or constraint caps are exceeded and
/// InvalidInput for malformed problems or tol outside [1e-10, 1e-4].
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

struct ResidualReport {
  /// Largest equality violation or positive inequality excess.
  double primal_residual = 0.0;
  double min_eigenvalue = 0.0;
  /// max(0, -min_eigenvalue).
  double eigenvalue_residual = 0.0;
  double objective = 0.0;
  double asymmetry = 0.0;
};

/// Recomputes feasibility and objective of z from the problem data alone.
ResidualReport check_solution(const SdpProblem& problem, const Eigen::MatrixXd& z);
ResidualReport check_solution(const SdpProblem& problem, const SdpSolution& solution);

/// Plain-text dump. Header lines "dim", "sense", "constraints"; then one block
/// per matrix (index 0 is the objective, then equalities, then inequalities)
/// with lines "index row col value" for the upper triangle, and one line
/// "rhs index eq|le value" per constraint.
void write_sparse_triplets(const SdpProblem& problem, std::ostream& out);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& a);
/// Kronecker product with a's indices outermost.
Eigen::MatrixXd kron_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace tnorm
