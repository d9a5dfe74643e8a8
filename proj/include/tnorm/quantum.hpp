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

// Finite-dimensional bipartite quantum strategies: pure states with local
// projective measurements, the vector systems they induce, observables built
// from anticommuting generators, and see-saw lower bounds.
//
// A state on C^da (x) C^db stores amplitude (i_a, i_b) at i_a * db + i_b.
// Reshaped into the da x db matrix Phi, <Psi| M (x) N |Psi> equals
// tr(Phi^H M Phi N^T).

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tnorm/game.hpp"
#include "tnorm/gamma2.hpp"

namespace tnorm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct PureState {
  int da = 1;
  int db = 1;
  CVector amplitudes;

  /// Throws unless the length is da * db and the norm is 1 within 1e-12.
  void validate() const;
  /// da x db coefficient matrix.
  CMatrix coefficients() const;

  static PureState maximally_entangled(int d);
  static PureState product(const CVector& a, const CVector& b);
};

struct ProjectiveMeasurement {
  int dim = 1;
  std::vector<CMatrix> outcomes;

  /// Hermitian, idempotent, mutually orthogonal and complete within 1e-10.
  void validate() const;
  int n_outcomes() const { return static_cast<int>(outcomes.size()); }

  /// Rank-one projectors onto the standard basis.
  static ProjectiveMeasurement computational(int dim);
  /// Two-outcome measurement from a +-1 observable: (I +- A) / 2.
  static ProjectiveMeasurement from_observable(const CMatrix& a);
};

struct QuantumStrategy {
  PureState state;
  std::vector<ProjectiveMeasurement> alice;
  std::vector<ProjectiveMeasurement> bob;

  void validate() const;
  Dims dims() const;
};

struct Observable {
  int dim = 1;
  CMatrix matrix;

  /// Hermitian within 1e-10; with `pm1`, matrix^2 = I within 1e-8.
  void validate(bool pm1 = true) const;
};

/// p[x, a, y, b] = <Psi| M_x^a (x) N_y^b |Psi>.
BehaviorTensor behavior_of(const QuantumStrategy& s);

/// Real vectors of length 2 da db whose Gram cross products reproduce
/// behavior_of(s): Alice gets [Re; Im] of conj((M (x) I) Psi), Bob gets
/// [Re; -Im] of (I (x) N) Psi.
std::pair<VectorSystem, VectorSystem> strategy_vector_system(const QuantumStrategy& s);

/// n pairwise anticommuting Hermitian involutions of dimension 2^ceil(n/2)
/// (Jordan-Wigner order: Z..Z X I..I, Z..Z Y I..I, ...). n <= 16.
std::vector<Observable> clifford_generators(int n);

struct TsirelsonStrategy {
  PureState state;
  std::vector<Observable> alice;
  std::vector<Observable> bob;

  /// Matrix of <Psi| A_x (x) B_y |Psi>.
  Eigen::MatrixXd correlations() const;
};

/// Observables on a maximally entangled state realizing <m_x, n_y> as
/// correlations. Vectors must have norm <= 1 + 1e-12. They are re-expressed
/// in a basis of their joint span of rank r, and shorter ones are padded to
/// unit length with one extra coordinate per side, so r + 2 generators are
/// used.
TsirelsonStrategy tsirelson_strategy(const std::vector<Eigen::VectorXd>& ms,
                                     const std::vector<Eigen::VectorXd>& ns);

/// Real part of <Psi| A (x) B |Psi>; throws if the imaginary part exceeds 1e-10.
double correlation(const PureState& state, const Observable& a, const Observable& b);

struct SeesawOptions {
  int dim = 2;
  int restarts = 5;
  int iterations = 200;
  std::uint64_t seed = 0;
};

struct SeesawResult {
  /// pairing(game functional, behavior_of(strategy)); a lower bound only.
  double value = 0.0;
  QuantumStrategy strategy;
  int best_restart = 0;
  /// Objective after each sweep of the winning restart.
  std::vector<double> trace;
  std::vector<double> restart_values;
};

/// Alternating best responses: the state becomes a top eigenvector of the
/// Bell operator, then each party's projectors are re-split pairwise on the
/// positive eigenspace of the difference of their coefficient operators.
/// Every step is monotone.
SeesawResult seesaw_lower_bound(const Game& game, const SeesawOptions& options = {});
SeesawResult seesaw_lower_bound(const BellFunctional& g, const SeesawOptions& options = {});

/// Haar-like random strategy: Gaussian state, and per question a random
/// unitary whose columns are dealt to outcomes at random.
QuantumStrategy random_strategy(std::uint64_t seed, const Dims& dims, int local_dim);

/// Maximally entangled qubits with the textbook CHSH angles.
QuantumStrategy chsh_optimal_strategy();

/// Complex numbers are [re, im] pairs; matrices are row-major nested arrays.
std::string strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(std::string_view text);

}  // namespace tnorm
