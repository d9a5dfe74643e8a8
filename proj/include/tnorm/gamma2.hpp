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

// The factorization norm gamma2 on behaviors and its dual gamma2* on Bell
// functionals, both as SDPs over a Gram matrix Z of side nx*na + ny*nb.
//
// Rows of Z: Alice (x, a) -> x * na + a, Bob (y, b) -> nx * na + y * nb + b.
// The operator norm of the Alice factor is max over x and sign patterns s of
// sqrt(s' Z_xx s), so sign-pattern constraints on the diagonal blocks confine
// Z to the gamma2 unit ball.
//
// gamma2 is reported as the common bound t on both sides. Factors rescale
// freely (R -> aR, S -> S/a), so the balanced optimum has both operator
// norms equal to sqrt(t) and their product equal to t.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tnorm/game.hpp"
#include "tnorm/sdp.hpp"

namespace tnorm {

/// pi / (2 ln(1 + sqrt 2)).
double krivine_constant();

/// Vectors m_{q, ans} stored as columns q * n_answers + ans of `vectors`.
struct VectorSystem {
  Side side = Side::kAlice;
  int n_questions = 0;
  int n_answers = 0;
  Eigen::MatrixXd vectors;

  int dim() const { return static_cast<int>(vectors.rows()); }
  Eigen::VectorXd vec(int q, int ans) const { return vectors.col(q * n_answers + ans); }
  /// Throws unless the column count matches and entries are finite.
  void validate() const;
};

/// Same vectors with the side flipped (the row matrix of a column system).
VectorSystem transposed(const VectorSystem& vs);

struct OpnormResult {
  double value = 0.0;
  int question = 0;
  std::vector<int> signs;
};

/// max over questions x and sign patterns s of ||sum_a s(a) m_{x,a}||_2.
OpnormResult opnorm_1inf_to_2(const VectorSystem& vs);
/// Norm of the row matrix (n_{y,b})' as a map from l2 to l_inf(l1).
OpnormResult opnorm_2_to_inf1(const VectorSystem& vs);

struct GramWitness {
  Dims dims;
  Eigen::MatrixXd z;
  double bound = 0.0;

  int alice_row(int x, int a) const { return x * dims.na + a; }
  int bob_row(int y, int b) const { return dims.alice_size() + y * dims.nb + b; }
  BehaviorTensor cross_block() const;
};

struct Gamma2Options {
  double tol = 1e-7;
  /// Sign patterns are enumerated up to this many answers.
  int max_answers = 24;
  SdpOptions sdp;
};

struct Gamma2Result {
  double value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  KktResiduals kkt;
  GramWitness witness;
  /// opnorm_2_to_inf1(B) * opnorm_1inf_to_2(A) of witness_vectors.
  double witness_opnorm_product = 0.0;
};

struct Gamma2StarResult {
  double value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  KktResiduals kkt;
  BehaviorTensor optimizer;
  GramWitness witness;
};

/// SDP whose optimum is gamma2(p): minimize t = Z'(N, N) over Z' of side N + 1
/// with the cross block fixed to p and every sign form at most t.
SdpProblem gamma2_problem(const BehaviorTensor& p, int max_answers = 24);
/// SDP whose optimum is gamma2*(g).
SdpProblem gamma2_star_problem(const BellFunctional& g, int max_answers = 24);

/// Throws SolverFailure unless the SDP reaches optimality.
Gamma2Result gamma2(const BehaviorTensor& p, const Gamma2Options& options = {});
Gamma2StarResult gamma2_star(const BellFunctional& g, const Gamma2Options& options = {});

struct XorValue {
  /// gamma2* of the game functional.
  double value = 0.0;
  /// sum pi (v0 + v1) / 2 + gamma2*(pi (v0 - v1)) / 2 in correlation form.
  double from_bias = 0.0;
  double bias = 0.0;
  double gap = 0.0;
  bool consistent = false;
};

/// Entangled value of an XOR game; throws InvalidInput for other games.
XorValue xor_entangled_value(const Game& game, const Gamma2Options& options = {});

/// sum_{i,j} mu_ij lefts[i] (x) rights[j] over dual marginals.
struct Decomposition {
  Eigen::MatrixXd mu;
  std::vector<MarginalTensor> lefts;
  std::vector<MarginalTensor> rights;

  BellFunctional reconstruct() const;
};

/// sum_i lefts[i] (x) rights[i] over primal marginals.
struct PrimalDecomposition {
  std::vector<MarginalTensor> lefts;
  std::vector<MarginalTensor> rights;

  BehaviorTensor reconstruct() const;
};

/// ||mu||_2 * sqrt(sum ||left||^2) * sqrt(sum ||right||^2) in the 1(inf) norm;
/// an upper bound on gamma2* of the reconstructed functional.
double gamma2_star_decomposition_bound(const Decomposition& d);

/// w2(lefts) * w2(rights) with w2(f) = max over extreme points G of the dual
/// unit ball of (sum_i <G, f_i>^2)^(1/2); an upper bound on gamma2.
double w2_bound(const PrimalDecomposition& d);
/// w2 of one family of primal marginals.
double w2(const std::vector<MarginalTensor>& family);

/// Factor Z = V V' after clipping tiny negative eigenvalues; throws
/// InvalidInput when the most negative eigenvalue is below -1e-8 * max(1, tr).
std::pair<VectorSystem, VectorSystem> witness_vectors(const GramWitness& w);

/// Decomposition of the +-1 CHSH functional with bound 2 sqrt 2.
Decomposition chsh_bell_decomposition();

struct GrothendieckReport {
  double epsilon = 0.0;
  double gamma2_star = 0.0;
  /// Empty when epsilon < 1e-12.
  std::optional<double> ratio;
  double bound = 0.0;
  bool pass = false;
  bool sandwich = false;
};

/// ratio = gamma2*(g) / eps(g) against K sqrt(na nb).
GrothendieckReport verify_grothendieck(const BellFunctional& g,
                                       const Gamma2Options& options = {});

struct DirectProductReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double factor1 = 0.0;
  double factor2 = 0.0;
  bool pass = false;
  /// |lhs - rhs|; equality is expected when both inputs are XOR games.
  double difference = 0.0;
  bool both_xor = false;
};

DirectProductReport verify_direct_product(const BellFunctional& g1, const BellFunctional& g2,
                                          const Gamma2Options& options = {});
DirectProductReport verify_direct_product(const Game& g1, const Game& g2,
                                          const Gamma2Options& options = {});

}  // namespace tnorm
