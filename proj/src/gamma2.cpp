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

#include "tnorm/gamma2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tnorm/error.hpp"
#include "tnorm/exact.hpp"

namespace tnorm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double krivine_constant() {
  static const double k = M_PI / (2.0 * std::log(1.0 + std::sqrt(2.0)));
  return k;
}

namespace {

void check_answers(int n, int max_answers) {
  if (n > max_answers || n > 24) {
    throw CapExceeded("sign-pattern enumeration over " + std::to_string(n) +
                      " answers exceeds the cap of " + std::to_string(std::min(max_answers, 24)));
  }
}

/// Pattern `mask` over n answers: s(0) = +1, s(a) = -1 iff bit a - 1 is set.
int pattern_sign(std::uint32_t mask, int a) { return a > 0 && (mask >> (a - 1)) & 1u ? -1 : 1; }

std::uint32_t pattern_count(int n) { return 1u << (n - 1); }

OpnormResult sign_opnorm(const VectorSystem& vs) {
  vs.validate();
  check_answers(vs.n_answers, 24);
  OpnormResult best;
  best.value = -1.0;
  VectorXd acc(vs.dim());
  for (int q = 0; q < vs.n_questions; ++q) {
    for (std::uint32_t mask = 0; mask < pattern_count(vs.n_answers); ++mask) {
      acc.setZero();
      for (int a = 0; a < vs.n_answers; ++a) {
        acc += pattern_sign(mask, a) * vs.vectors.col(q * vs.n_answers + a);
      }
      const double v = acc.norm();
      if (v > best.value) {
        best.value = v;
        best.question = q;
        best.signs.resize(vs.n_answers);
        for (int a = 0; a < vs.n_answers; ++a) best.signs[a] = pattern_sign(mask, a);
      }
    }
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

/// Sign-form constraints s' Z_qq s <= rhs (minus Z(t_index, t_index) when
/// t_index >= 0) for one party.
void add_sign_constraints(SdpProblem& prob, int offset, int n_questions, int n_answers,
                          double rhs, int t_index) {
  for (int q = 0; q < n_questions; ++q) {
    for (std::uint32_t mask = 0; mask < pattern_count(n_answers); ++mask) {
      SparseSym c;
      for (int a = 0; a < n_answers; ++a)
        for (int a2 = a; a2 < n_answers; ++a2) {
          const int r1 = offset + q * n_answers + a;
          const int r2 = offset + q * n_answers + a2;
          c.add(r1, r2, pattern_sign(mask, a) * pattern_sign(mask, a2));
        }
      if (t_index >= 0) c.add(t_index, t_index, -1.0);
      prob.add_inequality(std::move(c), rhs);
    }
  }
}

SdpSolution solve_checked(const SdpProblem& prob, const Gamma2Options& o, const char* what) {
  SdpOptions so = o.sdp;
  so.tol = o.tol;
  SdpSolution sol = solve(prob, so);
  if (sol.status != SdpStatus::kOptimal) {
    throw SolverFailure(std::string(what) + ": solver returned " + to_string(sol.status) +
                        " after " + std::to_string(sol.iterations) + " iterations");
  }
  return sol;
}

}  // namespace

void VectorSystem::validate() const {
  if (n_questions <= 0 || n_answers <= 0) throw InvalidInput("vector system extents must be positive");
  if (vectors.cols() != static_cast<Eigen::Index>(n_questions) * n_answers) {
    throw DimensionMismatch("vector system needs n_questions * n_answers columns");
  }
  if (!vectors.allFinite()) throw InvalidInput("vector system has non-finite entries");
}

VectorSystem transposed(const VectorSystem& vs) {
  VectorSystem out = vs;
  out.side = vs.side == Side::kAlice ? Side::kBob : Side::kAlice;
  return out;
}

OpnormResult opnorm_1inf_to_2(const VectorSystem& vs) { return sign_opnorm(vs); }

OpnormResult opnorm_2_to_inf1(const VectorSystem& vs) {
  // The row matrix with rows n_{y,b}' is the transpose of the column matrix
  // with columns n_{y,b}; the two operator norms coincide.
  return sign_opnorm(vs);
}

BehaviorTensor GramWitness::cross_block() const {
  std::vector<double> data(dims.size());
  for (int x = 0; x < dims.nx; ++x)
    for (int a = 0; a < dims.na; ++a)
      for (int y = 0; y < dims.ny; ++y)
        for (int b = 0; b < dims.nb; ++b)
          data[dims.index(x, a, y, b)] = z(alice_row(x, a), bob_row(y, b));
  return BehaviorTensor(dims, std::move(data));
}

SdpProblem gamma2_star_problem(const BellFunctional& g, int max_answers) {
  const Dims& d = g.dims();
  check_answers(d.na, max_answers);
  check_answers(d.nb, max_answers);
  SdpProblem prob;
  prob.dim = d.alice_size() + d.bob_size();
  prob.sense = Sense::kMaximize;
  for (int x = 0; x < d.nx; ++x)
    for (int a = 0; a < d.na; ++a)
      for (int y = 0; y < d.ny; ++y)
        for (int b = 0; b < d.nb; ++b) {
          const double v = g(x, a, y, b);
          if (v != 0.0) {
            prob.objective.add_pairing_term(x * d.na + a, d.alice_size() + y * d.nb + b, v);
          }
        }
  add_sign_constraints(prob, 0, d.nx, d.na, 1.0, -1);
  add_sign_constraints(prob, d.alice_size(), d.ny, d.nb, 1.0, -1);
  return prob;
}

SdpProblem gamma2_problem(const BehaviorTensor& p, int max_answers) {
  const Dims& d = p.dims();
  check_answers(d.na, max_answers);
  check_answers(d.nb, max_answers);
  const int n = d.alice_size() + d.bob_size();
  SdpProblem prob;
  prob.dim = n + 1;
  prob.sense = Sense::kMinimize;
  prob.objective.add(n, n, 1.0);
  for (int x = 0; x < d.nx; ++x)
    for (int a = 0; a < d.na; ++a)
      for (int y = 0; y < d.ny; ++y)
        for (int b = 0; b < d.nb; ++b) {
          SparseSym e;
          e.add_pairing_term(x * d.na + a, d.alice_size() + y * d.nb + b, 1.0);
          prob.add_equality(std::move(e), p(x, a, y, b));
        }
  add_sign_constraints(prob, 0, d.nx, d.na, 0.0, n);
  add_sign_constraints(prob, d.alice_size(), d.ny, d.nb, 0.0, n);
  return prob;
}

Gamma2Result gamma2(const BehaviorTensor& p, const Gamma2Options& o) {
  const SdpProblem prob = gamma2_problem(p, o.max_answers);
  const SdpSolution sol = solve_checked(prob, o, "gamma2");
  const int n = prob.dim - 1;
  Gamma2Result r;
  r.value = sol.primal_value;
  r.gap = sol.gap;
  r.iterations = sol.iterations;
  r.kkt = sol.kkt;
  r.witness.dims = p.dims();
  r.witness.z = sol.z.topLeftCorner(n, n);
  r.witness.bound = sol.z(n, n);
  const auto [va, vb] = witness_vectors(r.witness);
  r.witness_opnorm_product = opnorm_2_to_inf1(vb).value * opnorm_1inf_to_2(va).value;
  return r;
}

Gamma2StarResult gamma2_star(const BellFunctional& g, const Gamma2Options& o) {
  const SdpProblem prob = gamma2_star_problem(g, o.max_answers);
  const SdpSolution sol = solve_checked(prob, o, "gamma2_star");
  Gamma2StarResult r;
  r.value = sol.primal_value;
  r.gap = sol.gap;
  r.iterations = sol.iterations;
  r.kkt = sol.kkt;
  r.witness.dims = g.dims();
  r.witness.z = sol.z;
  r.witness.bound = 1.0;
  r.optimizer = r.witness.cross_block();
  return r;
}

XorValue xor_entangled_value(const Game& game, const Gamma2Options& o) {
  if (!game.is_xor()) throw InvalidInput("xor_entangled_value needs an XOR game");
  const Dims& d = game.dims();
  double constant = 0.0;
  std::vector<double> h(static_cast<std::size_t>(d.nx) * d.ny);
  const Dims cd{d.nx, d.ny, 1, 1};
  for (int x = 0; x < d.nx; ++x)
    for (int y = 0; y < d.ny; ++y) {
      const double v0 = game.v(x, y, 0, 0);
      const double v1 = game.v(x, y, 0, 1);
      constant += game.pi(x, y) * (v0 + v1) / 2.0;
      h[cd.index(x, 0, y, 0)] = game.pi(x, y) * (v0 - v1);
    }
  XorValue out;
  const auto full = gamma2_star(game_to_functional(game), o);
  const auto corr = gamma2_star(BellFunctional(cd, std::move(h)), o);
  out.value = full.value;
  out.gap = full.gap;
  out.bias = corr.value;
  out.from_bias = constant + corr.value / 2.0;
  out.consistent = std::abs(out.value - out.from_bias) <= 10.0 * o.tol;
  return out;
}

BellFunctional Decomposition::reconstruct() const {
  if (lefts.empty() || rights.empty()) throw InvalidInput("decomposition has no terms");
  if (mu.rows() != static_cast<Eigen::Index>(lefts.size()) ||
      mu.cols() != static_cast<Eigen::Index>(rights.size())) {
    throw DimensionMismatch("mu must be lefts x rights");
  }
  const Dims d{lefts[0].n_questions(), rights[0].n_questions(), lefts[0].n_answers(),
               rights[0].n_answers()};
  std::vector<double> out(d.size(), 0.0);
  for (std::size_t i = 0; i < lefts.size(); ++i)
    for (std::size_t j = 0; j < rights.size(); ++j) {
      const double m = mu(i, j);
      if (m == 0.0) continue;
      const BellFunctional term = outer_functional(lefts[i], rights[j]);
      if (!(term.dims() == d)) throw DimensionMismatch("decomposition terms disagree on dims");
      const auto td = term.data();
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += m * td[k];
    }
  return BellFunctional(d, std::move(out));
}

BehaviorTensor PrimalDecomposition::reconstruct() const {
  if (lefts.empty() || lefts.size() != rights.size()) {
    throw InvalidInput("primal decomposition needs matching nonempty families");
  }
  BehaviorTensor first = outer_behavior(lefts[0], rights[0]);
  std::vector<double> out(first.data().begin(), first.data().end());
  for (std::size_t i = 1; i < lefts.size(); ++i) {
    const BehaviorTensor term = outer_behavior(lefts[i], rights[i]);
    if (!(term.dims() == first.dims())) throw DimensionMismatch("decomposition terms disagree on dims");
    const auto td = term.data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += td[k];
  }
  return BehaviorTensor(first.dims(), std::move(out));
}

double gamma2_star_decomposition_bound(const Decomposition& d) {
  (void)d.reconstruct();  // validates shapes
  double sl = 0.0, sr = 0.0;
  for (const auto& l : d.lefts) sl += std::pow(one_infty_norm(l), 2);
  for (const auto& r : d.rights) sr += std::pow(one_infty_norm(r), 2);
  return spectral_norm(d.mu) * std::sqrt(sl) * std::sqrt(sr);
}

double w2(const std::vector<MarginalTensor>& family) {
  if (family.empty()) throw InvalidInput("w2 needs a nonempty family");
  const int nq = family[0].n_questions();
  const int na = family[0].n_answers();
  for (const auto& f : family) {
    if (f.n_questions() != nq || f.n_answers() != na) throw DimensionMismatch("w2 family dims differ");
    if (f.space() != Space::kPrimal) throw InvalidInput("w2 needs primal marginals");
  }
  check_answers(na, 24);
  // Extreme points of the 1(inf) unit ball: one question, a sign per answer.
  double best = 0.0;
  for (int q = 0; q < nq; ++q)
    for (std::uint32_t mask = 0; mask < pattern_count(na); ++mask) {
      double s = 0.0;
      for (const auto& f : family) {
        double pair = 0.0;
        for (int a = 0; a < na; ++a) pair += pattern_sign(mask, a) * f(q, a);
        s += pair * pair;
      }
      best = std::max(best, s);
    }
  return std::sqrt(best);
}

double w2_bound(const PrimalDecomposition& d) {
  (void)d.reconstruct();
  return w2(d.lefts) * w2(d.rights);
}

std::pair<VectorSystem, VectorSystem> witness_vectors(const GramWitness& w) {
  const Dims& d = w.dims;
  const int n = d.alice_size() + d.bob_size();
  if (w.z.rows() != n || w.z.cols() != n) throw DimensionMismatch("witness matrix has the wrong size");
  const MatrixXd z = 0.5 * (w.z + w.z.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(z);
  const VectorXd& lam = es.eigenvalues();
  const double floor = -1e-8 * std::max(1.0, z.trace());
  if (lam(0) < floor) {
    throw InvalidInput("witness too indefinite: eigenvalue " + std::to_string(lam(0)));
  }
  const VectorXd root = lam.cwiseMax(0.0).cwiseSqrt();
  // Row i of U sqrt(L) is the vector of row i of z.
  const MatrixXd v = (es.eigenvectors() * root.asDiagonal()).transpose();
  VectorSystem a{Side::kAlice, d.nx, d.na, v.leftCols(d.alice_size())};
  VectorSystem b{Side::kBob, d.ny, d.nb, v.rightCols(d.bob_size())};
  return {a, b};
}

Decomposition chsh_bell_decomposition() {
  Decomposition d;
  d.mu = MatrixXd(2, 2);
  d.mu << 1, 1, 1, -1;
  for (int q = 0; q < 2; ++q) {
    std::vector<double> e(4, 0.0);
    e[q * 2 + 0] = 1.0;
    e[q * 2 + 1] = -1.0;
    d.lefts.emplace_back(Side::kAlice, Space::kDual, 2, 2, e);
    d.rights.emplace_back(Side::kBob, Space::kDual, 2, 2, e);
  }
  return d;
}

GrothendieckReport verify_grothendieck(const BellFunctional& g, const Gamma2Options& o) {
  GrothendieckReport r;
  const Dims& d = g.dims();
  r.epsilon = injective_norm(g).value;
  r.gamma2_star = gamma2_star(g, o).value;
  r.bound = krivine_constant() * std::sqrt(static_cast<double>(d.na) * d.nb);
  r.sandwich = r.epsilon <= r.gamma2_star + 1e-6;
  if (r.epsilon >= 1e-12) {
    r.ratio = r.gamma2_star / r.epsilon;
    r.pass = *r.ratio <= r.bound + 1e-6;
  }
  return r;
}

DirectProductReport verify_direct_product(const BellFunctional& g1, const BellFunctional& g2,
                                          const Gamma2Options& o) {
  DirectProductReport r;
  r.factor1 = gamma2_star(g1, o).value;
  r.factor2 = gamma2_star(g2, o).value;
  r.lhs = gamma2_star(compose(g1, g2), o).value;
  r.rhs = r.factor1 * r.factor2;
  r.difference = std::abs(r.lhs - r.rhs);
  r.pass = r.lhs <= r.rhs + 1e-5 * (1.0 + r.rhs);
  return r;
}

DirectProductReport verify_direct_product(const Game& g1, const Game& g2, const Gamma2Options& o) {
  DirectProductReport r = verify_direct_product(game_to_functional(g1), game_to_functional(g2), o);
  r.both_xor = g1.is_xor() && g2.is_xor();
  return r;
}

}  // namespace tnorm
