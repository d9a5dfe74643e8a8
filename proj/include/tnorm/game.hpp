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

// Two-prover games, Bell functionals and behaviors as dense 4-index tensors.
//
// All tensors share one flattening: entry (x, a, y, b) lives at
// ((x * na + a) * ny + y) * nb + b, i.e. Alice's (question, answer) pair is
// outermost. Composed systems flatten again with round one outermost:
// question (x1, x2) -> x1 * nx2 + x2 and answer (a1, a2) -> a1 * na2 + a2.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tnorm {

struct Dims {
  int nx = 1;
  int ny = 1;
  int na = 1;
  int nb = 1;

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * na * ny * nb;
  }
  std::size_t index(int x, int a, int y, int b) const {
    return ((static_cast<std::size_t>(x) * na + a) * ny + y) * nb + b;
  }
  /// Rows of the Alice block of a Gram matrix (nx * na).
  int alice_size() const { return nx * na; }
  int bob_size() const { return ny * nb; }

  bool operator==(const Dims&) const = default;

  /// Throws InvalidInput unless every extent is positive.
  void validate() const;
  std::string to_string() const;
};

/// Dims of the parallel composition of two systems.
Dims compose_dims(const Dims& d1, const Dims& d2);

/// Default cap on the number of entries of a composed tensor.
inline constexpr std::size_t kDefaultComposeCap = 1'000'000;

/// Dense real 4-index tensor; shared storage for functionals and behaviors.
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(Dims dims, std::vector<double> data);
  explicit Tensor4(Dims dims);

  const Dims& dims() const { return dims_; }
  double operator()(int x, int a, int y, int b) const {
    return data_[dims_.index(x, a, y, b)];
  }
  std::span<const double> data() const { return data_; }

  bool operator==(const Tensor4&) const = default;

 protected:
  Dims dims_;
  std::vector<double> data_;
};

/// Element of l1(l_inf) (x) l1(l_inf): a game after embedding or a signed
/// Bell inequality. No sign restriction; entries must be finite.
class BellFunctional : public Tensor4 {
 public:
  BellFunctional() = default;
  BellFunctional(Dims dims, std::vector<double> data);

  BellFunctional scaled(double c) const;
  BellFunctional negated() const { return scaled(-1.0); }
  bool operator==(const BellFunctional&) const = default;
};

/// Element of l_inf(l1) (x) l_inf(l1): conditional distributions and
/// the signed tensors that appear inside gamma2 witnesses.
///
/// The tags are derived from the data on construction: `nonneg` when every
/// entry is >= -1e-12, `normalized` when each (x, y) slice sums to one
/// within 1e-10.
class BehaviorTensor : public Tensor4 {
 public:
  BehaviorTensor() = default;
  BehaviorTensor(Dims dims, std::vector<double> data);

  bool nonneg() const { return nonneg_; }
  bool normalized() const { return normalized_; }
  bool operator==(const BehaviorTensor&) const = default;

 private:
  bool nonneg_ = false;
  bool normalized_ = false;
};

/// Cooperative two-prover game (pi, V).
class Game {
 public:
  struct Options {
    /// Rescale pi to unit mass instead of rejecting a non-normalized input.
    bool renormalize = false;
  };

  Game() = default;
  /// `pi` is row-major [x][y]; `v` uses the tensor flattening [x][a][y][b].
  Game(Dims dims, std::vector<double> pi, std::vector<std::uint8_t> v);
  Game(Dims dims, std::vector<double> pi, std::vector<std::uint8_t> v,
       Options options);

  const Dims& dims() const { return dims_; }
  double pi(int x, int y) const { return pi_[static_cast<std::size_t>(x) * dims_.ny + y]; }
  /// Predicate V(a, b, x, y).
  int v(int x, int y, int a, int b) const { return v_[dims_.index(x, a, y, b)]; }
  std::span<const double> pi_data() const { return pi_; }
  std::span<const std::uint8_t> v_data() const { return v_; }

  /// True when na = nb = 2 and V only depends on a xor b.
  bool is_xor() const;

  bool operator==(const Game&) const = default;

 private:
  Dims dims_;
  std::vector<double> pi_;
  std::vector<std::uint8_t> v_;
};

enum class Side { kAlice, kBob };
/// Primal marginals live in l_inf(l1), dual ones in l1(l_inf).
enum class Space { kPrimal, kDual };

/// One party's tensor factor: P_A, P_B (primal) or G_A, G_B (dual).
class MarginalTensor {
 public:
  MarginalTensor(Side side, Space space, int n_questions, int n_answers,
                 std::vector<double> entries);

  Side side() const { return side_; }
  Space space() const { return space_; }
  int n_questions() const { return nq_; }
  int n_answers() const { return nans_; }
  double operator()(int q, int ans) const {
    return entries_[static_cast<std::size_t>(q) * nans_ + ans];
  }
  std::span<const double> entries() const { return entries_; }

 private:
  Side side_;
  Space space_;
  int nq_;
  int nans_;
  std::vector<double> entries_;
};

// --- norms and pairings -----------------------------------------------------

/// <G, P> = sum over all cells of g * p.
double pairing(const BellFunctional& g, const BehaviorTensor& p);

/// max_q sum_ans |m|; requires a primal marginal.
double infty1_norm(const MarginalTensor& m);
/// sum_q max_ans |m|; requires a dual marginal.
double one_infty_norm(const MarginalTensor& m);
/// max_(x,y) sum_(a,b) |p|.
double infty1_norm_joint(const BehaviorTensor& p);

/// Local tensor product of two marginals of the same side and space; the
/// first factor's indices are outermost.
MarginalTensor kron(const MarginalTensor& m1, const MarginalTensor& m2);

/// G_A (x) G_B for dual marginals of sides A and B.
BellFunctional outer_functional(const MarginalTensor& ga, const MarginalTensor& gb);
/// P_A (x) P_B for primal marginals of sides A and B.
BehaviorTensor outer_behavior(const MarginalTensor& pa, const MarginalTensor& pb);

// --- builders ---------------------------------------------------------------

/// Embedding g[x, a, y, b] = pi(x, y) * V(a, b, x, y).
BellFunctional game_to_functional(const Game& game);

/// Deterministic product behavior p[x, sa(x), y, sb(y)] = 1.
BehaviorTensor strategy_to_behavior(std::span<const int> sa, std::span<const int> sb,
                                    const Dims& dims);

/// Game with one question and one answer per side that is always won.
Game trivial_game();
/// Uniform questions, win iff a xor b = x and y.
Game chsh_game();
/// +1 where a xor b = x and y, -1 otherwise.
BellFunctional chsh_bell();
/// CHSH in correlation form: na = nb = 1, entries (-1)^(x and y).
BellFunctional chsh_correlation();
/// XOR game: win iff a xor b = f(x, y). `pi` and `f` are row-major nx * ny.
Game xor_game(int nx, int ny, std::span<const double> pi, std::span<const int> f);
/// Random positive pi (normalized) and predicate cells set with probability
/// `density`.
Game random_game(std::uint64_t seed, const Dims& dims, double density = 0.5);
/// Entries uniform in [-scale, scale].
BellFunctional random_bell(std::uint64_t seed, const Dims& dims, double scale = 1.0);

// --- parallel composition ---------------------------------------------------

BellFunctional compose(const BellFunctional& g1, const BellFunctional& g2,
                       std::size_t cap = kDefaultComposeCap);
BehaviorTensor compose(const BehaviorTensor& p1, const BehaviorTensor& p2,
                       std::size_t cap = kDefaultComposeCap);
/// Both rounds are sampled independently and must both be won.
Game compose(const Game& g1, const Game& g2, std::size_t cap = kDefaultComposeCap);

/// Left-associated fold of compose; power(g, 1) == g.
BellFunctional power(const BellFunctional& g, int n, std::size_t cap = kDefaultComposeCap);
Game power(const Game& g, int n, std::size_t cap = kDefaultComposeCap);

}  // namespace tnorm
