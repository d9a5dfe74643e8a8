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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tnorm/error.hpp"
#include "tnorm/exact.hpp"
#include "tnorm/gamma2.hpp"
#include "tnorm/rng.hpp"

using namespace tnorm;
using Eigen::MatrixXd;

namespace {

const double kTsirelsonGame = std::cos(M_PI / 8) * std::cos(M_PI / 8);

BehaviorTensor pr_box() {
  std::vector<double> p(16, 0.0);
  const Dims d{2, 2, 2, 2};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) p[d.index(x, a, y, b)] = 0.5;
  return BehaviorTensor(d, p);
}

VectorSystem random_system(Rng& rng, Side side) {
  VectorSystem vs;
  vs.side = side;
  vs.n_questions = 1 + static_cast<int>(rng.below(3));
  vs.n_answers = 1 + static_cast<int>(rng.below(3));
  vs.vectors.resize(1 + static_cast<int>(rng.below(4)), vs.n_questions * vs.n_answers);
  for (Eigen::Index i = 0; i < vs.vectors.size(); ++i) vs.vectors.data()[i] = rng.normal();
  return vs;
}

}  // namespace

TEST_CASE("Krivine constant") {
  CHECK(krivine_constant() == doctest::Approx(M_PI / (2 * std::log(1 + std::sqrt(2.0)))));
  CHECK(krivine_constant() == doctest::Approx(1.7822139781));
}

TEST_CASE("CHSH gamma2* values") {
  const Gamma2StarResult g = gamma2_star(game_to_functional(chsh_game()));
  CHECK(g.value == doctest::Approx(kTsirelsonGame).epsilon(1e-7));
  CHECK(g.gap <= 1e-7);
  CHECK(gamma2_star(chsh_bell()).value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-7));
  CHECK(gamma2_star(chsh_correlation()).value ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-7));
  // The optimizer pairs with g to the value.
  CHECK(pairing(game_to_functional(chsh_game()), g.optimizer) ==
        doctest::Approx(g.value).epsilon(1e-6));
}

TEST_CASE("gamma2 of known behaviors") {
  const Dims d{2, 2, 2, 2};
  const Gamma2Result det =
      gamma2(strategy_to_behavior(std::vector<int>{0, 1}, std::vector<int>{1, 1}, d));
  CHECK(det.value == doctest::Approx(1.0).epsilon(1e-6));
  const Gamma2Result pr = gamma2(pr_box());
  CHECK(pr.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(pr.witness_opnorm_product == doctest::Approx(pr.value).epsilon(1e-5));
  CHECK(det.witness_opnorm_product == doctest::Approx(det.value).epsilon(1e-5));
}

TEST_CASE("gamma2* is a norm") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const BellFunctional a = random_bell(s, Dims{2, 2, 2, 2});
    const BellFunctional b = random_bell(s + 50, Dims{2, 2, 2, 2});
    const double va = gamma2_star(a).value, vb = gamma2_star(b).value;
    CHECK(gamma2_star(a.scaled(-2.5)).value == doctest::Approx(2.5 * va).epsilon(1e-6));
    std::vector<double> sum(a.data().begin(), a.data().end());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b.data()[i];
    CHECK(gamma2_star(BellFunctional(a.dims(), sum)).value <= va + vb + 1e-6);
  }
}

TEST_CASE("injective norm sits below gamma2* and within the Grothendieck bound") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const BellFunctional g = random_bell(s, Dims{3, 3, 2, 2});
    const GrothendieckReport r = verify_grothendieck(g);
    CHECK(r.epsilon == doctest::Approx(testing::brute_injective(g)).epsilon(1e-12));
    CHECK(r.sandwich);
    CHECK(r.pass);
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio >= 1.0 - 1e-6);
    CHECK(r.bound == doctest::Approx(2 * krivine_constant()));
  }
  const GrothendieckReport zero =
      verify_grothendieck(BellFunctional(Dims{2, 2, 2, 2}, std::vector<double>(16, 0.0)));
  CHECK_FALSE(zero.ratio.has_value());
  CHECK(zero.gamma2_star == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("opnorms are exchanged by transposition") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const VectorSystem vs = random_system(rng, Side::kAlice);
    CHECK(opnorm_1inf_to_2(vs).value == opnorm_2_to_inf1(transposed(vs)).value);
    CHECK(transposed(transposed(vs)).side == vs.side);
  }
}

TEST_CASE("opnorm brute force on a small system") {
  VectorSystem vs;
  vs.n_questions = 1;
  vs.n_answers = 2;
  vs.vectors.resize(2, 2);
  vs.vectors << 1, 1, 0, 1;
  // max(||(1,0)+(1,1)||, ||(1,0)-(1,1)||) = sqrt 5
  const OpnormResult r = opnorm_1inf_to_2(vs);
  CHECK(r.value == doctest::Approx(std::sqrt(5.0)));
  CHECK(r.signs == std::vector<int>{1, 1});
}

TEST_CASE("witness vectors reproduce the Gram matrix") {
  const Gamma2StarResult g = gamma2_star(chsh_bell());
  const auto [a, b] = witness_vectors(g.witness);
  MatrixXd v(a.dim(), a.vectors.cols() + b.vectors.cols());
  v << a.vectors, b.vectors;
  CHECK((v.transpose() * v - g.witness.z).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(a.n_questions == 2);
  CHECK(b.side == Side::kBob);
  GramWitness bad = g.witness;
  bad.z(0, 0) = -5.0;
  CHECK_THROWS_AS(witness_vectors(bad), InvalidInput);
}

TEST_CASE("decompositions bound gamma2*") {
  const Decomposition d = chsh_bell_decomposition();
  CHECK(d.reconstruct() == chsh_bell());
  CHECK(gamma2_star_decomposition_bound(d) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(gamma2_star(chsh_bell()).value <= gamma2_star_decomposition_bound(d) + 1e-6);

  const Dims dims{2, 2, 2, 2};
  const MarginalTensor pa(Side::kAlice, Space::kPrimal, 2, 2, {1, 0, 0, 1});
  const MarginalTensor pb(Side::kBob, Space::kPrimal, 2, 2, {0, 1, 1, 0});
  const PrimalDecomposition pd{{pa}, {pb}};
  CHECK(pd.reconstruct() == outer_behavior(pa, pb));
  CHECK(gamma2(pd.reconstruct()).value <= w2_bound(pd) + 1e-6);
  CHECK(w2({pa}) == doctest::Approx(1.0));
  (void)dims;
}

TEST_CASE("XOR games: gamma2* matches the bias formula") {
  const XorValue v = xor_entangled_value(chsh_game());
  CHECK(v.consistent);
  CHECK(v.value == doctest::Approx(kTsirelsonGame).epsilon(1e-7));
  CHECK(v.bias == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-6));
  for (std::uint64_t s = 0; s < 5; ++s) {
    Rng rng(s);
    std::vector<double> pi(9);
    std::vector<int> f(9);
    double tot = 0.0;
    for (auto& p : pi) tot += (p = 0.1 + rng.uniform());
    for (auto& p : pi) p /= tot;
    for (auto& x : f) x = static_cast<int>(rng.below(2));
    const XorValue r = xor_entangled_value(xor_game(3, 3, pi, f));
    CHECK(r.consistent);
    CHECK(r.value >= classical_value(xor_game(3, 3, pi, f)).value - 1e-7);
  }
  CHECK_THROWS_AS(xor_entangled_value(random_game(1, Dims{2, 2, 3, 2})), InvalidInput);
}

TEST_CASE("direct products") {
  const DirectProductReport r = verify_direct_product(chsh_game(), chsh_game());
  CHECK(r.both_xor);
  CHECK(r.pass);
  CHECK(r.difference <= 1e-4);
  CHECK(r.rhs == doctest::Approx(kTsirelsonGame * kTsirelsonGame).epsilon(1e-6));
  for (std::uint64_t s = 0; s < 3; ++s) {
    const DirectProductReport q = verify_direct_product(random_bell(s, Dims{2, 2, 2, 2}),
                                                        random_bell(s + 9, Dims{2, 1, 2, 2}));
    CHECK(q.pass);
  }
}

TEST_CASE("SDP builders and failures") {
  const SdpProblem p = gamma2_star_problem(chsh_bell());
  CHECK(p.dim == 8);
  const SdpProblem q = gamma2_problem(pr_box());
  CHECK(q.dim == 9);
  Gamma2Options o;
  o.max_answers = 1;
  CHECK_THROWS_AS(gamma2_star(chsh_bell(), o), CapExceeded);
  o = Gamma2Options{};
  o.sdp.max_iterations = 2;
  CHECK_THROWS_AS(gamma2_star(random_bell(3, Dims{3, 3, 2, 2}), o), SolverFailure);
}
