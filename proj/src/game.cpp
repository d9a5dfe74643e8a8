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

#include "tnorm/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tnorm/error.hpp"
#include "tnorm/rng.hpp"

namespace tnorm {

namespace {

constexpr double kPiTolerance = 1e-12;
constexpr double kNonnegTolerance = 1e-12;
constexpr double kNormalizedTolerance = 1e-10;

void require_finite(std::span<const double> data, const char* what) {
  for (double v : data) {
    if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

void check_compose_cap(const Dims& d, std::size_t cap) {
  // Guard against overflow before multiplying extents.
  const double entries = static_cast<double>(d.nx) * d.na * d.ny * d.nb;
  if (entries > static_cast<double>(cap)) {
    throw CapExceeded("composed tensor has " + std::to_string(static_cast<long double>(entries)) +
                      " entries, cap is " + std::to_string(cap));
  }
}

template <typename T>
std::vector<double> compose_data(const T& t1, const T& t2, const Dims& out) {
  const Dims& d1 = t1.dims();
  const Dims& d2 = t2.dims();
  std::vector<double> data(out.size());
  for (int x1 = 0; x1 < d1.nx; ++x1)
    for (int a1 = 0; a1 < d1.na; ++a1)
      for (int y1 = 0; y1 < d1.ny; ++y1)
        for (int b1 = 0; b1 < d1.nb; ++b1) {
          const double c1 = t1(x1, a1, y1, b1);
          for (int x2 = 0; x2 < d2.nx; ++x2)
            for (int a2 = 0; a2 < d2.na; ++a2)
              for (int y2 = 0; y2 < d2.ny; ++y2)
                for (int b2 = 0; b2 < d2.nb; ++b2) {
                  data[out.index(x1 * d2.nx + x2, a1 * d2.na + a2, y1 * d2.ny + y2,
                                 b1 * d2.nb + b2)] = c1 * t2(x2, a2, y2, b2);
                }
        }
  return data;
}

}  // namespace

void Dims::validate() const {
  if (nx <= 0 || ny <= 0 || na <= 0 || nb <= 0) {
    throw InvalidInput("dimensions must be positive, got " + to_string());
  }
}

std::string Dims::to_string() const {
  std::ostringstream os;
  os << nx << "," << ny << "," << na << "," << nb;
  return os.str();
}

Dims compose_dims(const Dims& d1, const Dims& d2) {
  return Dims{d1.nx * d2.nx, d1.ny * d2.ny, d1.na * d2.na, d1.nb * d2.nb};
}

Tensor4::Tensor4(Dims dims, std::vector<double> data) : dims_(dims), data_(std::move(data)) {
  dims_.validate();
  if (data_.size() != dims_.size()) {
    throw DimensionMismatch("tensor data has " + std::to_string(data_.size()) +
                            " entries, dims " + dims_.to_string() + " need " +
                            std::to_string(dims_.size()));
  }
}

Tensor4::Tensor4(Dims dims) : Tensor4(dims, std::vector<double>(dims.size(), 0.0)) {}

BellFunctional::BellFunctional(Dims dims, std::vector<double> data)
    : Tensor4(dims, std::move(data)) {
  require_finite(data_, "bell functional");
}

BellFunctional BellFunctional::scaled(double c) const {
  std::vector<double> d(data_);
  for (double& v : d) v *= c;
  return BellFunctional(dims_, std::move(d));
}

BehaviorTensor::BehaviorTensor(Dims dims, std::vector<double> data)
    : Tensor4(dims, std::move(data)) {
  require_finite(data_, "behavior");
  nonneg_ = std::all_of(data_.begin(), data_.end(),
                        [](double v) { return v >= -kNonnegTolerance; });
  normalized_ = true;
  for (int x = 0; x < dims_.nx && normalized_; ++x)
    for (int y = 0; y < dims_.ny && normalized_; ++y) {
      double s = 0.0;
      for (int a = 0; a < dims_.na; ++a)
        for (int b = 0; b < dims_.nb; ++b) s += (*this)(x, a, y, b);
      if (std::abs(s - 1.0) > kNormalizedTolerance) normalized_ = false;
    }
}

Game::Game(Dims dims, std::vector<double> pi, std::vector<std::uint8_t> v)
    : Game(dims, std::move(pi), std::move(v), Options{}) {}

Game::Game(Dims dims, std::vector<double> pi, std::vector<std::uint8_t> v, Options options)
    : dims_(dims), pi_(std::move(pi)), v_(std::move(v)) {
  dims_.validate();
  if (pi_.size() != static_cast<std::size_t>(dims_.nx) * dims_.ny) {
    throw DimensionMismatch("pi must be nx * ny");
  }
  if (v_.size() != dims_.size()) throw DimensionMismatch("v must be nx * na * ny * nb");
  require_finite(pi_, "pi");
  double total = 0.0;
  for (double p : pi_) {
    if (p < 0.0) throw InvalidInput("pi entries must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kPiTolerance) {
    if (!options.renormalize || total <= 0.0) {
      throw InvalidInput("distribution not normalized (sum " + std::to_string(total) + ")");
    }
    for (double& p : pi_) p /= total;
  }
  for (std::uint8_t e : v_) {
    if (e > 1) throw InvalidInput("predicate must be 0/1");
  }
}

bool Game::is_xor() const {
  if (dims_.na != 2 || dims_.nb != 2) return false;
  for (int x = 0; x < dims_.nx; ++x)
    for (int y = 0; y < dims_.ny; ++y) {
      if (v(x, y, 0, 0) != v(x, y, 1, 1) || v(x, y, 0, 1) != v(x, y, 1, 0)) return false;
    }
  return true;
}

MarginalTensor::MarginalTensor(Side side, Space space, int n_questions, int n_answers,
                               std::vector<double> entries)
    : side_(side), space_(space), nq_(n_questions), nans_(n_answers), entries_(std::move(entries)) {
  if (nq_ <= 0 || nans_ <= 0) throw InvalidInput("marginal extents must be positive");
  if (entries_.size() != static_cast<std::size_t>(nq_) * nans_) {
    throw DimensionMismatch("marginal entries must be n_questions * n_answers");
  }
  require_finite(entries_, "marginal");
}

double pairing(const BellFunctional& g, const BehaviorTensor& p) {
  if (!(g.dims() == p.dims())) {
    throw DimensionMismatch("pairing: dims " + g.dims().to_string() + " vs " +
                            p.dims().to_string());
  }
  double s = 0.0;
  const auto gd = g.data();
  const auto pd = p.data();
  for (std::size_t i = 0; i < gd.size(); ++i) s += gd[i] * pd[i];
  return s;
}

double infty1_norm(const MarginalTensor& m) {
  if (m.space() != Space::kPrimal) throw InvalidInput("infty1_norm needs a primal marginal");
  double best = 0.0;
  for (int q = 0; q < m.n_questions(); ++q) {
    double row = 0.0;
    for (int a = 0; a < m.n_answers(); ++a) row += std::abs(m(q, a));
    best = std::max(best, row);
  }
  return best;
}

double one_infty_norm(const MarginalTensor& m) {
  if (m.space() != Space::kDual) throw InvalidInput("one_infty_norm needs a dual marginal");
  double total = 0.0;
  for (int q = 0; q < m.n_questions(); ++q) {
    double row = 0.0;
    for (int a = 0; a < m.n_answers(); ++a) row = std::max(row, std::abs(m(q, a)));
    total += row;
  }
  return total;
}

double infty1_norm_joint(const BehaviorTensor& p) {
  const Dims& d = p.dims();
  double best = 0.0;
  for (int x = 0; x < d.nx; ++x)
    for (int y = 0; y < d.ny; ++y) {
      double s = 0.0;
      for (int a = 0; a < d.na; ++a)
        for (int b = 0; b < d.nb; ++b) s += std::abs(p(x, a, y, b));
      best = std::max(best, s);
    }
  return best;
}

MarginalTensor kron(const MarginalTensor& m1, const MarginalTensor& m2) {
  if (m1.side() != m2.side() || m1.space() != m2.space()) {
    throw InvalidInput("kron: marginals must share side and space");
  }
  const int nq = m1.n_questions() * m2.n_questions();
  const int na = m1.n_answers() * m2.n_answers();
  std::vector<double> e(static_cast<std::size_t>(nq) * na);
  for (int q1 = 0; q1 < m1.n_questions(); ++q1)
    for (int q2 = 0; q2 < m2.n_questions(); ++q2)
      for (int a1 = 0; a1 < m1.n_answers(); ++a1)
        for (int a2 = 0; a2 < m2.n_answers(); ++a2) {
          const int q = q1 * m2.n_questions() + q2;
          const int a = a1 * m2.n_answers() + a2;
          e[static_cast<std::size_t>(q) * na + a] = m1(q1, a1) * m2(q2, a2);
        }
  return MarginalTensor(m1.side(), m1.space(), nq, na, std::move(e));
}

namespace {

std::vector<double> outer_data(const MarginalTensor& ma, const MarginalTensor& mb, Dims& dims) {
  if (ma.side() != Side::kAlice || mb.side() != Side::kBob) {
    throw InvalidInput("outer product needs an Alice and a Bob marginal");
  }
  dims = Dims{ma.n_questions(), mb.n_questions(), ma.n_answers(), mb.n_answers()};
  std::vector<double> data(dims.size());
  for (int x = 0; x < dims.nx; ++x)
    for (int a = 0; a < dims.na; ++a)
      for (int y = 0; y < dims.ny; ++y)
        for (int b = 0; b < dims.nb; ++b) data[dims.index(x, a, y, b)] = ma(x, a) * mb(y, b);
  return data;
}

}  // namespace

BellFunctional outer_functional(const MarginalTensor& ga, const MarginalTensor& gb) {
  if (ga.space() != Space::kDual || gb.space() != Space::kDual) {
    throw InvalidInput("outer_functional needs dual marginals");
  }
  Dims dims;
  auto data = outer_data(ga, gb, dims);
  return BellFunctional(dims, std::move(data));
}

BehaviorTensor outer_behavior(const MarginalTensor& pa, const MarginalTensor& pb) {
  if (pa.space() != Space::kPrimal || pb.space() != Space::kPrimal) {
    throw InvalidInput("outer_behavior needs primal marginals");
  }
  Dims dims;
  auto data = outer_data(pa, pb, dims);
  return BehaviorTensor(dims, std::move(data));
}

BellFunctional game_to_functional(const Game& game) {
  const Dims& d = game.dims();
  std::vector<double> data(d.size());
  for (int x = 0; x < d.nx; ++x)
    for (int a = 0; a < d.na; ++a)
      for (int y = 0; y < d.ny; ++y)
        for (int b = 0; b < d.nb; ++b)
          data[d.index(x, a, y, b)] = game.pi(x, y) * game.v(x, y, a, b);
  return BellFunctional(d, std::move(data));
}

BehaviorTensor strategy_to_behavior(std::span<const int> sa, std::span<const int> sb,
                                    const Dims& dims) {
  dims.validate();
  if (sa.size() != static_cast<std::size_t>(dims.nx) ||
      sb.size() != static_cast<std::size_t>(dims.ny)) {
    throw DimensionMismatch("strategy maps must cover every question");
  }
  for (int a : sa)
    if (a < 0 || a >= dims.na) throw InvalidInput("Alice answer out of range");
  for (int b : sb)
    if (b < 0 || b >= dims.nb) throw InvalidInput("Bob answer out of range");
  std::vector<double> data(dims.size(), 0.0);
  for (int x = 0; x < dims.nx; ++x)
    for (int y = 0; y < dims.ny; ++y) data[dims.index(x, sa[x], y, sb[y])] = 1.0;
  return BehaviorTensor(dims, std::move(data));
}

Game trivial_game() { return Game(Dims{1, 1, 1, 1}, {1.0}, {1}); }

Game chsh_game() {
  const Dims d{2, 2, 2, 2};
  std::vector<std::uint8_t> v(d.size());
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) v[d.index(x, a, y, b)] = ((a ^ b) == (x & y)) ? 1 : 0;
  return Game(d, {0.25, 0.25, 0.25, 0.25}, std::move(v));
}

BellFunctional chsh_bell() {
  const Dims d{2, 2, 2, 2};
  std::vector<double> g(d.size());
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) g[d.index(x, a, y, b)] = ((a ^ b) == (x & y)) ? 1.0 : -1.0;
  return BellFunctional(d, std::move(g));
}

BellFunctional chsh_correlation() {
  const Dims d{2, 2, 1, 1};
  std::vector<double> g(d.size());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) g[d.index(x, 0, y, 0)] = (x & y) ? -1.0 : 1.0;
  return BellFunctional(d, std::move(g));
}

Game xor_game(int nx, int ny, std::span<const double> pi, std::span<const int> f) {
  const Dims d{nx, ny, 2, 2};
  d.validate();
  if (pi.size() != static_cast<std::size_t>(nx) * ny || f.size() != pi.size()) {
    throw DimensionMismatch("xor_game: pi and f must be nx * ny");
  }
  std::vector<std::uint8_t> v(d.size());
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const int target = f[static_cast<std::size_t>(x) * ny + y];
      if (target != 0 && target != 1) throw InvalidInput("xor_game: f must be 0/1");
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) v[d.index(x, a, y, b)] = ((a ^ b) == target) ? 1 : 0;
    }
  return Game(d, std::vector<double>(pi.begin(), pi.end()), std::move(v));
}

Game random_game(std::uint64_t seed, const Dims& dims, double density) {
  dims.validate();
  if (!(density >= 0.0 && density <= 1.0)) throw InvalidInput("density must be in [0, 1]");
  Rng rng(seed);
  std::vector<double> pi(static_cast<std::size_t>(dims.nx) * dims.ny);
  double total = 0.0;
  for (double& p : pi) {
    p = 0.05 + rng.uniform();
    total += p;
  }
  for (double& p : pi) p /= total;
  std::vector<std::uint8_t> v(dims.size());
  for (auto& e : v) e = rng.uniform() < density ? 1 : 0;
  return Game(dims, std::move(pi), std::move(v), Game::Options{.renormalize = true});
}

BellFunctional random_bell(std::uint64_t seed, const Dims& dims, double scale) {
  dims.validate();
  Rng rng(seed);
  std::vector<double> g(dims.size());
  for (double& e : g) e = rng.uniform(-scale, scale);
  return BellFunctional(dims, std::move(g));
}

BellFunctional compose(const BellFunctional& g1, const BellFunctional& g2, std::size_t cap) {
  const Dims out = compose_dims(g1.dims(), g2.dims());
  check_compose_cap(out, cap);
  return BellFunctional(out, compose_data(g1, g2, out));
}

BehaviorTensor compose(const BehaviorTensor& p1, const BehaviorTensor& p2, std::size_t cap) {
  const Dims out = compose_dims(p1.dims(), p2.dims());
  check_compose_cap(out, cap);
  return BehaviorTensor(out, compose_data(p1, p2, out));
}

Game compose(const Game& g1, const Game& g2, std::size_t cap) {
  const Dims& d1 = g1.dims();
  const Dims& d2 = g2.dims();
  const Dims out = compose_dims(d1, d2);
  check_compose_cap(out, cap);
  std::vector<double> pi(static_cast<std::size_t>(out.nx) * out.ny);
  for (int x1 = 0; x1 < d1.nx; ++x1)
    for (int x2 = 0; x2 < d2.nx; ++x2)
      for (int y1 = 0; y1 < d1.ny; ++y1)
        for (int y2 = 0; y2 < d2.ny; ++y2)
          pi[static_cast<std::size_t>(x1 * d2.nx + x2) * out.ny + (y1 * d2.ny + y2)] =
              g1.pi(x1, y1) * g2.pi(x2, y2);
  std::vector<std::uint8_t> v(out.size());
  for (int x1 = 0; x1 < d1.nx; ++x1)
    for (int a1 = 0; a1 < d1.na; ++a1)
      for (int y1 = 0; y1 < d1.ny; ++y1)
        for (int b1 = 0; b1 < d1.nb; ++b1) {
          const int w1 = g1.v(x1, y1, a1, b1);
          for (int x2 = 0; x2 < d2.nx; ++x2)
            for (int a2 = 0; a2 < d2.na; ++a2)
              for (int y2 = 0; y2 < d2.ny; ++y2)
                for (int b2 = 0; b2 < d2.nb; ++b2)
                  v[out.index(x1 * d2.nx + x2, a1 * d2.na + a2, y1 * d2.ny + y2,
                              b1 * d2.nb + b2)] =
                      static_cast<std::uint8_t>(w1 & g2.v(x2, y2, a2, b2));
        }
  // Products of normalized distributions can drift by an ulp or two.
  return Game(out, std::move(pi), std::move(v), Game::Options{.renormalize = true});
}

BellFunctional power(const BellFunctional& g, int n, std::size_t cap) {
  if (n < 1) throw InvalidInput("power needs n >= 1");
  BellFunctional acc = g;
  for (int i = 1; i < n; ++i) acc = compose(acc, g, cap);
  return acc;
}

Game power(const Game& g, int n, std::size_t cap) {
  if (n < 1) throw InvalidInput("power needs n >= 1");
  Game acc = g;
  for (int i = 1; i < n; ++i) acc = compose(acc, g, cap);
  return acc;
}

}  // namespace tnorm
