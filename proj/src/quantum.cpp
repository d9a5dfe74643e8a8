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

#include "tnorm/quantum.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "tnorm/error.hpp"
#include "tnorm/rng.hpp"

namespace tnorm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

constexpr double kMeasurementTol = 1e-10;
constexpr int kMaxClifford = 16;
constexpr int kMaxSeesawDim = 8;

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// <Psi| M (x) N |Psi> = tr(Phi^H M Phi N^T)
cd expectation(const CMatrix& phi, const CMatrix& m, const CMatrix& n) {
  return (phi.adjoint() * m * phi * n.transpose()).trace();
}

CMatrix random_unitary(Rng& rng, int d) {
  CMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = cd(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  // Fix column phases by R's diagonal so the distribution does not depend on
  // the QR sign convention.
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

// With `balanced`, columns go round-robin from a random first outcome, so
// ranks differ by at most one; otherwise each column picks an outcome.
ProjectiveMeasurement random_measurement(Rng& rng, int d, int n_outcomes, bool balanced = false) {
  const CMatrix u = random_unitary(rng, d);
  ProjectiveMeasurement m;
  m.dim = d;
  m.outcomes.assign(n_outcomes, CMatrix::Zero(d, d));
  const int first = balanced ? static_cast<int>(rng.below(n_outcomes)) : 0;
  for (int k = 0; k < d; ++k) {
    const int a = balanced ? (first + k) % n_outcomes : static_cast<int>(rng.below(n_outcomes));
    m.outcomes[a] += u.col(k) * u.col(k).adjoint();
  }
  return m;
}

}  // namespace

// --- types -------------------------------------------------------------------

void PureState::validate() const {
  if (da <= 0 || db <= 0) throw InvalidInput("state dimensions must be positive");
  if (amplitudes.size() != static_cast<Eigen::Index>(da) * db) {
    throw DimensionMismatch("state needs da * db amplitudes");
  }
  if (!amplitudes.allFinite()) throw InvalidInput("state has non-finite amplitudes");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12) throw InvalidInput("state is not normalized");
}

CMatrix PureState::coefficients() const {
  CMatrix phi(da, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) phi(i, j) = amplitudes(i * db + j);
  return phi;
}

PureState PureState::maximally_entangled(int d) {
  if (d <= 0) throw InvalidInput("dimension must be positive");
  PureState s{d, d, CVector::Zero(static_cast<Eigen::Index>(d) * d)};
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) s.amplitudes(i * d + i) = w;
  return s;
}

PureState PureState::product(const CVector& a, const CVector& b) {
  PureState s{static_cast<int>(a.size()), static_cast<int>(b.size()),
              CVector(a.size() * b.size())};
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) s.amplitudes(i * b.size() + j) = a(i) * b(j);
  s.validate();
  return s;
}

void ProjectiveMeasurement::validate() const {
  if (outcomes.empty()) throw InvalidInput("measurement needs at least one outcome");
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < outcomes.size(); ++a) {
    const CMatrix& p = outcomes[a];
    if (p.rows() != dim || p.cols() != dim) throw DimensionMismatch("outcome has the wrong size");
    if (max_abs(p - p.adjoint()) > kMeasurementTol) throw InvalidInput("outcome is not Hermitian");
    if (max_abs(p * p - p) > kMeasurementTol) throw InvalidInput("outcome is not idempotent");
    for (std::size_t a2 = a + 1; a2 < outcomes.size(); ++a2) {
      if (max_abs(p * outcomes[a2]) > kMeasurementTol) {
        throw InvalidInput("outcomes are not mutually orthogonal");
      }
    }
    sum += p;
  }
  if (max_abs(sum - CMatrix::Identity(dim, dim)) > kMeasurementTol) {
    throw InvalidInput("outcomes do not sum to the identity");
  }
}

ProjectiveMeasurement ProjectiveMeasurement::computational(int dim) {
  ProjectiveMeasurement m;
  m.dim = dim;
  for (int k = 0; k < dim; ++k) {
    CMatrix p = CMatrix::Zero(dim, dim);
    p(k, k) = 1.0;
    m.outcomes.push_back(p);
  }
  return m;
}

ProjectiveMeasurement ProjectiveMeasurement::from_observable(const CMatrix& a) {
  const auto d = static_cast<int>(a.rows());
  const CMatrix id = CMatrix::Identity(d, d);
  ProjectiveMeasurement m;
  m.dim = d;
  m.outcomes = {0.5 * (id + a), 0.5 * (id - a)};
  return m;
}

void QuantumStrategy::validate() const {
  state.validate();
  if (alice.empty() || bob.empty()) throw InvalidInput("strategy needs measurements on both sides");
  for (const auto& m : alice) {
    if (m.dim != state.da) throw DimensionMismatch("Alice measurement dimension differs from da");
    if (m.n_outcomes() != alice[0].n_outcomes()) throw InvalidInput("Alice answer counts differ");
    m.validate();
  }
  for (const auto& m : bob) {
    if (m.dim != state.db) throw DimensionMismatch("Bob measurement dimension differs from db");
    if (m.n_outcomes() != bob[0].n_outcomes()) throw InvalidInput("Bob answer counts differ");
    m.validate();
  }
}

Dims QuantumStrategy::dims() const {
  return Dims{static_cast<int>(alice.size()), static_cast<int>(bob.size()),
              alice.empty() ? 0 : alice[0].n_outcomes(), bob.empty() ? 0 : bob[0].n_outcomes()};
}

void Observable::validate(bool pm1) const {
  if (matrix.rows() != dim || matrix.cols() != dim) throw DimensionMismatch("observable size");
  if (max_abs(matrix - matrix.adjoint()) > 1e-10) throw InvalidInput("observable is not Hermitian");
  if (pm1 && max_abs(matrix * matrix - CMatrix::Identity(dim, dim)) > 1e-8) {
    throw InvalidInput("observable does not square to the identity");
  }
}

// --- behaviors and vectors ------------------------------------------------------

BehaviorTensor behavior_of(const QuantumStrategy& s) {
  s.validate();
  const Dims d = s.dims();
  const CMatrix phi = s.state.coefficients();
  std::vector<double> p(d.size());
  for (int x = 0; x < d.nx; ++x)
    for (int a = 0; a < d.na; ++a) {
      const CMatrix left = phi.adjoint() * s.alice[x].outcomes[a] * phi;
      for (int y = 0; y < d.ny; ++y)
        for (int b = 0; b < d.nb; ++b) {
          const cd v = (left * s.bob[y].outcomes[b].transpose()).trace();
          if (std::abs(v.imag()) > 1e-10) throw Error("behavior entry has an imaginary part");
          p[d.index(x, a, y, b)] = v.real();
        }
    }
  return BehaviorTensor(d, std::move(p));
}

std::pair<VectorSystem, VectorSystem> strategy_vector_system(const QuantumStrategy& s) {
  s.validate();
  const Dims d = s.dims();
  const CMatrix phi = s.state.coefficients();
  const int len = s.state.da * s.state.db;
  auto flatten = [&](const CMatrix& m) {
    CVector v(len);
    for (int i = 0; i < s.state.da; ++i)
      for (int j = 0; j < s.state.db; ++j) v(i * s.state.db + j) = m(i, j);
    return v;
  };
  VectorSystem va{Side::kAlice, d.nx, d.na, MatrixXd(2 * len, d.alice_size())};
  VectorSystem vb{Side::kBob, d.ny, d.nb, MatrixXd(2 * len, d.bob_size())};
  for (int x = 0; x < d.nx; ++x)
    for (int a = 0; a < d.na; ++a) {
      // (M (x) I) Psi reshapes to M Phi.
      const CVector m = flatten(s.alice[x].outcomes[a] * phi).conjugate();
      va.vectors.col(x * d.na + a) << m.real(), m.imag();
    }
  for (int y = 0; y < d.ny; ++y)
    for (int b = 0; b < d.nb; ++b) {
      // (I (x) N) Psi reshapes to Phi N^T.
      const CVector n = flatten(phi * s.bob[y].outcomes[b].transpose());
      vb.vectors.col(y * d.nb + b) << n.real(), -n.imag();
    }
  return {va, vb};
}

// --- observables -----------------------------------------------------------------

std::vector<Observable> clifford_generators(int n) {
  if (n < 1 || n > kMaxClifford) {
    throw CapExceeded("clifford_generators supports 1.." + std::to_string(kMaxClifford) +
                      " generators, got " + std::to_string(n));
  }
  const int qubits = (n + 1) / 2;
  CMatrix id = CMatrix::Identity(2, 2);
  CMatrix px(2, 2), py(2, 2), pz(2, 2);
  px << 0, 1, 1, 0;
  py << 0, cd(0, -1), cd(0, 1), 0;
  pz << 1, 0, 0, -1;
  std::vector<Observable> out;
  for (int k = 0; k < n; ++k) {
    const int site = k / 2;
    CMatrix m = CMatrix::Identity(1, 1);
    for (int q = 0; q < qubits; ++q) {
      const CMatrix& f = q < site ? pz : (q == site ? (k % 2 == 0 ? px : py) : id);
      m = kron(m, f);
    }
    out.push_back({static_cast<int>(m.rows()), m});
  }
  return out;
}

MatrixXd TsirelsonStrategy::correlations() const {
  MatrixXd c(alice.size(), bob.size());
  for (std::size_t x = 0; x < alice.size(); ++x)
    for (std::size_t y = 0; y < bob.size(); ++y) c(x, y) = correlation(state, alice[x], bob[y]);
  return c;
}

TsirelsonStrategy tsirelson_strategy(const std::vector<VectorXd>& ms,
                                     const std::vector<VectorXd>& ns) {
  if (ms.empty() || ns.empty()) throw InvalidInput("tsirelson_strategy needs vectors on both sides");
  const auto n = ms[0].size();
  for (const auto& v : ms)
    if (v.size() != n) throw DimensionMismatch("vectors must share one length");
  for (const auto& v : ns)
    if (v.size() != n) throw DimensionMismatch("vectors must share one length");
  for (const auto* side : {&ms, &ns})
    for (const auto& v : *side)
      if (v.norm() > 1.0 + 1e-12) throw InvalidInput("vector norm exceeds 1");

  // Rewrite every vector in an orthonormal basis of their joint span, so the
  // generator count tracks the rank rather than the ambient length.
  MatrixXd stacked(n, static_cast<Eigen::Index>(ms.size() + ns.size()));
  for (std::size_t i = 0; i < ms.size(); ++i) stacked.col(i) = ms[i];
  for (std::size_t j = 0; j < ns.size(); ++j) stacked.col(ms.size() + j) = ns[j];
  const Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > 1e-12 * std::max(1.0, sv(0))) ++r;
  const MatrixXd coords = svd.matrixU().leftCols(r).transpose() * stacked;

  auto pad = [&](Eigen::Index col, int slot) {
    VectorXd out = VectorXd::Zero(r + 2);
    out.head(r) = coords.col(col);
    out(r + slot) = std::sqrt(std::max(0.0, 1.0 - out.head(r).squaredNorm()));
    return out;
  };
  const auto gens = clifford_generators(static_cast<int>(r) + 2);
  const int dim = gens[0].dim;
  TsirelsonStrategy t;
  t.state = PureState::maximally_entangled(dim);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const VectorXd v = pad(static_cast<Eigen::Index>(i), 0);
    CMatrix a = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < v.size(); ++i) a += v(i) * gens[i].matrix;
    t.alice.push_back({dim, a});
  }
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const VectorXd v = pad(static_cast<Eigen::Index>(ms.size() + j), 1);
    // Bob uses transposed generators: <Phi| A (x) B |Phi> = tr(A B^T) / dim.
    CMatrix b = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < v.size(); ++i) b += v(i) * gens[i].matrix.transpose();
    t.bob.push_back({dim, b});
  }
  return t;
}

double correlation(const PureState& state, const Observable& a, const Observable& b) {
  if (a.dim != state.da || b.dim != state.db) throw DimensionMismatch("observable dims differ from state");
  const cd v = expectation(state.coefficients(), a.matrix, b.matrix);
  if (std::abs(v.imag()) > 1e-10) throw Error("correlation has an imaginary part");
  return v.real();
}

// --- see-saw ---------------------------------------------------------------------

namespace {

struct Seesaw {
  const BellFunctional& g;
  Dims d;
  int dim;

  double value(const CMatrix& phi, const std::vector<std::vector<CMatrix>>& pa,
               const std::vector<std::vector<CMatrix>>& pb) const {
    double v = 0.0;
    for (int x = 0; x < d.nx; ++x)
      for (int a = 0; a < d.na; ++a) {
        const CMatrix left = phi.adjoint() * pa[x][a] * phi;
        for (int y = 0; y < d.ny; ++y)
          for (int b = 0; b < d.nb; ++b) {
            const double c = g(x, a, y, b);
            if (c != 0.0) v += c * (left * pb[y][b].transpose()).trace().real();
          }
      }
    return v;
  }

  void update_state(CMatrix& phi, const std::vector<std::vector<CMatrix>>& pa,
                    const std::vector<std::vector<CMatrix>>& pb) const {
    CMatrix bell = CMatrix::Zero(dim * dim, dim * dim);
    for (int x = 0; x < d.nx; ++x)
      for (int a = 0; a < d.na; ++a)
        for (int y = 0; y < d.ny; ++y)
          for (int b = 0; b < d.nb; ++b) {
            const double c = g(x, a, y, b);
            if (c != 0.0) bell += c * kron(pa[x][a], pb[y][b]);
          }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (bell + bell.adjoint()));
    const CVector top = es.eigenvectors().col(dim * dim - 1);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) phi(i, j) = top(i * dim + j);
  }

  // Re-splits outcome pairs of one question to maximize sum_a tr(P_a T_a).
  static void resplit(std::vector<CMatrix>& proj, const std::vector<CMatrix>& t) {
    const int n = static_cast<int>(proj.size());
    for (int a = 0; a < n; ++a)
      for (int a2 = a + 1; a2 < n; ++a2) {
        const CMatrix r = proj[a] + proj[a2];
        Eigen::SelfAdjointEigenSolver<CMatrix> er(0.5 * (r + r.adjoint()));
        std::vector<int> cols;
        for (int k = 0; k < r.rows(); ++k)
          if (er.eigenvalues()(k) > 0.5) cols.push_back(k);
        if (cols.empty()) continue;
        CMatrix u(r.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) u.col(k) = er.eigenvectors().col(cols[k]);
        const CMatrix h = u.adjoint() * (t[a] - t[a2]) * u;
        Eigen::SelfAdjointEigenSolver<CMatrix> eh(0.5 * (h + h.adjoint()));
        CMatrix pa = CMatrix::Zero(r.rows(), r.cols());
        for (Eigen::Index k = 0; k < h.rows(); ++k) {
          if (eh.eigenvalues()(k) > 0.0) {
            const CVector v = u * eh.eigenvectors().col(k);
            pa += v * v.adjoint();
          }
        }
        proj[a] = pa;
        proj[a2] = u * u.adjoint() - pa;
      }
  }

  void update_alice(const CMatrix& phi, std::vector<std::vector<CMatrix>>& pa,
                    const std::vector<std::vector<CMatrix>>& pb) const {
    for (int x = 0; x < d.nx; ++x) {
      std::vector<CMatrix> t(d.na, CMatrix::Zero(dim, dim));
      for (int a = 0; a < d.na; ++a)
        for (int y = 0; y < d.ny; ++y)
          for (int b = 0; b < d.nb; ++b) {
            const double c = g(x, a, y, b);
            if (c != 0.0) t[a] += c * (phi * pb[y][b].transpose() * phi.adjoint());
          }
      resplit(pa[x], t);
    }
  }

  void update_bob(const CMatrix& phi, const std::vector<std::vector<CMatrix>>& pa,
                  std::vector<std::vector<CMatrix>>& pb) const {
    for (int y = 0; y < d.ny; ++y) {
      std::vector<CMatrix> t(d.nb, CMatrix::Zero(dim, dim));
      for (int b = 0; b < d.nb; ++b)
        for (int x = 0; x < d.nx; ++x)
          for (int a = 0; a < d.na; ++a) {
            const double c = g(x, a, y, b);
            if (c != 0.0) t[b] += c * (phi.adjoint() * pa[x][a] * phi).transpose();
          }
      resplit(pb[y], t);
    }
  }
};

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  QuantumStrategy strategy;
  std::vector<double> trace;
};

RestartOutcome run_restart(const BellFunctional& g, const SeesawOptions& o, std::uint64_t seed) {
  const Dims& d = g.dims();
  Seesaw ss{g, d, o.dim};
  Rng rng(seed);
  std::vector<std::vector<CMatrix>> pa(d.nx), pb(d.ny);
  for (int x = 0; x < d.nx; ++x) pa[x] = random_measurement(rng, o.dim, d.na, true).outcomes;
  for (int y = 0; y < d.ny; ++y) pb[y] = random_measurement(rng, o.dim, d.nb, true).outcomes;
  CMatrix phi(o.dim, o.dim);
  RestartOutcome out;
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < o.iterations; ++it) {
    ss.update_state(phi, pa, pb);
    ss.update_alice(phi, pa, pb);
    ss.update_bob(phi, pa, pb);
    const double v = ss.value(phi, pa, pb);
    out.trace.push_back(v);
    if (v - prev <= 1e-13 * (1.0 + std::abs(v))) break;
    prev = v;
  }
  // Clean up rounding drift so the projectors validate.
  auto tidy = [](std::vector<CMatrix>& proj) {
    for (auto& p : proj) p = 0.5 * (p + p.adjoint());
  };
  QuantumStrategy s;
  s.state.da = s.state.db = o.dim;
  s.state.amplitudes = CVector(o.dim * o.dim);
  for (int i = 0; i < o.dim; ++i)
    for (int j = 0; j < o.dim; ++j) s.state.amplitudes(i * o.dim + j) = phi(i, j);
  s.state.amplitudes.normalize();
  for (auto& proj : pa) {
    tidy(proj);
    s.alice.push_back({o.dim, proj});
  }
  for (auto& proj : pb) {
    tidy(proj);
    s.bob.push_back({o.dim, proj});
  }
  out.value = pairing(g, behavior_of(s));
  out.strategy = std::move(s);
  return out;
}

}  // namespace

SeesawResult seesaw_lower_bound(const BellFunctional& g, const SeesawOptions& o) {
  if (o.dim < 1 || o.dim > kMaxSeesawDim) {
    throw CapExceeded("see-saw local dimension must lie in 1.." + std::to_string(kMaxSeesawDim));
  }
  if (o.restarts < 1 || o.iterations < 1) throw InvalidInput("see-saw needs restarts and iterations");
  std::vector<RestartOutcome> outs(o.restarts);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < o.restarts; ++r) {
    outs[r] = run_restart(g, o, mix_seed(o.seed, static_cast<std::uint64_t>(r)));
  }
  SeesawResult res;
  res.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < o.restarts; ++r) {
    res.restart_values.push_back(outs[r].value);
    if (outs[r].value > res.value) {
      res.value = outs[r].value;
      res.best_restart = r;
    }
  }
  res.strategy = std::move(outs[res.best_restart].strategy);
  res.trace = std::move(outs[res.best_restart].trace);
  return res;
}

SeesawResult seesaw_lower_bound(const Game& game, const SeesawOptions& o) {
  return seesaw_lower_bound(game_to_functional(game), o);
}

QuantumStrategy random_strategy(std::uint64_t seed, const Dims& dims, int local_dim) {
  dims.validate();
  if (local_dim < 1 || local_dim > 128) throw InvalidInput("local dimension out of range");
  Rng rng(seed);
  QuantumStrategy s;
  s.state.da = s.state.db = local_dim;
  s.state.amplitudes = CVector(local_dim * local_dim);
  for (Eigen::Index i = 0; i < s.state.amplitudes.size(); ++i) {
    s.state.amplitudes(i) = cd(rng.normal(), rng.normal());
  }
  s.state.amplitudes.normalize();
  for (int x = 0; x < dims.nx; ++x) s.alice.push_back(random_measurement(rng, local_dim, dims.na));
  for (int y = 0; y < dims.ny; ++y) s.bob.push_back(random_measurement(rng, local_dim, dims.nb));
  return s;
}

QuantumStrategy chsh_optimal_strategy() {
  CMatrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy s;
  s.state = PureState::maximally_entangled(2);
  s.alice = {ProjectiveMeasurement::from_observable(z), ProjectiveMeasurement::from_observable(x)};
  s.bob = {ProjectiveMeasurement::from_observable(r * (z + x)),
           ProjectiveMeasurement::from_observable(r * (z - x))};
  return s;
}

// --- JSON --------------------------------------------------------------------------

namespace {

using nlohmann::json;

json cjson(cd v) { return json::array({v.real(), v.imag()}); }

cd from_cjson(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput(path + ": complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cjson(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw InvalidInput(path + ": expected " + std::to_string(dim) + " rows");
  }
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::string pi = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != dim) {
      throw InvalidInput(pi + ": expected " + std::to_string(dim) + " entries");
    }
    for (int k = 0; k < dim; ++k) m(i, k) = from_cjson(j[i][k], pi + "[" + std::to_string(k) + "]");
  }
  return m;
}

json side_json(const std::vector<ProjectiveMeasurement>& ms) {
  json out = json::array();
  for (const auto& m : ms) {
    json outcomes = json::array();
    for (const auto& p : m.outcomes) outcomes.push_back(matrix_json(p));
    out.push_back(std::move(outcomes));
  }
  return out;
}

std::vector<ProjectiveMeasurement> side_from_json(const json& j, int dim, const std::string& path) {
  if (!j.is_array()) throw InvalidInput(path + ": must be an array of measurements");
  std::vector<ProjectiveMeasurement> out;
  for (std::size_t q = 0; q < j.size(); ++q) {
    const std::string pq = path + "[" + std::to_string(q) + "]";
    if (!j[q].is_array()) throw InvalidInput(pq + ": must be an array of outcomes");
    ProjectiveMeasurement m;
    m.dim = dim;
    for (std::size_t a = 0; a < j[q].size(); ++a) {
      m.outcomes.push_back(matrix_from_json(j[q][a], dim, pq + "[" + std::to_string(a) + "]"));
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::string strategy_to_json(const QuantumStrategy& s) {
  json j;
  j["kind"] = "strategy";
  j["da"] = s.state.da;
  j["db"] = s.state.db;
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.state.amplitudes.size(); ++i) amps.push_back(cjson(s.state.amplitudes(i)));
  j["state"] = std::move(amps);
  j["alice"] = side_json(s.alice);
  j["bob"] = side_json(s.bob);
  return j.dump() + "\n";
}

QuantumStrategy strategy_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error&) {
    throw InvalidInput("strategy: malformed JSON");
  }
  if (!j.is_object() || j.value("kind", "") != "strategy") throw InvalidInput("$.kind: expected strategy");
  QuantumStrategy s;
  if (!j.contains("da") || !j["da"].is_number_integer()) throw InvalidInput("$.da: missing");
  if (!j.contains("db") || !j["db"].is_number_integer()) throw InvalidInput("$.db: missing");
  s.state.da = j["da"].get<int>();
  s.state.db = j["db"].get<int>();
  if (s.state.da <= 0 || s.state.db <= 0 || s.state.da > 128 || s.state.db > 128) {
    throw InvalidInput("$.da: dimensions out of range");
  }
  const json& amps = j.at("state");
  if (!amps.is_array() || static_cast<int>(amps.size()) != s.state.da * s.state.db) {
    throw InvalidInput("$.state: expected da * db amplitudes");
  }
  s.state.amplitudes = CVector(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    s.state.amplitudes(i) = from_cjson(amps[i], "$.state[" + std::to_string(i) + "]");
  }
  s.alice = side_from_json(j.at("alice"), s.state.da, "$.alice");
  s.bob = side_from_json(j.at("bob"), s.state.db, "$.bob");
  s.validate();
  return s;
}

}  // namespace tnorm
