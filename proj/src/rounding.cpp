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

#include "tnorm/rounding.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "tnorm/error.hpp"
#include "tnorm/rng.hpp"

namespace tnorm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double krivine_c() {
  static const double c = std::log(1.0 + std::sqrt(2.0));
  return c;
}

namespace {

constexpr double kPsdTol = 1e-9;

double min_eigenvalue(const MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// F with F F' = sigma after clipping eigenvalues in [-1e-9, 0) to zero.
MatrixXd factor(const CovarianceModel& cov) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (cov.sigma + cov.sigma.transpose()));
  if (es.info() != Eigen::Success) throw Error("covariance factorization failed");
  if (es.eigenvalues()(0) < -kPsdTol) {
    throw InvalidInput("covariance is indefinite: eigenvalue " + std::to_string(es.eigenvalues()(0)));
  }
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void sample_chunk(const MatrixXd& f, std::uint64_t seed, std::size_t chunk, std::size_t begin,
                  std::size_t end, SignMatrix& out) {
  Rng rng(mix_seed(seed, chunk));
  const auto n = f.rows();
  VectorXd z(n), v(n);
  for (std::size_t i = begin; i < end; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) z(k) = rng.normal();
    v.noalias() = f * z;
    // sign(0) = +1
    for (Eigen::Index k = 0; k < n; ++k) out(i, k) = v(k) >= 0.0 ? 1 : -1;
  }
}

SignSampleBatch empty_batch(const CovarianceModel& cov, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sample count must be at least 1");
  SignSampleBatch b;
  b.count = count;
  b.seed = seed;
  b.n_alice = cov.n_alice;
  b.signs.resize(static_cast<Eigen::Index>(count), cov.size());
  return b;
}

}  // namespace

CovarianceModel krivine_covariance(const MatrixXd& gram_aa, const MatrixXd& gram_ab,
                                   const MatrixXd& gram_bb) {
  const auto na = gram_aa.rows();
  const auto nb = gram_bb.rows();
  if (gram_aa.cols() != na || gram_bb.cols() != nb || gram_ab.rows() != na || gram_ab.cols() != nb) {
    throw DimensionMismatch("krivine_covariance: inconsistent Gram block sizes");
  }
  MatrixXd joint(na + nb, na + nb);
  joint << gram_aa, gram_ab, gram_ab.transpose(), gram_bb;
  if (!joint.allFinite()) throw InvalidInput("Gram blocks must be finite");
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    if (std::abs(joint(i, i) - 1.0) > kPsdTol) throw InvalidInput("Gram blocks need a unit diagonal");
  }
  const double jmin = min_eigenvalue(joint);
  if (jmin < -kPsdTol) {
    throw InvalidInput("Gram blocks are not PSD: eigenvalue " + std::to_string(jmin));
  }
  const double c = krivine_c();
  CovarianceModel cov;
  cov.n_alice = static_cast<int>(na);
  cov.n_bob = static_cast<int>(nb);
  cov.c = c;
  cov.sigma.resize(na + nb, na + nb);
  cov.sigma.topLeftCorner(na, na) = (c * gram_aa).array().sinh().matrix();
  cov.sigma.topRightCorner(na, nb) = (c * gram_ab).array().sin().matrix();
  cov.sigma.bottomLeftCorner(nb, na) = cov.sigma.topRightCorner(na, nb).transpose();
  cov.sigma.bottomRightCorner(nb, nb) = (c * gram_bb).array().sinh().matrix();
  cov.min_eigenvalue = min_eigenvalue(cov.sigma);
  if (cov.min_eigenvalue < -kPsdTol) {
    throw InvalidInput("transformed covariance is indefinite: eigenvalue " +
                       std::to_string(cov.min_eigenvalue));
  }
  return cov;
}

SignSampleBatch sample_signs(const CovarianceModel& cov, std::size_t count, std::uint64_t seed) {
  SignSampleBatch b = empty_batch(cov, count, seed);
  const MatrixXd f = factor(cov);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(chunks); ++k) {
    const std::size_t begin = static_cast<std::size_t>(k) * kSampleChunk;
    sample_chunk(f, seed, static_cast<std::size_t>(k), begin, std::min(count, begin + kSampleChunk),
                 b.signs);
  }
  return b;
}

namespace serial {

SignSampleBatch sample_signs(const CovarianceModel& cov, std::size_t count, std::uint64_t seed) {
  SignSampleBatch b = empty_batch(cov, count, seed);
  const MatrixXd f = factor(cov);
  for (std::size_t k = 0, begin = 0; begin < count; ++k, begin += kSampleChunk) {
    sample_chunk(f, seed, k, begin, std::min(count, begin + kSampleChunk), b.signs);
  }
  return b;
}

}  // namespace serial

bool IdentityReport::within(double k) const {
  for (Eigen::Index i = 0; i < empirical.rows(); ++i)
    for (Eigen::Index j = 0; j < empirical.cols(); ++j) {
      const double dev = std::abs(empirical(i, j) - target(i, j));
      if (stderr_(i, j) > 0.0 ? dev > k * stderr_(i, j) : dev > 1e-12) return false;
    }
  return true;
}

IdentityReport grothendieck_identity_check(const MatrixXd& gram_ab, const SignSampleBatch& batch) {
  const int na = batch.n_alice;
  const int nb = static_cast<int>(batch.signs.cols()) - na;
  if (gram_ab.rows() != na || gram_ab.cols() != nb) {
    throw DimensionMismatch("identity check: Gram block does not match the batch labels");
  }
  const double c = krivine_c();
  const double k = krivine_constant();
  IdentityReport r;
  r.empirical = MatrixXd::Zero(na, nb);
  r.target = gram_ab / k;
  r.analytic = (c * gram_ab).array().sin().asin().matrix() * (2.0 / M_PI);
  r.stderr_.resize(na, nb);
  // Integer accumulation keeps the means exact.
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      long long s = 0;
      for (std::size_t n = 0; n < batch.count; ++n) {
        s += batch.signs(static_cast<Eigen::Index>(n), i) *
             batch.signs(static_cast<Eigen::Index>(n), na + j);
      }
      const double mean = static_cast<double>(s) / static_cast<double>(batch.count);
      r.empirical(i, j) = mean;
      r.stderr_(i, j) = std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(batch.count));
      const double dev = std::abs(mean - r.target(i, j));
      r.max_abs_deviation = std::max(r.max_abs_deviation, dev);
      if (r.stderr_(i, j) > 0.0) r.max_z = std::max(r.max_z, dev / r.stderr_(i, j));
    }
  return r;
}

RoundingCertificate round_bell(const BellFunctional& g, const VectorSystem& wa,
                               const VectorSystem& wb, std::size_t samples, std::uint64_t seed) {
  wa.validate();
  wb.validate();
  const Dims& d = g.dims();
  if (wa.n_questions != d.nx || wa.n_answers != d.na || wb.n_questions != d.ny ||
      wb.n_answers != d.nb || wa.dim() != wb.dim()) {
    throw DimensionMismatch("round_bell: vector systems do not match the functional");
  }
  if (samples < 1) throw InvalidInput("round_bell needs at least one sample");

  // Per-question rescaling so sum_a ||m_{x,a}||^2 <= 1.
  auto rescale = [](const VectorSystem& vs) {
    MatrixXd m = vs.vectors;
    for (int q = 0; q < vs.n_questions; ++q) {
      const double s = m.middleCols(q * vs.n_answers, vs.n_answers).squaredNorm();
      if (s > 1.0) m.middleCols(q * vs.n_answers, vs.n_answers) /= std::sqrt(s);
    }
    return m;
  };
  const MatrixXd ma = rescale(wa);
  const MatrixXd mb = rescale(wb);
  const VectorXd norm_a = ma.colwise().norm().transpose();
  const VectorXd norm_b = mb.colwise().norm().transpose();

  // Only nonzero vectors enter the covariance; the rest keep sign +1 and
  // weight zero.
  std::vector<int> ia, ib;
  for (int i = 0; i < norm_a.size(); ++i)
    if (norm_a(i) > 1e-12) ia.push_back(i);
  for (int j = 0; j < norm_b.size(); ++j)
    if (norm_b(j) > 1e-12) ib.push_back(j);

  RoundingCertificate cert;
  cert.samples = samples;
  cert.seed = seed;
  const double scale = std::sqrt(static_cast<double>(d.na) * d.nb);
  cert.alice.assign(d.alice_size(), 0.0);
  cert.bob.assign(d.bob_size(), 0.0);
  if (ia.empty() || ib.empty()) return cert;

  MatrixXd ua(wa.dim(), ia.size()), ub(wb.dim(), ib.size());
  for (std::size_t k = 0; k < ia.size(); ++k) ua.col(k) = ma.col(ia[k]) / norm_a(ia[k]);
  for (std::size_t k = 0; k < ib.size(); ++k) ub.col(k) = mb.col(ib[k]) / norm_b(ib[k]);
  MatrixXd gaa = ua.transpose() * ua, gbb = ub.transpose() * ub;
  gaa.diagonal().setOnes();
  gbb.diagonal().setOnes();
  const MatrixXd gab = ua.transpose() * ub;
  const CovarianceModel cov = krivine_covariance(gaa, gab, gbb);
  const SignSampleBatch batch = sample_signs(cov, samples, seed);
  cert.identity = grothendieck_identity_check(gab, batch);

  const double cap_a = std::sqrt(static_cast<double>(d.na)) * (1.0 + 1e-12);
  const double cap_b = std::sqrt(static_cast<double>(d.nb)) * (1.0 + 1e-12);
  std::vector<double> s(d.alice_size()), t(d.bob_size());
  double sum = 0.0, sum_sq = 0.0;
  double best = -1.0;
  for (std::size_t n = 0; n < samples; ++n) {
    std::fill(s.begin(), s.end(), 0.0);
    std::fill(t.begin(), t.end(), 0.0);
    for (std::size_t k = 0; k < ia.size(); ++k)
      s[ia[k]] = norm_a(ia[k]) * batch.signs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t k = 0; k < ib.size(); ++k)
      t[ib[k]] = norm_b(ib[k]) *
                 batch.signs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(ia.size() + k));
    for (int q = 0; q < d.nx; ++q) {
      double row = 0.0;
      for (int a = 0; a < d.na; ++a) row += std::abs(s[q * d.na + a]);
      if (row > cap_a) cert.feasible_pair = false;
    }
    for (int q = 0; q < d.ny; ++q) {
      double row = 0.0;
      for (int b = 0; b < d.nb; ++b) row += std::abs(t[q * d.nb + b]);
      if (row > cap_b) cert.feasible_pair = false;
    }
    double v = 0.0;
    for (int x = 0; x < d.nx; ++x)
      for (int a = 0; a < d.na; ++a) {
        const double sa = s[x * d.na + a];
        if (sa == 0.0) continue;
        for (int y = 0; y < d.ny; ++y)
          for (int b = 0; b < d.nb; ++b) v += g(x, a, y, b) * sa * t[y * d.nb + b];
      }
    v /= scale;
    sum += v;
    sum_sq += v * v;
    if (std::abs(v) > best) {
      best = std::abs(v);
      cert.best_sample = n;
      cert.alice = s;
      cert.bob = t;
    }
  }
  const double cnt = static_cast<double>(samples);
  cert.value = std::max(0.0, best);
  cert.mean = sum / cnt;
  cert.stderr_ = samples > 1 ? std::sqrt(std::max(0.0, sum_sq / cnt - cert.mean * cert.mean) / (cnt - 1.0)) : 0.0;
  return cert;
}

}  // namespace tnorm
