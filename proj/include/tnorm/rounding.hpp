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

// Gaussian sign rounding with the Krivine transform. For unit vectors the
// joint signs of Gaussians with covariance blocks sinh(c G_AA), sin(c G_AB),
// sinh(c G_BB), c = ln(1 + sqrt 2), satisfy E[s_i t_j] = G_AB(i, j) / K with
// K = pi / (2 c).

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tnorm/game.hpp"
#include "tnorm/gamma2.hpp"

namespace tnorm {

/// ln(1 + sqrt 2).
double krivine_c();

struct CovarianceModel {
  /// Alice labels come first, then Bob labels.
  int n_alice = 0;
  int n_bob = 0;
  Eigen::MatrixXd sigma;
  double c = 0.0;
  /// Smallest eigenvalue of sigma before clipping.
  double min_eigenvalue = 0.0;

  int size() const { return n_alice + n_bob; }
};

/// Inputs are Gram matrices of unit vectors; the joint block matrix must be
/// PSD within 1e-9 with unit diagonal. Throws InvalidInput otherwise, or when
/// the transformed matrix has an eigenvalue below -1e-9.
CovarianceModel krivine_covariance(const Eigen::MatrixXd& gram_aa, const Eigen::MatrixXd& gram_ab,
                                   const Eigen::MatrixXd& gram_bb);

using SignMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SignSampleBatch {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  int n_alice = 0;
  /// count x labels, entries exactly +-1.
  SignMatrix signs;
};

/// Samples are drawn in fixed chunks of kSampleChunk, chunk k seeded with
/// mix_seed(seed, k), so results do not depend on the thread count.
inline constexpr std::size_t kSampleChunk = 4096;

SignSampleBatch sample_signs(const CovarianceModel& cov, std::size_t count, std::uint64_t seed);

struct IdentityReport {
  /// Empirical means of s_i t_j, n_alice x n_bob.
  Eigen::MatrixXd empirical;
  /// gram_ab / K.
  Eigen::MatrixXd target;
  /// (2 / pi) asin(sin(c gram_ab)), the closed form of the target.
  Eigen::MatrixXd analytic;
  /// sqrt((1 - mean^2) / count) per entry.
  Eigen::MatrixXd stderr_;
  double max_abs_deviation = 0.0;
  /// max |empirical - target| / stderr over entries with positive stderr.
  double max_z = 0.0;

  /// Every entry within k standard errors (entries with zero spread must
  /// match exactly).
  bool within(double k) const;
};

IdentityReport grothendieck_identity_check(const Eigen::MatrixXd& gram_ab,
                                           const SignSampleBatch& batch);

struct RoundingCertificate {
  /// Best |<g, s (x) t>| / sqrt(na nb) over samples; a lower bound on eps(g).
  double value = 0.0;
  /// Mean and standard error of the signed normalized value.
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  /// Every sample satisfied the l_inf(l1) bounds sqrt(na), sqrt(nb).
  bool feasible_pair = true;
  std::size_t best_sample = 0;
  /// Rounded tensors of the best sample, indexed q * n_answers + ans.
  std::vector<double> alice;
  std::vector<double> bob;
  /// Sign-product statistics of the nonzero normalized witness vectors.
  IdentityReport identity;
};

/// Rounds a gamma2* witness (vector systems from witness_vectors) into a
/// product of l_inf(l1) tensors. Per-question squared norms are rescaled to
/// at most one first.
RoundingCertificate round_bell(const BellFunctional& g, const VectorSystem& wa,
                               const VectorSystem& wb, std::size_t samples, std::uint64_t seed);

namespace serial {

/// Single-threaded reference; bit-identical to tnorm::sample_signs.
SignSampleBatch sample_signs(const CovarianceModel& cov, std::size_t count, std::uint64_t seed);

}  // namespace serial

}  // namespace tnorm
