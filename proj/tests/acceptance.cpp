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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tnorm/exact.hpp"
#include "tnorm/game.hpp"
#include "tnorm/gamma2.hpp"
#include "tnorm/quantum.hpp"
#include "tnorm/rng.hpp"
#include "tnorm/rounding.hpp"

using namespace tnorm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

using Clock = std::chrono::steady_clock;

// Health of every SDP solved for criteria 2 to 7.
struct SolveLog {
  int solves = 0;
  double worst_gap = 0.0;
  double worst_kkt = 0.0;
  int gamma2_solves = 0;
  double worst_witness = 0.0;

  void record(double gap, const KktResiduals& k) {
    ++solves;
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max({worst_kkt, k.primal, k.dual, k.complementarity});
  }
  Gamma2StarResult star(const BellFunctional& g) {
    Gamma2StarResult r = gamma2_star(g);
    record(r.gap, r.kkt);
    return r;
  }
  Gamma2Result gamma(const BehaviorTensor& p) {
    Gamma2Result r = gamma2(p);
    record(r.gap, r.kkt);
    ++gamma2_solves;
    worst_witness = std::max(worst_witness, std::abs(r.witness_opnorm_product - r.value));
    return r;
  }
};

SolveLog g_log;
int g_failures = 0;

void report(int id, bool pass, double ms, const std::string& detail) {
  std::printf("criterion %2d: %s  %s  (%.1f ms)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), ms);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Runs body, which fills `detail` and returns pass; an exception is a failure.
void criterion(int id, const std::function<bool(std::string&)>& body) {
  const auto t0 = Clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(id, pass, std::chrono::duration<double, std::milli>(Clock::now() - t0).count(), detail);
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MatrixXd unit_columns(Rng& rng, int dim, int n, bool shrink) {
  MatrixXd m(dim, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < dim; ++i) m(i, j) = rng.normal();
    m.col(j) *= (shrink ? rng.uniform(0.3, 1.0) : 1.0) / m.col(j).norm();
  }
  return m;
}

MarginalTensor dyadic_marginal(Rng& rng, Side side, Space space) {
  const int nq = 1 + static_cast<int>(rng.below(3)), na = 1 + static_cast<int>(rng.below(3));
  std::vector<double> e(static_cast<std::size_t>(nq) * na);
  for (auto& v : e) v = static_cast<double>(static_cast<int>(rng.below(65)) - 32) / 16.0;
  return MarginalTensor(side, space, nq, na, std::move(e));
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  const BellFunctional chsh = game_to_functional(chsh_game());

  criterion(1, [&](std::string& d) {
    const auto t0 = Clock::now();
    const double omega = classical_value(chsh_game()).value;
    const double bc = bell_classical_value(chsh_bell()).value;
    const double ms = elapsed_ms(t0);
    d = fmt("classical CHSH %.17g (want 0.75), B_C %.17g (want 2), %.3f ms (< 10)", omega, bc, ms);
    return omega == 0.75 && bc == 2.0 && ms < 10.0;
  });

  criterion(2, [&](std::string& d) {
    const auto t0 = Clock::now();
    const double v = g_log.star(chsh).value;
    SeesawOptions o;
    o.dim = 2;
    o.restarts = 5;
    o.seed = 1;
    const double lb = seesaw_lower_bound(chsh_game(), o).value;
    const double ms = elapsed_ms(t0);
    d = fmt("gamma2* %.9f in [0.853543, 0.853563], see-saw %.9f", v, lb) +
        fmt(", |diff| %.2e <= 1e-3, %.0f ms (< 5000)", std::abs(v - lb), ms);
    return v >= 0.853543 && v <= 0.853563 && std::abs(v - lb) <= 1e-3 && lb <= v + 1e-7 &&
           ms < 5000.0;
  });

  criterion(3, [&](std::string& d) {
    const auto t0 = Clock::now();
    const BellFunctional sq = compose(chsh, chsh);
    const int dim = sq.dims().alice_size() + sq.dims().bob_size();
    const double base = g_log.star(chsh).value;
    const double rep = g_log.star(sq).value;
    const double diff = std::abs(rep - base * base);
    const double ms = elapsed_ms(t0);
    d = fmt("|gamma2*(G o G) - gamma2*(G)^2| = %.2e <= 1e-4, SDP side %.0f, %.0f ms (< 60000)",
            diff, dim, ms);
    return diff <= 1e-4 && dim == 32 && ms < 60000.0;
  });

  criterion(4, [&](std::string& d) {
    const auto t0 = Clock::now();
    int ok = 0;
    double worst = -1e9;
    for (std::uint64_t s = 0; s < 20; ++s) {
      Rng rng(mix_seed(400, s));
      const auto pick = [&]() {
        return Dims{2 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2)),
                    1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2))};
      };
      const Game g1 = random_game(mix_seed(401, s), pick());
      const Game g2 = random_game(mix_seed(402, s), pick());
      const double lhs = g_log.star(game_to_functional(compose(g1, g2))).value;
      const double rhs =
          g_log.star(game_to_functional(g1)).value * g_log.star(game_to_functional(g2)).value;
      const double slack = lhs - rhs - 1e-5 * (1.0 + rhs);
      worst = std::max(worst, slack);
      if (slack <= 0.0) ++ok;
    }
    const double ms = elapsed_ms(t0);
    d = fmt("%.0f/20 pairs satisfy lhs <= rhs + 1e-5 (1 + rhs), worst excess %.2e, %.0f ms", ok,
            worst, ms);
    return ok == 20 && ms < 300000.0;
  });

  criterion(5, [&](std::string& d) {
    const auto t0 = Clock::now();
    const double kk = krivine_constant();
    int ok = 0;
    double max_ratio = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const BellFunctional g = random_bell(mix_seed(500, s), Dims{3, 3, 2, 2});
      const double eps = injective_norm(g).value;
      const double star = g_log.star(g).value;
      max_ratio = std::max(max_ratio, star / eps);
      if (star <= kk * 2.0 * eps + 1e-6 && eps <= star + 1e-6) ++ok;
    }
    const double ms = elapsed_ms(t0);
    d = fmt("%.0f/50 satisfy eps <= gamma2* <= 2K eps, max ratio %.4f (2K = %.4f)", ok, max_ratio,
            2 * kk) +
        fmt(", %.0f ms", ms);
    return ok == 50 && ms < 300000.0;
  });

  criterion(6, [&](std::string& d) {
    const auto t0 = Clock::now();
    int ok = 0;
    double worst_g = 0.0, worst_p = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      Rng rng(mix_seed(600, s));
      const Dims dims{1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)),
                      2 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2))};
      const int local = 2 + static_cast<int>(rng.below(3));
      const QuantumStrategy q = random_strategy(mix_seed(601, s), dims, local);
      const double g = g_log.gamma(behavior_of(q)).value;
      const auto [a, b] = strategy_vector_system(q);
      const double prod = opnorm_2_to_inf1(b).value * opnorm_1inf_to_2(a).value;
      worst_g = std::max(worst_g, std::abs(g - 1.0));
      worst_p = std::max(worst_p, std::abs(prod - 1.0));
      if (std::abs(g - 1.0) <= 1e-5 && std::abs(prod - 1.0) <= 1e-8) ++ok;
    }
    const double ms = elapsed_ms(t0);
    d = fmt("%.0f/20 strategies, max |gamma2 - 1| %.2e, max |opnorm product - 1| %.2e", ok,
            worst_g, worst_p) +
        fmt(", %.0f ms", ms);
    return ok == 20 && ms < 180000.0;
  });

  criterion(7, [&](std::string& d) {
    const auto t0 = Clock::now();
    int ok = 0;
    double worst_fit = 0.0, worst_reentry = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      Rng rng(mix_seed(700, t));
      const int nx = 2 + static_cast<int>(rng.below(5)), ny = 2 + static_cast<int>(rng.below(5));
      const int r = 1 + static_cast<int>(rng.below(6));
      const MatrixXd u = unit_columns(rng, r, nx, t % 2 == 0);
      const MatrixXd v = unit_columns(rng, r, ny, t % 3 == 0);
      const MatrixXd c = u.transpose() * v;
      std::vector<double> data(static_cast<std::size_t>(nx) * ny);
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) data[static_cast<std::size_t>(x) * ny + y] = c(x, y);
      const BehaviorTensor corr(Dims{nx, ny, 1, 1}, data);

      // Forward: a gamma2 witness becomes observables on a maximally
      // entangled state.
      const Gamma2Result g = g_log.gamma(corr);
      const auto [wa, wb] = witness_vectors(g.witness);
      std::vector<VectorXd> ms, ns;
      for (int x = 0; x < nx; ++x) {
        VectorXd m = wa.vec(x, 0);
        if (m.norm() > 1.0) m /= m.norm();
        ms.push_back(m);
      }
      for (int y = 0; y < ny; ++y) {
        VectorXd n = wb.vec(y, 0);
        if (n.norm() > 1.0) n /= n.norm();
        ns.push_back(n);
      }
      const TsirelsonStrategy strat = tsirelson_strategy(ms, ns);
      const MatrixXd got = strat.correlations();
      const double fit = (got - c).cwiseAbs().maxCoeff();

      // Reverse: the realized correlations have gamma2 at most one.
      std::vector<double> back(data.size());
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) back[static_cast<std::size_t>(x) * ny + y] = got(x, y);
      const double reentry = g_log.gamma(BehaviorTensor(Dims{nx, ny, 1, 1}, back)).value;

      worst_fit = std::max(worst_fit, fit);
      worst_reentry = std::max(worst_reentry, reentry);
      if (g.value <= 1.0 + 1e-6 && fit <= 1e-6 && reentry <= 1.0 + 1e-6) ++ok;
    }
    const double ms = elapsed_ms(t0);
    d = fmt("%.0f/20 round trips, max entry error %.2e, max re-entered gamma2 %.9f", ok,
            worst_fit, worst_reentry) +
        fmt(", %.0f ms (< 30000)", ms);
    return ok == trials && ms < 30000.0;
  });

  criterion(8, [&](std::string& d) {
    const auto t0 = Clock::now();
    Rng rng(800);
    const MatrixXd u = unit_columns(rng, 3, 4, false), v = unit_columns(rng, 3, 4, false);
    const MatrixXd gab = u.transpose() * v;
    const CovarianceModel cov = krivine_covariance(u.transpose() * u, gab, v.transpose() * v);
    const IdentityReport id = grothendieck_identity_check(gab, sample_signs(cov, 1000000, 801));

    const BellFunctional corr = chsh_correlation();
    const Gamma2StarResult star = gamma2_star(corr);
    const auto [wa, wb] = witness_vectors(star.witness);
    const RoundingCertificate cert = round_bell(corr, wa, wb, 1000000, 802);
    const double target = 2.0 * std::sqrt(2.0) / krivine_constant() - 0.05;
    const double ms = elapsed_ms(t0);
    d = fmt("identity max z %.2f <= 4 at 1e6 samples, certificate mean %.4f >= %.4f", id.max_z,
            cert.mean, target) +
        fmt(", best %.6f <= 2, %.0f ms (< 60000)", cert.value, ms);
    return id.within(4.0) && cert.mean >= target && cert.mean <= 2.0 + 1e-9 &&
           cert.value <= 2.0 + 1e-9 && cert.feasible_pair && ms < 60000.0;
  });

  criterion(9, [&](std::string& d) {
    Rng rng(900);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto rnd = [&]() {
        MatrixXd m(1 + rng.below(5), 1 + rng.below(5));
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
        return m;
      };
      const MatrixXd a = rnd(), b = rnd();
      const double rhs = spectral_norm(a) * spectral_norm(b);
      worst = std::max(worst, std::abs(spectral_norm(kron_matrix(a, b)) - rhs) / std::max(1.0, rhs));
    }
    d = fmt("%.0f solves: max gap %.2e <= 1e-7, max KKT residual %.2e <= 1e-6", g_log.solves,
            g_log.worst_gap, g_log.worst_kkt) +
        fmt(", spectral multiplicativity error %.2e <= 1e-10", worst);
    return g_log.solves > 0 && g_log.worst_gap <= 1e-7 && g_log.worst_kkt <= 1e-6 &&
           worst <= 1e-10;
  });

  criterion(10, [&](std::string& d) {
    Rng rng(1000);
    int mult = 0;
    for (int t = 0; t < 100; ++t) {
      const auto p1 = dyadic_marginal(rng, Side::kAlice, Space::kPrimal);
      const auto p2 = dyadic_marginal(rng, Side::kAlice, Space::kPrimal);
      const auto g1 = dyadic_marginal(rng, Side::kBob, Space::kDual);
      const auto g2 = dyadic_marginal(rng, Side::kBob, Space::kDual);
      if (infty1_norm(kron(p1, p2)) == infty1_norm(p1) * infty1_norm(p2) &&
          one_infty_norm(kron(g1, g2)) == one_infty_norm(g1) * one_infty_norm(g2))
        ++mult;
    }
    int sym = 0;
    for (int t = 0; t < 100; ++t) {
      VectorSystem vs;
      vs.side = t % 2 ? Side::kAlice : Side::kBob;
      vs.n_questions = 1 + static_cast<int>(rng.below(3));
      vs.n_answers = 1 + static_cast<int>(rng.below(3));
      vs.vectors.resize(1 + static_cast<Eigen::Index>(rng.below(4)), vs.n_questions * vs.n_answers);
      for (Eigen::Index i = 0; i < vs.vectors.size(); ++i) vs.vectors.data()[i] = rng.normal();
      if (opnorm_1inf_to_2(vs).value == opnorm_2_to_inf1(transposed(vs)).value &&
          opnorm_2_to_inf1(vs).value == opnorm_1inf_to_2(transposed(vs)).value)
        ++sym;
    }
    d = fmt("kron multiplicativity %.0f/100 exact, transpose symmetry %.0f/100 exact", mult, sym) +
        fmt(", witness opnorm product within %.2e of gamma2 over %.0f solves (<= 1e-5)",
            g_log.worst_witness, g_log.gamma2_solves);
    return mult == 100 && sym == 100 && g_log.gamma2_solves > 0 && g_log.worst_witness <= 1e-5;
  });

  std::printf("acceptance: %d failing criteria, %.1f s total\n", g_failures,
              elapsed_ms(suite_start) / 1000.0);
  return g_failures == 0 ? 0 : 1;
}
