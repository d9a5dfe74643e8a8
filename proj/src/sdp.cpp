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

#include "tnorm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "tnorm/error.hpp"

namespace tnorm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// --- SparseSym ---------------------------------------------------------------

void SparseSym::add(int i, int j, double v) {
  if (i < 0 || j < 0) throw InvalidInput("sparse matrix index must be nonnegative");
  if (i > j) std::swap(i, j);
  entries_.push_back({i, j, v});
  dirty_ = true;
}

void SparseSym::add_pairing_term(int r, int c, double coef) {
  // <A, Z> counts an off-diagonal entry twice.
  add(r, c, r == c ? coef : 0.5 * coef);
}

const std::vector<SparseSym::Entry>& SparseSym::entries() const {
  if (dirty_) {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    for (const Entry& e : entries_) {
      if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });
    entries_ = std::move(merged);
    dirty_ = false;
  }
  return entries_;
}

int SparseSym::max_index() const {
  int m = -1;
  for (const Entry& e : entries()) m = std::max(m, e.col);
  return m;
}

double SparseSym::dot(const MatrixXd& z) const {
  double s = 0.0;
  for (const Entry& e : entries()) {
    s += e.row == e.col ? e.value * z(e.row, e.row) : e.value * (z(e.row, e.col) + z(e.col, e.row));
  }
  return s;
}

MatrixXd SparseSym::dense(int n) const {
  MatrixXd a = MatrixXd::Zero(n, n);
  for (const Entry& e : entries()) {
    a(e.row, e.col) += e.value;
    if (e.row != e.col) a(e.col, e.row) += e.value;
  }
  return a;
}

double SparseSym::frobenius_norm() const {
  double s = 0.0;
  for (const Entry& e : entries()) s += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
  return std::sqrt(s);
}

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kPrimalInfeasible:
      return "primal-infeasible";
    case SdpStatus::kDualInfeasible:
      return "dual-infeasible";
    case SdpStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

// --- solver ------------------------------------------------------------------

namespace {

// Problem in minimization form: min <C, X> + 0'x, A(X) + E x = b, X PSD,
// x >= 0, where E maps slack k into row n_eq + k.
struct Standard {
  int n = 0;
  int n_eq = 0;
  int n_ineq = 0;
  int m = 0;
  std::vector<const SparseSym*> rows;
  VectorXd b;
  MatrixXd c;
  double c_norm = 0.0;
  double b_norm = 0.0;
  double sign = 1.0;  // caller objective = sign * internal objective
};

VectorXd apply_a(const Standard& s, const MatrixXd& x) {
  VectorXd out(s.m);
  for (int i = 0; i < s.m; ++i) out(i) = s.rows[i]->dot(x);
  return out;
}

MatrixXd apply_at(const Standard& s, const VectorXd& y) {
  MatrixXd out = MatrixXd::Zero(s.n, s.n);
  for (int i = 0; i < s.m; ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& e : s.rows[i]->entries()) {
      out(e.row, e.col) += y(i) * e.value;
      if (e.row != e.col) out(e.col, e.row) += y(i) * e.value;
    }
  }
  return out;
}

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

double min_eig(const MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Largest alpha <= 1 with x + alpha dx PSD, given chol(x) = L L'.
double max_step_psd(const MatrixXd& l, const MatrixXd& dx) {
  if (l.rows() == 0) return 1.0;
  const auto tri = l.triangularView<Eigen::Lower>();
  MatrixXd t = tri.solve(dx);
  t = tri.solve(t.transpose()).transpose();
  const double lam = min_eig(t);
  return lam < 0.0 ? -1.0 / lam : std::numeric_limits<double>::infinity();
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

struct Iterate {
  MatrixXd x;
  VectorXd xl;
  VectorXd y;
  MatrixXd s;
  VectorXd sl;
};

struct Direction {
  MatrixXd dx;
  VectorXd dxl;
  VectorXd dy;
  MatrixXd ds;
  VectorXd dsl;
};

struct Scaling {
  MatrixXd g;      // W = G G'
  MatrixXd g_inv;  // G^{-1}
  MatrixXd w;
  VectorXd d;      // G^{-1} X G^{-T} = G' S G = diag(d)
  VectorXd wl;     // x / s for the slack block
};

bool nt_scaling(const Iterate& it, const MatrixXd& lx, const MatrixXd& ls, Scaling& sc) {
  const int n = static_cast<int>(it.x.rows());
  if (n > 0) {
    Eigen::JacobiSVD<MatrixXd> svd(ls.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd sv = svd.singularValues();
    if (sv.minCoeff() <= 0.0 || !sv.allFinite()) return false;
    const MatrixXd& v = svd.matrixV();
    const VectorXd inv_sqrt = sv.cwiseSqrt().cwiseInverse();
    sc.g = lx * v * inv_sqrt.asDiagonal();
    // G^{-1} = Sigma^{1/2} V' L^{-1}
    MatrixXd linv_t = lx.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));
    sc.g_inv = sv.cwiseSqrt().asDiagonal() * v.transpose() * linv_t;
    sc.w = sym(sc.g * sc.g.transpose());
    sc.d = sv;
  }
  sc.wl = it.xl.cwiseQuotient(it.sl);
  return true;
}

// Schur complement M_ij = <A_i, W A_j W> + slack contributions.
MatrixXd schur(const Standard& s, const Scaling& sc) {
  MatrixXd m = MatrixXd::Zero(s.m, s.m);
  MatrixXd bj(s.n, s.n);
  for (int j = 0; j < s.m; ++j) {
    bj.setZero();
    for (const auto& e : s.rows[j]->entries()) {
      if (e.row == e.col) {
        bj.noalias() += e.value * sc.w.col(e.row) * sc.w.row(e.row);
      } else {
        bj.noalias() += e.value * sc.w.col(e.row) * sc.w.row(e.col);
        bj.noalias() += e.value * sc.w.col(e.col) * sc.w.row(e.row);
      }
    }
    for (int i = j; i < s.m; ++i) {
      const double v = s.rows[i]->dot(bj);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  for (int k = 0; k < s.n_ineq; ++k) m(s.n_eq + k, s.n_eq + k) += sc.wl(k);
  return m;
}

struct Residuals {
  VectorXd rp;
  MatrixXd rd;
  VectorXd rdl;
  double primal = 0.0;  // internal objective
  double dual = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  double gap = 0.0;
};

Residuals residuals(const Standard& s, const Iterate& it) {
  Residuals r;
  r.rp = s.b - apply_a(s, it.x);
  for (int k = 0; k < s.n_ineq; ++k) r.rp(s.n_eq + k) -= it.xl(k);
  r.rd = s.c - apply_at(s, it.y) - it.s;
  r.rdl = -it.y.tail(s.n_ineq) - it.sl;
  r.primal = (s.c.array() * it.x.array()).sum();
  r.dual = s.b.dot(it.y);
  r.pinf = r.rp.norm() / (1.0 + s.b_norm);
  r.dinf = std::sqrt(r.rd.squaredNorm() + r.rdl.squaredNorm()) / (1.0 + s.c_norm);
  r.gap = std::abs(r.primal - r.dual) / (1.0 + std::abs(r.primal));
  return r;
}

// Newton direction for complementarity target `target` (= sigma * mu).
// `pred`, when given, contributes the second-order Mehrotra term.
bool newton_direction(const Standard& s, const Iterate& it, const Residuals& r, const Scaling& sc,
                      const Eigen::LDLT<MatrixXd>& fac, double target, const Direction* pred,
                      Direction& out) {
  const int n = s.n;
  // Rc = G [(2 target I - 2 D^2 - corr) / (d_i + d_j)] G'
  MatrixXd rc = MatrixXd::Zero(n, n);
  if (n > 0) {
    MatrixXd h = MatrixXd::Zero(n, n);
    h.diagonal() = (2.0 * target) * VectorXd::Ones(n) - 2.0 * sc.d.cwiseAbs2();
    if (pred) {
      const MatrixXd dxt = sc.g_inv * pred->dx * sc.g_inv.transpose();
      const MatrixXd dst = sc.g.transpose() * pred->ds * sc.g;
      h.noalias() -= dxt * dst;
      h.noalias() -= dst * dxt;
    }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) h(i, j) /= sc.d(i) + sc.d(j);
    rc = sym(sc.g * h * sc.g.transpose());
  }
  VectorXd rcl(s.n_ineq);
  for (int k = 0; k < s.n_ineq; ++k) {
    const double corr = pred ? pred->dxl(k) * pred->dsl(k) : 0.0;
    rcl(k) = (target - it.xl(k) * it.sl(k) - corr) / it.sl(k);
  }

  // M dy = rp - A(Rc) + A(W Rd W) - E rcl + E (wl .* rdl)
  VectorXd rhs = r.rp;
  if (n > 0) {
    const MatrixXd wrw = sym(sc.w * r.rd * sc.w);
    rhs += apply_a(s, wrw - rc);
  }
  for (int k = 0; k < s.n_ineq; ++k) rhs(s.n_eq + k) += sc.wl(k) * r.rdl(k) - rcl(k);
  out.dy = fac.solve(rhs);
  if (!out.dy.allFinite()) return false;

  out.ds = r.rd - apply_at(s, out.dy);
  out.dx = n > 0 ? MatrixXd(sym(rc - sc.w * out.ds * sc.w)) : MatrixXd(0, 0);
  out.dsl = r.rdl - out.dy.tail(s.n_ineq);
  out.dxl = rcl - sc.wl.cwiseProduct(out.dsl);
  return out.dx.allFinite() && out.ds.allFinite();
}

struct Steps {
  double primal = 1.0;
  double dual = 1.0;
};

Steps step_lengths(const Iterate& it, const MatrixXd& lx, const MatrixXd& ls, const Direction& d,
                   double fraction) {
  const double ap = std::min(max_step_psd(lx, d.dx), max_step_lp(it.xl, d.dxl));
  const double ad = std::min(max_step_psd(ls, d.ds), max_step_lp(it.sl, d.dsl));
  return {std::min(1.0, fraction * ap), std::min(1.0, fraction * ad)};
}

double combined_mu(const Iterate& it, int total) {
  double v = (it.x.array() * it.s.array()).sum() + it.xl.dot(it.sl);
  return v / std::max(1, total);
}

bool cholesky(const MatrixXd& a, MatrixXd& l) {
  if (a.rows() == 0) {
    l.resize(0, 0);
    return true;
  }
  Eigen::LLT<MatrixXd> llt(sym(a));
  if (llt.info() != Eigen::Success) return false;
  l = llt.matrixL();
  return l.allFinite();
}

Standard standardize(const SdpProblem& p) {
  Standard s;
  s.n = p.dim;
  s.n_eq = static_cast<int>(p.equalities.size());
  s.n_ineq = static_cast<int>(p.inequalities.size());
  s.m = s.n_eq + s.n_ineq;
  s.b.resize(s.m);
  for (int i = 0; i < s.n_eq; ++i) {
    s.rows.push_back(&p.equalities[i].a);
    s.b(i) = p.equalities[i].rhs;
  }
  for (int k = 0; k < s.n_ineq; ++k) {
    s.rows.push_back(&p.inequalities[k].a);
    s.b(s.n_eq + k) = p.inequalities[k].rhs;
  }
  s.sign = p.sense == Sense::kMaximize ? -1.0 : 1.0;
  s.c = s.sign * p.objective.dense(s.n);
  s.c_norm = s.c.norm();
  s.b_norm = s.b.norm();
  return s;
}

void validate(const SdpProblem& p, const SdpOptions& o) {
  if (!(o.tol >= 1e-10 && o.tol <= 1e-4)) throw InvalidInput("sdp tol must lie in [1e-10, 1e-4]");
  if (p.dim < 1) throw InvalidInput("sdp dimension must be positive");
  if (p.dim > o.dim_cap) {
    throw CapExceeded("sdp dimension " + std::to_string(p.dim) + " exceeds cap " +
                      std::to_string(o.dim_cap));
  }
  const std::size_t m = p.equalities.size() + p.inequalities.size();
  if (m > static_cast<std::size_t>(o.constraint_cap)) {
    throw CapExceeded("sdp has " + std::to_string(m) + " constraints, cap is " +
                      std::to_string(o.constraint_cap));
  }
  auto check = [&](const SparseSym& a, const char* what) {
    if (a.max_index() >= p.dim) throw DimensionMismatch(std::string(what) + " index out of range");
    for (const auto& e : a.entries())
      if (!std::isfinite(e.value)) throw InvalidInput(std::string(what) + " has non-finite entry");
  };
  check(p.objective, "objective");
  for (const auto& c : p.equalities) {
    check(c.a, "equality");
    if (!std::isfinite(c.rhs)) throw InvalidInput("equality rhs must be finite");
  }
  for (const auto& c : p.inequalities) {
    check(c.a, "inequality");
    if (!std::isfinite(c.rhs)) throw InvalidInput("inequality rhs must be finite");
  }
}

Iterate initial_point(const Standard& s) {
  // Scaled identities in the spirit of SDPT3's infeasible start.
  const double rn = std::sqrt(static_cast<double>(s.n));
  double xi = std::max(10.0, rn);
  double eta = std::max({10.0, rn, s.c_norm});
  for (int i = 0; i < s.m; ++i) {
    const double an = s.rows[i]->frobenius_norm() + (i >= s.n_eq ? 1.0 : 0.0);
    xi = std::max(xi, s.n * (1.0 + std::abs(s.b(i))) / (1.0 + an));
    eta = std::max(eta, an);
  }
  eta = std::max(eta, (1.0 + eta) / rn);
  Iterate it;
  it.x = xi * MatrixXd::Identity(s.n, s.n);
  it.s = eta * MatrixXd::Identity(s.n, s.n);
  it.xl = VectorXd::Constant(s.n_ineq, xi);
  it.sl = VectorXd::Constant(s.n_ineq, eta);
  it.y = VectorXd::Zero(s.m);
  return it;
}

SdpSolution package(const Standard& s, const Iterate& it, const Residuals& r, SdpStatus status,
                    int iterations) {
  SdpSolution sol;
  sol.status = status;
  sol.z = it.x;
  sol.slack = it.xl;
  sol.y = it.y;
  sol.dual_slack = it.s;
  sol.primal_value = s.sign * r.primal;
  sol.dual_value = s.sign * r.dual;
  sol.gap = r.gap;
  sol.iterations = iterations;
  sol.kkt.primal = r.pinf;
  sol.kkt.dual = r.dinf;
  sol.kkt.complementarity =
      ((it.x.array() * it.s.array()).sum() + it.xl.dot(it.sl)) /
      (1.0 + std::abs(r.primal) + std::abs(r.dual));
  return sol;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& o) {
  validate(problem, o);
  const Standard s = standardize(problem);
  Iterate it = initial_point(s);
  const int total = s.n + s.n_ineq;

  std::vector<IterateRecord> history;
  Iterate best = it;
  Residuals best_r = residuals(s, it);
  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  SdpStatus status = SdpStatus::kMaxIterations;
  int stall = 0;

  int iter = 0;
  for (;; ++iter) {
    const Residuals r = residuals(s, it);
    const double merit = std::max({r.gap, r.pinf, r.dinf});
    if (merit < best_merit) {
      best_merit = merit;
      best = it;
      best_r = r;
      best_iter = iter;
    }
    if (r.gap <= o.tol && r.pinf <= o.tol && r.dinf <= o.tol) {
      status = SdpStatus::kOptimal;
      best = it;
      best_r = r;
      best_iter = iter;
      break;
    }
    // Ray tests: a growing dual (primal) iterate whose objective dominates
    // its residual certifies primal (dual) infeasibility.
    {
      const double by = s.b.dot(it.y);
      if (by > 0.0) {
        const double ray = std::sqrt((apply_at(s, it.y) + it.s).squaredNorm() +
                                     (it.y.tail(s.n_ineq) + it.sl).squaredNorm()) /
                           by;
        if (ray <= o.infeasibility_tol) {
          status = SdpStatus::kPrimalInfeasible;
          best = it;
          best_r = r;
          best_iter = iter;
          break;
        }
      }
      const double cx = (s.c.array() * it.x.array()).sum();
      if (cx < 0.0) {
        VectorXd ax = apply_a(s, it.x);
        for (int k = 0; k < s.n_ineq; ++k) ax(s.n_eq + k) += it.xl(k);
        if (ax.norm() / -cx <= o.infeasibility_tol) {
          status = SdpStatus::kDualInfeasible;
          best = it;
          best_r = r;
          best_iter = iter;
          break;
        }
      }
    }
    if (iter >= o.max_iterations) break;

    MatrixXd lx, ls;
    if (!cholesky(it.x, lx) || !cholesky(it.s, ls)) break;
    Scaling sc;
    if (!nt_scaling(it, lx, ls, sc)) break;
    const Eigen::LDLT<MatrixXd> fac(schur(s, sc));
    if (fac.info() != Eigen::Success) break;

    const double mu = combined_mu(it, total);
    Direction d;
    Steps st;
    if (o.mehrotra) {
      Direction pred;
      if (!newton_direction(s, it, r, sc, fac, 0.0, nullptr, pred)) break;
      const Steps sp = step_lengths(it, lx, ls, pred, 1.0);
      const double mu_aff =
          (((it.x + sp.primal * pred.dx).array() * (it.s + sp.dual * pred.ds).array()).sum() +
           (it.xl + sp.primal * pred.dxl).dot(it.sl + sp.dual * pred.dsl)) /
          std::max(1, total);
      const double expon = std::max(1.0, 3.0 * std::pow(std::min(sp.primal, sp.dual), 2));
      const double sigma = std::clamp(std::pow(std::max(0.0, mu_aff) / mu, expon), 0.0, 1.0);
      if (!newton_direction(s, it, r, sc, fac, sigma * mu, &pred, d)) break;
    } else {
      if (!newton_direction(s, it, r, sc, fac, 0.3 * mu, nullptr, d)) break;
    }
    st = step_lengths(it, lx, ls, d, o.step_fraction);

    it.x = sym(it.x + st.primal * d.dx);
    it.xl += st.primal * d.dxl;
    it.y += st.dual * d.dy;
    it.s = sym(it.s + st.dual * d.ds);
    it.sl += st.dual * d.dsl;

    if (o.keep_history) {
      const Residuals nr = residuals(s, it);
      history.push_back({iter + 1, s.sign * nr.primal, s.sign * nr.dual, nr.pinf, nr.dinf,
                         combined_mu(it, total), st.primal, st.dual});
    }
    stall = (std::max(st.primal, st.dual) < 1e-8) ? stall + 1 : 0;
    if (stall >= 5) break;
  }

  SdpSolution sol = package(s, best, best_r, status, status == SdpStatus::kMaxIterations ? iter : best_iter);
  sol.history = std::move(history);
  return sol;
}

// --- independent replay -------------------------------------------------------

ResidualReport check_solution(const SdpProblem& problem, const MatrixXd& z) {
  if (z.rows() != problem.dim || z.cols() != problem.dim) {
    throw DimensionMismatch("check_solution: z has the wrong size");
  }
  ResidualReport rep;
  rep.asymmetry = (z - z.transpose()).cwiseAbs().maxCoeff();
  for (const auto& c : problem.equalities) {
    rep.primal_residual = std::max(rep.primal_residual, std::abs(c.a.dot(z) - c.rhs));
  }
  for (const auto& c : problem.inequalities) {
    rep.primal_residual = std::max(rep.primal_residual, c.a.dot(z) - c.rhs);
  }
  rep.min_eigenvalue = min_eig(z);
  rep.eigenvalue_residual = std::max(0.0, -rep.min_eigenvalue);
  rep.objective = problem.objective.dot(z);
  return rep;
}

ResidualReport check_solution(const SdpProblem& problem, const SdpSolution& solution) {
  return check_solution(problem, solution.z);
}

void write_sparse_triplets(const SdpProblem& p, std::ostream& out) {
  out << "dim " << p.dim << "\n";
  out << "sense " << (p.sense == Sense::kMaximize ? "maximize" : "minimize") << "\n";
  out << "constraints " << p.equalities.size() << " " << p.inequalities.size() << "\n";
  out.precision(17);
  auto block = [&](std::size_t index, const SparseSym& a) {
    for (const auto& e : a.entries()) {
      out << index << " " << e.row << " " << e.col << " " << e.value << "\n";
    }
  };
  block(0, p.objective);
  std::size_t index = 1;
  for (const auto& c : p.equalities) block(index++, c.a);
  for (const auto& c : p.inequalities) block(index++, c.a);
  index = 1;
  for (const auto& c : p.equalities) out << "rhs " << index++ << " eq " << c.rhs << "\n";
  for (const auto& c : p.inequalities) out << "rhs " << index++ << " le " << c.rhs << "\n";
}

double spectral_norm(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  return svd.singularValues()(0);
}

MatrixXd kron_matrix(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace tnorm
