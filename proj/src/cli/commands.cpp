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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "tnorm/cli.hpp"
#include "tnorm/error.hpp"
#include "tnorm/exact.hpp"
#include "tnorm/game.hpp"
#include "tnorm/gamma2.hpp"
#include "tnorm/io.hpp"
#include "tnorm/quantum.hpp"
#include "tnorm/rng.hpp"
#include "tnorm/rounding.hpp"

namespace tnorm::cli {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Dims parse_dims(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      v.push_back(n);
    } catch (const std::exception&) {
      throw InvalidInput("--dims: expected nx,ny,na,nb, got '" + text + "'");
    }
  }
  if (v.size() != 4) throw InvalidInput("--dims: expected nx,ny,na,nb, got '" + text + "'");
  Dims d{v[0], v[1], v[2], v[3]};
  d.validate();
  return d;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << text;
  if (!f) throw InvalidInput("write to '" + path + "' failed");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

// Flags shared by every subcommand.
struct Common {
  std::string out;
  std::string report;
  double tol = Gamma2Options{}.tol;
  std::uint64_t seed = 0;
  int count = 0;
  int jobs = 1;
  std::string dims;
  int power = 1;
  int n = 2;
  std::size_t samples = 100000;
  std::string which;
  std::string kind = "game";
  std::string suite;
  std::string game = "chsh";
  bool heuristic = false;
  std::vector<std::string> files;
};

class Runner {
 public:
  Runner(std::vector<std::string> command, std::ostream& out)
      : report_(std::move(command)), out_(out) {}

  Report& report() { return report_; }

  Gamma2Options gamma2_options(const Common& c) const {
    Gamma2Options o;
    o.tol = c.tol;
    return o;
  }

  std::string load(const std::string& path) {
    std::string text = read_file(path);
    report_.add_input(path, text);
    return text;
  }

  void print_header(const std::string& label) { out_ << label << "\n"; }

  void print_row(const ResultRow& r) {
    out_ << "  " << r.name << ": " << fmt(r.value);
    if (r.gap) out_ << "  gap " << std::setprecision(3) << *r.gap;
    if (r.bound) out_ << "  bound " << fmt(*r.bound);
    if (r.pass) out_ << "  " << (*r.pass ? "PASS" : "FAIL");
    out_ << "\n";
  }

  void add(ResultRow row) {
    print_row(row);
    report_.add_result(std::move(row));
  }

  int finish(const Common& c, const std::string& report_path) {
    if (!report_path.empty()) write_text(report_path, canonical_dump(report_.to_json()));
    (void)c;
    return report_.all_pass() ? kExitPass : kExitVerificationFailure;
  }

 private:
  Report report_;
  std::ostream& out_;
};

// --- value -----------------------------------------------------------------

json certificate_json(const ClassicalCertificate& cert) {
  return {{"alice_answers", cert.alice_answers}, {"alice_signs", cert.alice_signs},
          {"bob_answers", cert.bob_answers},     {"bob_signs", cert.bob_signs},
          {"sign_flipped", cert.sign_flipped},   {"exact", cert.exact},
          {"assignments_checked", cert.assignments_checked}};
}

ExactOptions exact_options(const Common& c) {
  ExactOptions o;
  o.heuristic = c.heuristic;
  o.seed = c.seed;
  return o;
}

int cmd_value(Runner& run, const Common& c) {
  const std::string text = run.load(c.files.at(0));
  const auto t0 = Clock::now();
  const Gamma2Options g2 = run.gamma2_options(c);
  const std::string& w = c.which;

  if (w == "classical") {
    const Game game = parse_game(text);
    const ClassicalCertificate cert = classical_value(game, exact_options(c));
    run.print_header(cert.exact ? "classical value by exhaustive enumeration"
                                : "classical value, heuristic lower bound");
    run.add({"classical", cert.value, 0.0, std::nullopt, std::nullopt,
             {{"certificate", certificate_json(cert)}}});
    if (c.heuristic) run.report().add_seed(c.seed);
  } else if (w == "epsilon" || w == "bellclassical") {
    const BellFunctional g = parse_bell(text);
    const bool eps = w == "epsilon";
    const ClassicalCertificate cert =
        eps ? injective_norm(g, exact_options(c)) : bell_classical_value(g, exact_options(c));
    run.print_header(eps ? "injective norm over products of local unit balls"
                         : "classical Bell value over deterministic strategies");
    if (!cert.exact) run.print_header("(heuristic lower bound)");
    run.add({w, cert.value, 0.0, std::nullopt, std::nullopt,
             {{"certificate", certificate_json(cert)}}});
    if (c.heuristic) run.report().add_seed(c.seed);
  } else if (w == "gamma2") {
    const BehaviorTensor p = parse_behavior(text);
    const Gamma2Result r = gamma2(p, g2);
    run.print_header("gamma2 factorization norm of a behavior (1 on quantum behaviors)");
    run.add({"gamma2", r.value, r.gap, std::nullopt, std::nullopt,
             {{"iterations", r.iterations},
              {"tol", c.tol},
              {"witness_opnorm_product", r.witness_opnorm_product}}});
  } else if (w == "gamma2star") {
    const BellFunctional g = parse_bell(text);
    const Gamma2StarResult r = gamma2_star(g, g2);
    run.print_header("gamma2* dual norm (upper bound on the entangled value)");
    run.add({"gamma2star", r.value, r.gap, std::nullopt, std::nullopt,
             {{"iterations", r.iterations}, {"tol", c.tol}}});
  } else if (w == "xorquantum") {
    const Game game = parse_game(text);
    const XorValue r = xor_entangled_value(game, g2);
    run.print_header("entangled value of an XOR game via gamma2*");
    run.add({"xorquantum", r.value, r.gap, std::nullopt, r.consistent,
             {{"from_bias", r.from_bias}, {"bias", r.bias}, {"tol", c.tol}}});
  } else {
    throw InvalidInput("--which: unknown value '" + w + "'");
  }
  run.report().add_timing(w, ms_since(t0));
  return run.finish(c, c.out);
}

// --- compose / random ------------------------------------------------------

int emit_document(Runner& run, const Common& c, const std::string& doc, std::ostream& out) {
  if (c.out.empty()) {
    out << doc;
  } else {
    write_text(c.out, doc);
  }
  run.report().add_result({"sha256", 0.0, std::nullopt, std::nullopt, std::nullopt,
                           {{"digest", sha256_hex(doc)}, {"bytes", doc.size()}}});
  if (!c.report.empty()) write_text(c.report, canonical_dump(run.report().to_json()));
  return kExitPass;
}

int cmd_compose(Runner& run, const Common& c, std::ostream& out) {
  if (c.power < 1) throw InvalidInput("--power must be at least 1");
  std::vector<Document> docs;
  for (const auto& f : c.files) docs.push_back(parse_document(run.load(f)));
  const auto t0 = Clock::now();

  const auto all_of = [&](auto tag) {
    using T = decltype(tag);
    return std::all_of(docs.begin(), docs.end(),
                       [](const Document& d) { return std::holds_alternative<T>(d); });
  };
  std::string text;
  if (all_of(Game{})) {
    Game h = std::get<Game>(docs[0]);
    for (std::size_t i = 1; i < docs.size(); ++i) h = compose(h, std::get<Game>(docs[i]));
    text = emit(power(h, c.power));
  } else if (all_of(BehaviorTensor{})) {
    BehaviorTensor h = std::get<BehaviorTensor>(docs[0]);
    for (std::size_t i = 1; i < docs.size(); ++i)
      h = compose(h, std::get<BehaviorTensor>(docs[i]));
    const BehaviorTensor base = h;
    for (int k = 1; k < c.power; ++k) h = compose(h, base);
    text = emit(h);
  } else {
    std::vector<BellFunctional> gs;
    for (const auto& d : docs) {
      if (const auto* game = std::get_if<Game>(&d)) {
        gs.push_back(game_to_functional(*game));
      } else if (const auto* g = std::get_if<BellFunctional>(&d)) {
        gs.push_back(*g);
      } else {
        throw InvalidInput("cannot compose a behavior with a game or Bell functional");
      }
    }
    BellFunctional h = gs[0];
    for (std::size_t i = 1; i < gs.size(); ++i) h = compose(h, gs[i]);
    text = emit(power(h, c.power));
  }
  run.report().add_timing("compose", ms_since(t0));
  return emit_document(run, c, text, out);
}

int cmd_random(Runner& run, const Common& c, std::ostream& out) {
  const Dims d = parse_dims(c.dims.empty() ? "2,2,2,2" : c.dims);
  std::string text;
  if (c.kind == "game") {
    text = emit(random_game(c.seed, d));
  } else if (c.kind == "bell") {
    text = emit(random_bell(c.seed, d));
  } else {
    throw InvalidInput("--kind must be game or bell");
  }
  run.report().add_seed(c.seed);
  return emit_document(run, c, text, out);
}

// --- verify ----------------------------------------------------------------

struct Outcome {
  ResultRow row;
  std::exception_ptr error;
};

// Runs one instance per seed on up to `jobs` threads; rows come back in seed
// order regardless of scheduling.
std::vector<ResultRow> run_instances(const std::vector<std::uint64_t>& seeds, int jobs,
                                     const std::function<ResultRow(std::uint64_t)>& f) {
  std::vector<Outcome> outcomes(seeds.size());
  const int n = static_cast<int>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (int i = 0; i < n; ++i) {
    try {
      outcomes[i].row = f(seeds[i]);
    } catch (...) {
      outcomes[i].error = std::current_exception();
    }
  }
  std::vector<ResultRow> rows;
  for (auto& o : outcomes) {
    if (o.error) std::rethrow_exception(o.error);
    rows.push_back(std::move(o.row));
  }
  return rows;
}

std::vector<std::uint64_t> seed_range(std::uint64_t seed, int count) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(seed + static_cast<std::uint64_t>(i));
  return s;
}

std::string seed_name(const std::string& prefix, std::uint64_t seed) {
  return prefix + "[seed=" + std::to_string(seed) + "]";
}

Game load_game_arg(Runner& run, const std::string& arg) {
  if (arg == "chsh") return chsh_game();
  return parse_game(run.load(arg));
}

// Random unit vectors in R^3 for the sign-product identity.
Eigen::MatrixXd random_unit_columns(Rng& rng, int dim, int n) {
  Eigen::MatrixXd m(dim, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < dim; ++i) m(i, j) = rng.normal();
    m.col(j).normalize();
  }
  return m;
}

int cmd_verify(Runner& run, const Common& c) {
  const Gamma2Options g2 = run.gamma2_options(c);
  const std::string& suite = c.suite;
  const auto t0 = Clock::now();
  std::vector<ResultRow> rows;
  std::vector<std::uint64_t> seeds;

  if (suite == "grothendieck") {
    const Dims d = parse_dims(c.dims.empty() ? "3,3,2,2" : c.dims);
    seeds = seed_range(c.seed, c.count > 0 ? c.count : 50);
    run.print_header("generalized Grothendieck inequality: gamma2* <= K sqrt(na nb) eps");
    rows = run_instances(seeds, c.jobs, [&](std::uint64_t s) {
      const GrothendieckReport r = verify_grothendieck(random_bell(s, d), g2);
      return ResultRow{seed_name("ratio", s), r.ratio.value_or(0.0), std::nullopt, r.bound,
                       r.pass && r.sandwich,
                       {{"seed", s},
                        {"epsilon", r.epsilon},
                        {"gamma2_star", r.gamma2_star},
                        {"sandwich", r.sandwich},
                        {"ratio_defined", r.ratio.has_value()}}};
    });
  } else if (suite == "direct-product") {
    const Dims d = parse_dims(c.dims.empty() ? "2,2,2,2" : c.dims);
    seeds = seed_range(c.seed, c.count > 0 ? c.count : 20);
    run.print_header("direct-product inequality: gamma2*(G1 o G2) <= gamma2*(G1) gamma2*(G2)");
    rows = run_instances(seeds, c.jobs, [&](std::uint64_t s) {
      const Game a = random_game(mix_seed(s, 0), d);
      const Game b = random_game(mix_seed(s, 1), d);
      const DirectProductReport r = verify_direct_product(a, b, g2);
      return ResultRow{seed_name("lhs", s), r.lhs, std::nullopt, r.rhs, r.pass,
                       {{"seed", s},
                        {"factor1", r.factor1},
                        {"factor2", r.factor2},
                        {"difference", r.difference}}};
    });
  } else if (suite == "parallel") {
    if (c.n < 1) throw InvalidInput("--n must be at least 1");
    const Game game = load_game_arg(run, c.game);
    if (!game.is_xor()) throw InvalidInput("parallel repetition suite needs an XOR game");
    run.print_header("perfect parallel repetition of XOR games under gamma2*");
    const Gamma2StarResult base = gamma2_star(game_to_functional(game), g2);
    const Gamma2StarResult rep = gamma2_star(game_to_functional(power(game, c.n)), g2);
    const double expected = std::pow(base.value, c.n);
    const double diff = std::abs(rep.value - expected);
    run.add({"gamma2star", base.value, base.gap, std::nullopt, std::nullopt, {}});
    rows.push_back({"gamma2star_power", rep.value, rep.gap, expected, diff <= 1e-4,
                    {{"n", c.n}, {"difference", diff}, {"threshold", 1e-4}}});
  } else if (suite == "quantum-gamma") {
    seeds = seed_range(c.seed, c.count > 0 ? c.count : 20);
    const bool fixed = !c.dims.empty();
    const Dims given = fixed ? parse_dims(c.dims) : Dims{};
    run.print_header("behaviors of quantum strategies have gamma2 = 1");
    rows = run_instances(seeds, c.jobs, [&](std::uint64_t s) {
      Rng rng(mix_seed(s, 0));
      Dims d = given;
      if (!fixed) {
        d = Dims{2 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2)),
                 2 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2))};
      }
      const int local = 2 + static_cast<int>(rng.below(3));
      const QuantumStrategy q = random_strategy(mix_seed(s, 1), d, local);
      const Gamma2Result r = gamma2(behavior_of(q), g2);
      const auto [va, vb] = strategy_vector_system(q);
      const double prod = opnorm_2_to_inf1(vb).value * opnorm_1inf_to_2(va).value;
      const bool pass = std::abs(r.value - 1.0) <= 1e-5 && std::abs(prod - 1.0) <= 1e-8;
      return ResultRow{seed_name("gamma2", s), r.value, r.gap, 1.0, pass,
                       {{"seed", s},
                        {"dims", d.to_string()},
                        {"local_dim", local},
                        {"vector_opnorm_product", prod}}};
    });
  } else if (suite == "krivine") {
    seeds = seed_range(c.seed, c.count > 0 ? c.count : 5);
    const int n = std::max(1, c.n);
    run.print_header("Krivine sign-product identity: E[s t] = <u, v> / K");
    rows = run_instances(seeds, c.jobs, [&](std::uint64_t s) {
      Rng rng(mix_seed(s, 0));
      const Eigen::MatrixXd u = random_unit_columns(rng, 3, n);
      const Eigen::MatrixXd v = random_unit_columns(rng, 3, n);
      const Eigen::MatrixXd gab = u.transpose() * v;
      const CovarianceModel cov =
          krivine_covariance(u.transpose() * u, gab, v.transpose() * v);
      const IdentityReport r =
          grothendieck_identity_check(gab, sample_signs(cov, c.samples, mix_seed(s, 1)));
      return ResultRow{seed_name("max_z", s), r.max_z, std::nullopt, 4.0, r.within(4.0),
                       {{"seed", s},
                        {"samples", c.samples},
                        {"max_abs_deviation", r.max_abs_deviation}}};
    });
  } else {
    throw InvalidInput("unknown suite '" + suite + "'");
  }

  for (auto s : seeds) run.report().add_seed(s);
  for (auto& r : rows) run.add(std::move(r));
  run.report().add_timing(suite, ms_since(t0));
  const int code = run.finish(c, c.out);
  std::ostringstream summary;
  for (const auto& r : run.report().results())
    if (r.pass && !*r.pass) summary << " " << r.name;
  run.print_header(code == kExitPass ? "all instances pass"
                                     : "failing instances:" + summary.str());
  return code;
}

// --- round -----------------------------------------------------------------

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_round(Runner& run, const Common& c) {
  const BellFunctional g = parse_bell(run.load(c.files.at(0)));
  const auto t0 = Clock::now();
  const Gamma2StarResult star = gamma2_star(g, run.gamma2_options(c));
  const auto [wa, wb] = witness_vectors(star.witness);
  const RoundingCertificate cert = round_bell(g, wa, wb, c.samples, c.seed);
  run.report().add_seed(c.seed);
  run.print_header("Krivine rounding of a gamma2* witness (lower bound on eps)");
  run.add({"gamma2star", star.value, star.gap, std::nullopt, std::nullopt, {}});
  run.add({"certificate", cert.value, std::nullopt, star.value, std::nullopt,
           {{"mean", cert.mean},
            {"stderr", cert.stderr_},
            {"samples", cert.samples},
            {"seed", cert.seed},
            {"feasible_pair", cert.feasible_pair},
            {"best_sample", cert.best_sample},
            {"alice", cert.alice},
            {"bob", cert.bob}}});
  const IdentityReport& id = cert.identity;
  if (id.empirical.size() > 0) {
    run.add({"identity_max_z", id.max_z, std::nullopt, 4.0, id.within(4.0),
             {{"max_abs_deviation", id.max_abs_deviation},
              {"empirical", matrix_json(id.empirical)},
              {"target", matrix_json(id.target)},
              {"analytic", matrix_json(id.analytic)}}});
  }
  run.report().add_timing("round", ms_since(t0));
  return run.finish(c, c.out);
}

}  // namespace
}  // namespace tnorm::cli

namespace tnorm {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Tensor-norm values and verification suites for two-prover games", "tnorm"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Common c;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Write the JSON report (or document) to PATH");
    sub->add_option("--tol", c.tol, "SDP tolerance");
  };

  auto* value = app.add_subcommand("value", "Compute one value of a game, functional or behavior");
  value->add_option("file", c.files, "Input document")->required()->expected(1);
  value->add_option("--which", c.which, "Quantity to compute")
      ->required()
      ->check(CLI::IsMember(
          {"classical", "epsilon", "bellclassical", "gamma2", "gamma2star", "xorquantum"}));
  value->add_flag("--heuristic", c.heuristic, "Allow a lower bound when enumeration is too large");
  value->add_option("--seed", c.seed, "Seed for heuristic restarts");
  add_common(value);

  auto* comp = app.add_subcommand("compose", "Parallel composition of documents");
  comp->add_option("files", c.files, "Input documents")->required();
  comp->add_option("--power", c.power, "Repeat the composed document N times");
  comp->add_option("--report", c.report, "Write the JSON report to PATH");
  add_common(comp);

  auto* rnd = app.add_subcommand("random", "Emit a seeded random game or Bell functional");
  rnd->add_option("--kind", c.kind)->check(CLI::IsMember({"game", "bell"}));
  rnd->add_option("--dims", c.dims, "nx,ny,na,nb");
  rnd->add_option("--seed", c.seed);
  rnd->add_option("--report", c.report, "Write the JSON report to PATH");
  add_common(rnd);

  auto* ver = app.add_subcommand("verify", "Run a seeded verification suite");
  ver->add_option("suite", c.suite)
      ->required()
      ->check(CLI::IsMember(
          {"grothendieck", "direct-product", "parallel", "quantum-gamma", "krivine"}));
  ver->add_option("--count", c.count, "Number of instances");
  ver->add_option("--seed", c.seed, "First instance seed");
  ver->add_option("--jobs", c.jobs, "Instances solved in parallel");
  ver->add_option("--dims", c.dims, "nx,ny,na,nb");
  ver->add_option("--game", c.game, "chsh or a game file");
  ver->add_option("--n", c.n, "Repetitions (parallel) or vectors per side (krivine)");
  ver->add_option("--samples", c.samples, "Samples per instance (krivine)");
  add_common(ver);

  auto* rd = app.add_subcommand("round", "Round a gamma2* witness into product tensors");
  rd->add_option("file", c.files, "Bell functional or game")->required()->expected(1);
  rd->add_option("--samples", c.samples);
  rd->add_option("--seed", c.seed);
  add_common(rd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInputError;
  }

  std::vector<std::string> command;
  for (int i = 1; i < argc; ++i) command.emplace_back(argv[i]);
  Runner run(std::move(command), out);

  try {
    if (*value) return cmd_value(run, c);
    if (*comp) return cmd_compose(run, c, out);
    if (*rnd) return cmd_random(run, c, out);
    if (*ver) return cmd_verify(run, c);
    if (*rd) return cmd_round(run, c);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  return kExitInputError;
}

}  // namespace tnorm
