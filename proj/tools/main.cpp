#include <algorithm>
#include <cctype>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wbary/barycenter.hpp"
#include "wbary/errors.hpp"
#include "wbary/io.hpp"
#include "wbary/legendre.hpp"
#include "wbary/oracle.hpp"
#include "wbary/poisson.hpp"

namespace {

using namespace wbary;

bool has_extension(const std::string& path, const char* ext) {
  std::string e = std::filesystem::path(path).extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

/** Loads a density from disk (PGM by extension, CSV otherwise) and
 *  normalizes raw intensities to a probability measure. */
Measure load_measure(const std::string& path) {
  ScalarField raw = has_extension(path, ".pgm")
                        ? field_from_pgm(read_pgm(path), path)
                        : field_from_matrix(read_csv(path), path);
  return normalize(raw);
}

void save_measure(const std::string& path, const Measure& m) {
  if (has_extension(path, ".pgm"))
    write_pgm(path, pgm_from_measure(m));
  else
    write_csv(path, matrix_from_measure(m));
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Flags {
  std::vector<std::string> inputs;
  std::vector<std::string> out;
  std::string report;
  std::string suite;
  int iters = 300;
  std::string tau_schedule = "exp";
  double tau0 = 0.5;
  double eta0 = 0.05;
  double eta_decay = 0.99;
  int split_k = 4;
  double floor_eps = 0.0;
  unsigned seed = 42;
  int threads = 1;
  bool deterministic = false;
};

int run_barycenter(const Flags& f) {
  std::vector<Measure> measures;
  measures.reserve(f.inputs.size());
  for (const std::string& path : f.inputs)
    measures.push_back(load_measure(path));
  for (const Measure& m : measures)
    require_same_grid(measures.front().grid, m.grid);

  BarycenterOptions opt;
  opt.iters = f.iters;
  opt.tau_schedule = f.tau_schedule == "exp"     ? TauSchedule::Exp
                     : f.tau_schedule == "inv_t" ? TauSchedule::InvT
                                                 : TauSchedule::Const;
  opt.tau0 = f.tau0;
  opt.eta0 = f.eta0;
  opt.eta_decay = f.eta_decay;
  opt.split_k = f.split_k;
  opt.floor_eps = f.floor_eps;
  opt.threads = f.threads;
  opt.deterministic = f.deterministic;

  BarycenterResult res = compute_barycenter(measures, opt);

  for (const std::string& path : f.out) save_measure(path, res.barycenter);
  if (!f.report.empty()) write_report(f.report, res.reports);

  if (res.reports.empty()) {
    std::printf("iterations=0\n");
  } else {
    const IterationReport& last = res.reports.back();
    std::printf("iterations=%d objective=%s stationarity=%s\n", f.iters,
                fmt17(last.objective).c_str(),
                fmt17(last.stationarity).c_str());
  }
  return 0;
}

int run_distance(const Flags& f) {
  Measure a = load_measure(f.inputs[0]);
  Measure b = load_measure(f.inputs[1]);
  require_same_grid(a.grid, b.grid);

  W2Result res =
      solve_w2(a, b, W2Options{f.iters, f.eta0, f.eta_decay, f.split_k});
  std::printf("%s\n", fmt17(res.value).c_str());

  if (!f.report.empty()) {
    std::ofstream out(f.report, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + f.report);
    for (size_t i = 0; i < res.trace.size(); ++i)
      out << "{\"t\":" << i << ",\"value\":" << fmt17(res.trace[i]) << "}\n";
  }
  return 0;
}

/** Cross-checks the fast solvers against the slow reference
 *  implementations on randomized instances. Prints one line per check and
 *  reports the worst observed error next to its bound. */
int run_verify(const std::string& suite, unsigned seed) {
  bool all_ok = true;
  auto check = [&](const char* name, double err, double bound) {
    bool ok = err <= bound;
    all_ok = all_ok && ok;
    std::printf("%-4s %-34s max error %.3e  (bound %.0e)\n",
                ok ? "ok" : "FAIL", name, err, bound);
  };

  if (suite == "poisson" || suite == "all") {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int dim : {1, 2}) {
      Grid g{dim, 16};
      for (int rep = 0; rep < 20; ++rep) {
        ArrayXd r(g.size());
        for (double& x : r) x = u(rng);
        r -= r.mean();
        ScalarField rhs{g, r};
        ScalarField fast = neg_inv_laplacian(rhs);
        ScalarField slow = oracle::dense_neumann_solve(rhs);
        worst = std::max(worst, (fast.v - slow.v).abs().maxCoeff());
      }
    }
    check("poisson solve vs dense stencil", worst, 1e-10);
  }

  if (suite == "conjugate" || suite == "all") {
    std::mt19937 rng(seed + 1);
    std::uniform_real_distribution<double> u(-0.5, 1.0);
    double worst = 0.0, worst_env = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      for (int dim : {1, 2}) {
        Grid g{dim, dim == 1 ? 33 : 17};
        Potential phi{g, ArrayXd(g.size()), false};
        for (double& x : phi.v) x = u(rng);
        Potential slow = oracle::conjugate_brute(phi);
        worst =
            std::max(worst, (conjugate(phi).v - slow.v).abs().maxCoeff());
        Potential env_ref = oracle::conjugate_brute(slow);
        worst_env = std::max(
            worst_env, (convexify(phi).v - env_ref.v).abs().maxCoeff());
      }
    }
    check("fast conjugate vs brute force", worst, 1e-12);
    check("convex envelope vs double brute", worst_env, 1e-12);
  }

  if (suite == "w2-1d" || suite == "all") {
    std::mt19937 rng(seed + 2);
    std::uniform_real_distribution<double> ua(0.3, 0.7), us(0.05, 1.0);
    Grid g{1, 1024};
    double worst = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
      Measure m[2];
      for (Measure& mm : m) {
        double a = ua(rng), sigma = us(rng);
        mm.grid = g;
        mm.mass = ArrayXd(g.size());
        for (int i = 0; i < g.n; ++i) {
          double d = g.node(i) - a;
          mm.mass[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        }
        mm.mass /= mm.mass.sum();
      }
      double fast = solve_w2(m[0], m[1], W2Options{600, 0.5, 0.995, 4}).value;
      double slow = oracle::quantile_w2_1d(m[0], m[1]);
      worst = std::max(worst, std::abs(fast - slow));
    }
    check("1d distance vs quantile formula", worst, 1e-4);
  }

  if (suite == "duality" || suite == "all") {
    std::mt19937 rng(seed + 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Grid g{2, 8};
    Eigen::MatrixXd cost = oracle::half_sqdist_cost(g);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      Measure nu{g, ArrayXd(g.size())}, mu{g, ArrayXd(g.size())};
      Potential phi{g, ArrayXd(g.size()), false};
      for (double& x : nu.mass) x = u(rng);
      for (double& x : mu.mass) x = u(rng);
      for (double& x : phi.v) x = u(rng) * 0.5;
      nu.mass /= nu.mass.sum();
      mu.mass /= mu.mass.sum();
      Potential conv = convexify(phi);
      double lower = dual_value(nu, mu, conv, conjugate(conv));
      double exact = oracle::lp_ot(nu.mass, mu.mass, cost).value;
      worst = std::max(worst, lower - exact);
    }
    check("weak duality vs exact lp", std::max(worst, 0.0), 1e-10);
  }

  return all_ok ? 0 : 1;
}

void add_solver_flags(CLI::App* cmd, Flags& f, bool barycenter_only) {
  cmd->add_option("--iters", f.iters, "Solver iterations")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--eta0", f.eta0, "Initial dual ascent step");
  cmd->add_option("--eta-decay", f.eta_decay,
                  "Step decay on non-improving ascent iterations");
  cmd->add_option("--split-k", f.split_k,
                  "Pushforward sub-mesh resolution per axis")
      ->check(CLI::PositiveNumber);
  if (barycenter_only) {
    cmd->add_option("--tau-schedule", f.tau_schedule,
                    "Descent step schedule")
        ->check(CLI::IsMember({"exp", "inv_t", "const"}));
    cmd->add_option("--tau0", f.tau0, "Descent step for the const schedule");
    cmd->add_option("--floor-eps", f.floor_eps,
                    "Uniform mass mixed into the initial iterate");
    cmd->add_option("--threads", f.threads, "Per-measure ascent parallelism")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--deterministic", f.deterministic,
                  "Force the sequential code path");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact 2-Wasserstein barycenters of grid densities"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* bary = app.add_subcommand(
      "barycenter", "Compute the barycenter of input densities");
  bary->add_option("inputs", f.inputs, "Input densities (PGM or CSV)")
      ->required();
  bary->add_option("--out", f.out,
                   "Output path (PGM or CSV by extension; repeatable)");
  bary->add_option("--report", f.report,
                   "Write per-iteration reports as JSON lines");
  add_solver_flags(bary, f, true);

  CLI::App* dist = app.add_subcommand(
      "distance", "Squared 2-Wasserstein distance between two densities");
  dist->add_option("inputs", f.inputs, "Two input densities")
      ->expected(2)
      ->required();
  dist->add_option("--report", f.report, "Write the dual-value trace");
  add_solver_flags(dist, f, false);

  CLI::App* verify =
      app.add_subcommand("verify", "Cross-check solvers against oracles");
  verify
      ->add_option("suite", f.suite,
                   "One of: poisson, conjugate, w2-1d, duality, all")
      ->required()
      ->check(CLI::IsMember({"poisson", "conjugate", "w2-1d", "duality",
                             "all"}));
  verify->add_option("--seed", f.seed, "Seed for randomized instances");

  try {
    app.parse(argc, argv);
    if (bary->parsed()) return run_barycenter(f);
    if (dist->parsed()) return run_distance(f);
    return run_verify(f.suite, f.seed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const GridMismatch& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
