// numrad: numerical radius of a dense complex matrix from the command line.
//
//   numrad compute --input A.mtx [--method hybrid|levelset|cutting|oracle]
//   numrad gallery crabb --n 8 --out K8.mtx
//   numrad rates --mu 0.5
//   numrad disk-cost --tol 1e-8
//   numrad calibrate --n 200 --out model.json
//
// compute exits 0 on convergence, 2 when a solver gave up (the partial report
// is still written) and 1 on bad input.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "numrad/numrad.hpp"

namespace {

using namespace numrad;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;

struct ComputeArgs {
  std::string input;
  std::string method = "hybrid";
  double tol = 1e-14;
  std::string out;
  std::optional<std::uint64_t> seed;
  long max_cuts = -1;
  bool no_dual = false;
  bool bbbs_only = false;
  std::string cost_model;
  std::string trace;
  int grid = 720;
  int refine = 60;
};

struct GalleryArgs {
  std::string family;
  int n = 0;
  std::optional<double> mu, s, r_tilde, phase;
  std::optional<int> k, i, j;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct RatesArgs {
  double mu = 0.5;
  double phi0 = kPi / 3.0;
  int steps = 40;
};

struct DiskCostArgs {
  std::vector<double> tol{1e-4, 1e-8, 1e-12, std::numeric_limits<double>::epsilon()};
  std::vector<int> start_j{4, 3};
};

struct CalibrateArgs {
  long n = 100;
  int samples = 5;
  std::string out;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text << '\n';
}

std::optional<CostModel> resolve_cost_model(const std::string& flag) {
  if (!flag.empty()) return load_cost_model(flag);
  if (const char* env = std::getenv("NUMRAD_COST_MODEL"); env && *env) return load_cost_model(env);
  return std::nullopt;
}

SolveReport oracle_report(const ComplexMatrix& a, const ComputeArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const CountScope counts;
  SolveReport rep;
  rep.method = "oracle";
  rep.tol = args.tol;
  rep.r = rep.lower = rep.upper = grid_oracle(a, args.grid, args.refine);
  rep.rel_err = 0.0;
  rep.converged = true;
  rep.flags.push_back("uncertified");
  const KernelCounts d = counts.delta();
  rep.eigH_count = d.hermitian;
  rep.pencil_count = d.pencil;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void emit(const SolveReport& rep, const ComputeArgs& args) {
  write_text(args.out, to_json(rep));
  if (!args.trace.empty()) {
    std::ofstream tr(args.trace);
    if (!tr) throw InputError("cannot write " + args.trace);
    write_trace_csv(rep, tr);
  }
}

int run_compute(const ComputeArgs& args) {
  if (!(args.tol > 0.0 && args.tol < 1.0)) throw InputError("--tol must lie in (0, 1)");
  const ComplexMatrix a = read_matrix_market(args.input);

  try {
    SolveReport rep;
    if (args.method == "levelset") {
      LevelSetOptions o;
      o.tol = args.tol;
      o.bbbs_only = args.bbbs_only;
      rep = algorithm1(a, o);
    } else if (args.method == "cutting") {
      CuttingOptions o;
      o.tol = args.tol;
      o.dual_cuts = !args.no_dual;
      o.max_cuts = args.max_cuts;
      rep = algorithm2(a, o);
    } else if (args.method == "hybrid") {
      HybridOptions o;
      o.tol = args.tol;
      o.cutting.dual_cuts = !args.no_dual;
      o.cutting.max_cuts = args.max_cuts;
      o.levelset.bbbs_only = args.bbbs_only;
      o.model = resolve_cost_model(args.cost_model);
      rep = hybrid_solve(a, o);
    } else if (args.method == "oracle") {
      rep = oracle_report(a, args);
    } else {
      throw InputError("unknown method: " + args.method);
    }
    emit(rep, args);
    return rep.converged ? kExitOk : kExitNoConvergence;
  } catch (const NonConvergence& e) {
    std::cerr << "numrad: " << e.what() << '\n';
    emit(e.report(), args);
    return kExitNoConvergence;
  }
}

int run_gallery(const GalleryArgs& args) {
  GallerySpec spec;
  spec.family = args.family;
  spec.n = args.n;
  if ((spec.family == "t_mu" || spec.family == "random_complex") && !args.seed)
    throw InputError(spec.family + " is randomized and requires --seed");
  spec.seed = args.seed.value_or(0);
  auto put = [&](const char* key, auto v) {
    if (v) spec.params[key] = static_cast<double>(*v);
  };
  put("mu", args.mu);
  put("s", args.s);
  put("r_tilde", args.r_tilde);
  put("phase", args.phase);
  put("k", args.k);
  put("i", args.i);
  put("j", args.j);
  const ComplexMatrix a = make_gallery(spec);
  if (args.out.empty()) {
    write_matrix_market(a, std::cout);
  } else {
    write_matrix_market(a, args.out);
  }
  return kExitOk;
}

int run_rates(const RatesArgs& args) {
  const RateReport rr = rates(args.mu);
  const auto uh = simulate_uhlig_recursion(args.mu, args.phi0, args.steps);
  std::vector<double> op;
  if (args.mu > 0.0 && args.mu < 1.0 && args.phi0 < kPi / 2.0)
    op = simulate_optimal_recursion(1.0 - args.mu, args.mu, args.phi0, args.steps);

  std::cout << std::setprecision(17);
  std::cout << "step,phi_uhlig,ratio_uhlig,modulus_ratio_uhlig,phi_optimal,ratio_optimal,"
               "uhlig_angle_rate,uhlig_modulus_rate,optimal_angle_rate\n";
  auto sec_m1 = [](double p) { return 2.0 * std::pow(std::sin(p / 2.0), 2) / std::cos(p); };
  for (int k = 0; k <= args.steps; ++k) {
    std::cout << k << ',' << uh[k] << ',';
    if (k > 0) std::cout << uh[k] / uh[k - 1];
    std::cout << ',';
    // corner modulus error after step k is sec(phi_{k+1}) - 1
    if (k > 0 && k < args.steps) std::cout << sec_m1(uh[k + 1]) / sec_m1(uh[k]);
    std::cout << ',';
    if (!op.empty()) {
      std::cout << op[k] << ',';
      if (k > 0) std::cout << op[k] / op[k - 1];
    } else {
      std::cout << ',';
    }
    std::cout << ',' << rr.uhlig_angle_rate << ',' << rr.uhlig_modulus_rate << ',';
    if (std::isfinite(rr.optimal_angle_rate)) std::cout << rr.optimal_angle_rate;
    std::cout << '\n';
  }
  return kExitOk;
}

int run_disk_cost(const DiskCostArgs& args) {
  std::cout << "tol,minimum";
  for (int j : args.start_j) std::cout << ",from_G" << j;
  std::cout << '\n' << std::setprecision(6);
  for (double tau : args.tol) {
    std::cout << tau << ',' << disk_min_planes(tau);
    for (int j : args.start_j) {
      // a start polygon that already meets tau needs no refinement
      std::cout << ',' << (tau >= disk_rel_error(j) ? j : disk_refined_planes(j, tau));
    }
    std::cout << '\n';
  }
  return kExitOk;
}

int run_calibrate(const CalibrateArgs& args) {
  write_text(args.out, cost_model_to_json(calibrate(args.n, args.samples)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical radius of dense complex matrices"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Compute r(A) for a Matrix Market file");
  compute->add_option("--input", ca.input, "Matrix Market file")->required();
  compute->add_option("--method", ca.method, "hybrid, levelset, cutting or oracle")
      ->check(CLI::IsMember({"hybrid", "levelset", "cutting", "oracle"}));
  compute->add_option("--tol", ca.tol, "Relative tolerance");
  compute->add_option("--out", ca.out, "Write the JSON report here instead of stdout");
  compute->add_option("--seed", ca.seed, "Seed (no solver path is randomized)");
  compute->add_option("--max-cuts", ca.max_cuts, "Cut budget for cutting/hybrid");
  compute->add_flag("--no-dual-cuts", ca.no_dual, "Use only lambda_max supports");
  compute->add_flag("--bbbs-only", ca.bbbs_only, "Level-set iteration without local optimization");
  compute->add_option("--cost-model", ca.cost_model, "CostModel JSON (default $NUMRAD_COST_MODEL)");
  compute->add_option("--trace", ca.trace, "Write a CSV trace of cuts / level-set iterations");
  compute->add_option("--grid", ca.grid, "Oracle grid size");
  compute->add_option("--refine", ca.refine, "Oracle golden-section steps");

  GalleryArgs ga;
  auto* gallery = app.add_subcommand("gallery", "Write a test matrix in Matrix Market format");
  gallery->add_option("family", ga.family, "Matrix family")
      ->required()
      ->check(CLI::IsMember(gallery_families()));
  gallery->add_option("--n", ga.n, "Dimension");
  gallery->add_option("--mu", ga.mu, "mu (nearly_disk, t_mu)");
  gallery->add_option("--s", ga.s, "Shift s (disk_model)");
  gallery->add_option("--r-tilde", ga.r_tilde, "Radius (disk_model)");
  gallery->add_option("--phase", ga.phase, "Rotation (nearly_disk)");
  gallery->add_option("--k", ga.k, "Superdiagonals (grcar)");
  gallery->add_option("--i", ga.i, "Corner parameter i (gear)");
  gallery->add_option("--j", ga.j, "Corner parameter j (gear)");
  gallery->add_option("--seed", ga.seed, "Seed for randomized families");
  gallery->add_option("--out", ga.out, "Output path (default stdout)");

  RatesArgs ra;
  auto* rates_cmd = app.add_subcommand("rates", "Simulated cut recursions vs closed-form rates");
  rates_cmd->add_option("--mu", ra.mu, "Normalized curvature")->check(CLI::Range(0.0, 1.0));
  rates_cmd->add_option("--phi0", ra.phi0, "Starting angle");
  rates_cmd->add_option("--steps", ra.steps, "Recursion steps")->check(CLI::NonNegativeNumber);

  DiskCostArgs da;
  auto* disk = app.add_subcommand("disk-cost", "Supporting lines needed for a disk");
  disk->add_option("--tol", da.tol, "Relative tolerance(s)");
  disk->add_option("--start-j", da.start_j, "Starting regular polygon(s)");

  CalibrateArgs cb;
  auto* cal = app.add_subcommand("calibrate", "Time the two eigenvalue kernels");
  cal->add_option("--n", cb.n, "Dimension")->check(CLI::PositiveNumber);
  cal->add_option("--samples", cb.samples, "Timed runs per kernel")->check(CLI::Range(3, 1000));
  cal->add_option("--out", cb.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*compute) return run_compute(ca);
    if (*gallery) return run_gallery(ga);
    if (*rates_cmd) return run_rates(ra);
    if (*disk) return run_disk_cost(da);
    if (*cal) return run_calibrate(cb);
  } catch (const InputError& e) {
    std::cerr << "numrad: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "numrad: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "numrad: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
