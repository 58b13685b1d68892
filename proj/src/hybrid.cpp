#include "numrad/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "numrad/theory.hpp"

namespace numrad {

namespace {

template <class F>
double time_once(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double trimmed_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  if (v.size() >= 3) v = std::vector<double>(v.begin() + 1, v.end() - 1);
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

CostModel calibrate(long n, int samples, std::uint64_t seed) {
  if (n < 1) throw InputError("calibrate needs n >= 1");
  if (samples < 3) throw InputError("calibrate needs at least 3 samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(nd(rng), nd(rng));

  const ComplexMatrix h = build_H(a, 0.3);
  const Pencil p = build_pencil(a, norm_one(a));
  std::vector<double> th, tp;
  for (int s = 0; s < samples; ++s) {
    th.push_back(time_once([&] { hermitian_eig(h); }));
    tp.push_back(time_once([&] { pencil_eig(p.r, p.s); }));
  }
  CostModel m;
  m.n = n;
  m.t_eigH = std::max(trimmed_mean(th), 1e-9);
  m.t_pencil = std::max(trimmed_mean(tp), m.t_eigH);
  return m;
}

std::string cost_model_to_json(const CostModel& m) {
  nlohmann::json j{{"n", m.n}, {"t_eigH_sec", m.t_eigH}, {"t_pencil_sec", m.t_pencil}};
  return j.dump(2);
}

CostModel cost_model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CostModel m{j.at("n").get<long>(), j.at("t_eigH_sec").get<double>(),
                j.at("t_pencil_sec").get<double>()};
    if (!(m.t_eigH > 0.0) || !(m.t_pencil >= m.t_eigH))
      throw InputError("cost model needs t_pencil_sec >= t_eigH_sec > 0");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed cost model: ") + e.what());
  }
}

CostModel load_cost_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open cost model " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return cost_model_from_json(ss.str());
}

void save_cost_model(const CostModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << cost_model_to_json(m) << '\n';
}

int cuts_at_rate(double beta, double rate, double tol) {
  if (tol >= beta - 1.0) return 0;
  if (!(rate > 0.0)) return 1;
  if (rate >= 1.0) return std::numeric_limits<int>::max();
  const double k = std::ceil((std::log(tol) - std::log(beta - 1.0)) / std::log(rate));
  return k > 1e9 ? std::numeric_limits<int>::max() : static_cast<int>(k);
}

SwitchDecision estimate_remaining(const BoundaryPolygon& g, std::size_t best_index,
                                  std::optional<double> mu_est, bool optimal_active,
                                  const CostModel& model, double tol,
                                  const LevelSetCostWeights& w) {
  SwitchDecision d;
  d.predicted_levelset_cost = w.pencil * model.t_pencil + w.eig * model.t_eigH;
  const double l = g.lower();
  const std::size_t j = g.size();
  if (j < 3 || !(l > 0.0)) return d;

  const std::size_t kl = (best_index + j - 1) % j, kr = best_index;
  double total = 0.0;
  for (std::size_t k = 0; k < j; ++k) {
    const double m = std::abs(g.corners()[k]);
    if (!(m > l * (1.0 + tol))) continue;
    const auto& p = g.points()[k];
    const auto& q = g.points()[(k + 1) % j];
    double gap = q.theta - p.theta;
    if (gap <= 0.0) gap += kTwoPi;

    RegionEstimate r;
    r.theta_lo = p.theta;
    r.theta_hi = q.theta;
    r.corner_modulus = m;
    double rate;
    if ((k == kl || k == kr) && mu_est) {
      r.mu_eff = std::clamp(*mu_est, 1e-12, 1.0);
      rate = optimal_active && r.mu_eff < kCrossoverMu
                 ? std::pow(optimal_angle_rate(r.mu_eff), 2)
                 : uhlig_modulus_rate(r.mu_eff);
    } else {
      // arc between the two known points, turning through `gap`
      r.mu_eff = std::isfinite(m) ? std::clamp(std::abs(q.z - p.z) / gap / l, 1e-12, 1.0) : 1.0;
      rate = uhlig_modulus_rate(r.mu_eff);
    }
    r.predicted_cuts = std::isfinite(m) ? cuts_at_rate(m / l, rate, tol)
                                        : std::numeric_limits<int>::max();
    total += static_cast<double>(r.predicted_cuts);
    d.per_region.push_back(r);
  }
  d.predicted_cut_cost = total * model.t_eigH;
  d.continue_cutting = d.predicted_cut_cost <= d.predicted_levelset_cost;
  return d;
}

SolveReport hybrid_solve(const ComplexMatrix& a, const HybridOptions& opts) {
  require_valid(a);
  if (!(opts.tol > 0.0)) throw InputError("tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const bool calibrated = !opts.model;
  const CostModel model = opts.model ? *opts.model : calibrate(a.rows(), 3);
  const CountScope counts;

  CuttingOptions copts = opts.cutting;
  copts.tol = opts.tol;
  CuttingPlane cp(a, copts);

  SolveReport rep;
  rep.method = "hybrid";
  rep.tol = opts.tol;
  if (calibrated) rep.flags.push_back("calibrated");

  auto finish = [&] {
    rep.cuts = cp.log();
    const KernelCounts dc = counts.delta();
    rep.eigH_count = dc.hermitian;
    rep.pencil_count = dc.pencil;
    rep.rel_err = rep.lower > 0.0 ? (rep.upper - rep.lower) / rep.lower : 0.0;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto from_polygon = [&] {
    rep.lower = rep.r = cp.polygon().lower();
    rep.upper = cp.polygon().upper();
    rep.converged = cp.converged();
  };

  while (!cp.converged()) {
    if (cp.cuts() >= cp.max_cuts()) {
      from_polygon();
      finish();
      throw NonConvergence("hybrid cutting phase hit the cut budget", rep);
    }
    if (!cp.step()) break;
    if (!cp.last_mu_est() || cp.converged()) continue;

    const auto& g = cp.polygon();
    const std::size_t ib = cp.best_index();
    SwitchDecision dec =
        estimate_remaining(g, ib, cp.last_mu_est(), copts.optimal_cuts, model, opts.tol, opts.weights);
    if (dec.continue_cutting) continue;

    // hand over, warm-started at the best point and its two neighbouring corners
    const std::size_t j = g.size();
    SwitchEvent ev;
    ev.after_cut = static_cast<int>(cp.cuts());
    ev.l = g.lower();
    ev.u = g.upper();
    ev.seeds.push_back(g.points()[ib].theta);
    for (std::size_t k : {(ib + j - 1) % j, ib}) {
      const Complex c = g.corners()[k];
      if (std::isfinite(std::abs(c)) && c != Complex(0.0, 0.0)) ev.seeds.push_back(uhlig_cut(c));
    }
    ev.decision = std::move(dec);

    LevelSetOptions lo = opts.levelset;
    lo.tol = opts.tol;
    lo.seeds.insert(lo.seeds.end(), ev.seeds.begin(), ev.seeds.end());
    lo.gamma_floor = std::max(lo.gamma_floor, g.lower());
    SolveReport ls;
    try {
      ls = algorithm1(a, lo);
    } catch (const NonConvergence& e) {
      rep.switch_event = ev;
      rep.levelset = e.report().levelset;
      rep.lower = rep.r = std::max(g.lower(), e.report().lower);
      rep.upper = e.report().upper;
      finish();
      throw NonConvergence(e.what(), rep);
    }
    rep.switch_event = std::move(ev);
    rep.levelset = ls.levelset;
    for (const auto& f : ls.flags) rep.flags.push_back(f);
    rep.flags.push_back("switched");
    rep.lower = rep.r = std::max(g.lower(), ls.lower);
    rep.upper = std::max(std::min(g.upper(), ls.upper), rep.lower);
    rep.converged = ls.converged;
    finish();
    return rep;
  }

  from_polygon();
  finish();
  return rep;
}

}  // namespace numrad
