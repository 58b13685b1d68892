#include "numrad/levelset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace numrad {

namespace {

double mod_pi(double t) {
  double r = std::fmod(t, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

double distance_mod_pi(double a, double b) {
  const double d = std::fabs(mod_pi(a) - mod_pi(b));
  return std::min(d, kPi - d);
}

// Sorts and drops entries within kTolAngle of their predecessor (cyclically).
void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double t : v)
    if (out.empty() || t - out.back() > kTolAngle) out.push_back(t);
  if (out.size() > 1 && distance_mod_pi(out.front(), out.back()) <= kTolAngle) out.pop_back();
  v = std::move(out);
}

struct Candidate {
  double theta;
  RhoEval ev;
};

}  // namespace

OptOptions default_opt_options(Eigen::Index n) {
  OptOptions o;
  o.newton = n <= 800;
  return o;
}

Pencil build_pencil(const ComplexMatrix& a, double gamma) {
  require_valid(a);
  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  Pencil p;
  p.r = ComplexMatrix::Zero(2 * n, 2 * n);
  p.r.topLeftCorner(n, n) = 2.0 * gamma * eye;
  p.r.topRightCorner(n, n) = -a.adjoint();
  p.r.bottomLeftCorner(n, n) = eye;
  p.s = ComplexMatrix::Zero(2 * n, 2 * n);
  p.s.topLeftCorner(n, n) = a;
  p.s.bottomRightCorner(n, n) = eye;
  return p;
}

double remap_f(double arg) {
  if (arg == 0.0 || arg == kPi || arg == -kPi) return 0.0;
  return arg < 0.0 ? arg + kPi : arg;
}

LevelSetAngles unimodular_angles(const ComplexMatrix& a, double gamma, double tol_uni) {
  if (!(gamma >= 0.0)) throw DomainError("unimodular_angles needs gamma >= 0");
  const Pencil p = build_pencil(a, gamma);
  const PencilEigenvalues ev = pencil_eig(p.r, p.s);
  LevelSetAngles out;
  out.singular = ev.singular;
  for (const Complex& lam : ev.finite)
    if (std::fabs(std::abs(lam) - 1.0) <= tol_uni) out.angles.push_back(remap_f(std::arg(lam)));
  sort_unique(out.angles);
  return out;
}

SolveReport algorithm1(const ComplexMatrix& a, double tol, const std::vector<double>& seeds) {
  LevelSetOptions o;
  o.tol = tol;
  o.seeds = seeds;
  return algorithm1(a, o);
}

SolveReport algorithm1(const ComplexMatrix& a, const LevelSetOptions& opts) {
  require_valid(a);
  if (!(opts.tol > 0.0)) throw InputError("tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const CountScope counts;
  const OptOptions opt = opts.opt.value_or(default_opt_options(a.rows()));

  SolveReport rep;
  rep.method = opts.bbbs_only ? "levelset-bbbs" : "levelset";
  rep.tol = opts.tol;
  rep.levelset.emplace();

  auto finish = [&](double lower, double upper) {
    rep.lower = lower;
    rep.r = lower;
    rep.upper = upper;
    rep.rel_err = lower > 0.0 ? (upper - lower) / lower : 0.0;
    const KernelCounts d = counts.delta();
    rep.eigH_count = d.hermitian;
    rep.pencil_count = d.pencil;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  std::vector<double> start{0.0, remap_f(arg0(dominant_eigenvalue(a)))};
  for (double s : opts.seeds) start.push_back(mod_pi(s));
  sort_unique(start);

  std::vector<Candidate> cands;
  for (double t : start) cands.push_back({t, rho_H(a, t)});

  double lower = 0.0;  // largest rho value actually attained
  double gamma = 0.0;
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    const Candidate* pick = &cands.front();
    for (const auto& c : cands)
      if (c.ev.value > pick->ev.value || (c.ev.value == pick->ev.value && c.theta < pick->theta))
        pick = &c;

    double gamma_star = pick->ev.value;
    double theta_star = pick->theta;
    if (!opts.bbbs_only) {
      const OptResult res = maximize_rho(a, pick->ev, std::nullopt, opt);
      gamma_star = res.gamma;
      theta_star = res.theta_star;
    }
    lower = std::max(lower, gamma_star);
    gamma = std::max({gamma_star, opts.gamma_floor, gamma}) * (1.0 + opts.tol);

    LevelSetRecord rec;
    rec.iter = outer;
    rec.gamma = gamma;
    rec.theta_star = mod_pi(theta_star);

    LevelSetAngles lv = unimodular_angles(a, gamma, opts.tol_uni);
    if (lv.singular) {
      // gamma is an eigenvalue of H(theta) for every theta: the level set
      // carries no information, and rho is (numerically) flat at this level
      rec.singular = true;
      rep.levelset->push_back(rec);
      if (!rep.has_flag("disk_detected")) rep.flags.push_back("disk_detected");
      rep.converged = true;
      finish(lower, gamma);
      return rep;
    }

    auto& th = lv.angles;
    const bool present = std::any_of(th.begin(), th.end(), [&](double t) {
      return distance_mod_pi(t, rec.theta_star) <= 10.0 * kTolAngle;
    });
    if (!present) {
      rec.safeguard = true;
      th.push_back(rec.theta_star);
      sort_unique(th);
    }
    rec.angles = static_cast<int>(th.size());

    cands.clear();
    for (std::size_t k = 0; k < th.size(); ++k) {
      // consecutive pairs, including the wrap-around from the last angle to the first + pi
      const double lo = th[k];
      const double hi = k + 1 < th.size() ? th[k + 1] : th.front() + kPi;
      const double mid = mod_pi(0.5 * (lo + hi));
      RhoEval ev = rho_H(a, mid);
      if (ev.value > gamma) cands.push_back({mid, std::move(ev)});
    }
    rec.candidates = static_cast<int>(cands.size());
    rep.levelset->push_back(rec);

    if (cands.empty()) {
      rep.converged = true;
      finish(lower, gamma);
      return rep;
    }
  }

  finish(lower, gamma);
  throw NonConvergence("level-set iteration did not converge within " +
                           std::to_string(opts.max_outer) + " outer iterations",
                       rep);
}

}  // namespace numrad
