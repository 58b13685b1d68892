#include "numrad/cutting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace numrad {

namespace {

// Angle in (-pi, pi].
double wrap_pi(double t) {
  double r = std::remainder(t, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

CutPlan reject(CutPlan plan, const char* why) {
  plan.kind = "uhlig";
  plan.theta_cut = std::numeric_limits<double>::quiet_NaN();
  plan.reason = why;
  return plan;
}

}  // namespace

double uhlig_cut(Complex c) {
  if (c == Complex(0.0, 0.0)) throw DomainError("cannot cut a corner at the origin");
  return wrap_2pi(-std::arg(c));
}

Complex FrameTransform::apply(Complex z) const {
  const Complex w = std::polar(1.0, rotation) * z;
  return reflect ? std::conj(w) : w;
}

Complex FrameTransform::invert(Complex z) const {
  const Complex w = reflect ? std::conj(z) : z;
  return std::polar(1.0, -rotation) * w;
}

double FrameTransform::apply_angle(double theta) const {
  const double t = wrap_pi(theta - rotation);
  return reflect ? wrap_pi(-t) : t;
}

double FrameTransform::invert_angle(double theta) const {
  return wrap_2pi((reflect ? -theta : theta) + rotation);
}

SupportPoint FrameTransform::apply(const SupportPoint& sp) const {
  SupportPoint out;
  out.theta = apply_angle(sp.theta);
  out.lambda = sp.lambda;
  out.z = apply(sp.z);
  return out;
}

FrameTransform normalize_frame(Complex b_star, Complex b_j) {
  FrameTransform t;
  t.rotation = -arg0(b_star);
  t.reflect = (std::polar(1.0, t.rotation) * b_j).imag() < 0.0;
  return t;
}

std::optional<Complex> point_on_line_with_modulus(const SupportPoint& sp, double gamma,
                                                  Complex toward) {
  if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
  const double disc = gamma * gamma - sp.lambda * sp.lambda;
  if (disc < 0.0) return std::nullopt;
  const double t = std::sqrt(disc);
  const Complex rot = std::polar(1.0, -sp.theta);
  const Complex p = rot * Complex(sp.lambda, t);
  const Complex m = rot * Complex(sp.lambda, -t);
  return std::abs(p - toward) < std::abs(m - toward) ? p : m;
}

QuadraticFit fit_quadratic(double gamma, Complex b_j, double theta_j, double eta) {
  QuadraticFit f;
  f.q0 = gamma;
  const double y = b_j.imag();
  if (!(y > 1e-14 * std::max(gamma, 1.0))) return f;
  f.q2 = (b_j.real() - gamma) / (y * y);
  const double slope = std::tan(theta_j);
  f.residual = std::fabs(2.0 * f.q2 * y - slope);
  if (f.q2 < 0.0) {
    f.mu_est = std::min(1.0, 1.0 / (2.0 * std::fabs(f.q2) * gamma));
    f.fit_ok = f.residual <= eta * (1.0 + std::fabs(slope));
  } else {
    // flat (or outward-bent) data: infinite radius of curvature
    f.mu_est = 1.0;
  }
  return f;
}

CutPlan optimal_cut(const SupportPoint& b_star, const SupportPoint& b_j, double gamma,
                    double delta) {
  CutPlan plan;
  if (b_star.z == Complex(0.0, 0.0)) return reject(plan, "degenerate");
  const FrameTransform frame = normalize_frame(b_star.z, b_j.z);
  const SupportPoint bs = frame.apply(b_star);
  const SupportPoint bj = frame.apply(b_j);

  const QuadraticFit fit = fit_quadratic(gamma, bj.z, bj.theta);
  plan.mu_est = fit.mu_est;
  if (fit.mu_est) plan.fit_residual = fit.residual;

  if (std::fabs(bs.theta) > 1e-6) return reject(plan, "not_stationary");
  if (!(bj.theta > -kPi / 2.0 && bj.theta < 0.0)) return reject(plan, "frame_angle");
  if (!fit.mu_est) return reject(plan, "degenerate");
  if (!fit.fit_ok) return reject(plan, "fit");
  if (*fit.mu_est >= kCrossoverMu) return reject(plan, "crossover");

  auto d0 = point_on_line_with_modulus(bj, gamma, Complex(gamma, 0.0));
  if (!d0) return reject(plan, "no_point");
  const Complex d = (1.0 - delta) * *d0 + delta * bj.z;
  if (!(d.imag() > 0.0)) return reject(plan, "no_point");

  const double disc = d.imag() * d.imag() + (fit.q0 - d.real()) / fit.q2;
  if (disc < 0.0) return reject(plan, "no_tangent");
  const double y_t = d.imag() - std::sqrt(disc);
  const double a0 = -fit.q2 * y_t * y_t + fit.q0;
  const double a1 = (d.real() - a0) / d.imag();
  const double phi = std::atan(a1);
  if (!(phi > bj.theta && phi < 0.0)) return reject(plan, "not_between");

  plan.kind = "optimal";
  plan.theta_cut = frame.invert_angle(phi);
  return plan;
}

CuttingPlane::CuttingPlane(const ComplexMatrix& a, CuttingOptions opts)
    : a_(a), opts_(std::move(opts)) {
  require_valid(a);
  if (!(opts_.tol > 0.0)) throw InputError("tol must be positive");
  opt_ = opts_.opt.value_or(OptOptions{});
  if (!opts_.opt) opt_.newton = a.rows() <= 800;
  max_cuts_ = opts_.max_cuts < 0 ? 10 * static_cast<long>(a.rows()) + 10000 : opts_.max_cuts;
  poly_ = polygon_init(a, arg0(dominant_eigenvalue(a)), opts_.dual_cuts);
  notify(nullptr);
}

void CuttingPlane::notify(const CutRecord* rec) {
  if (opts_.on_iteration) opts_.on_iteration(poly_, rec);
}

std::size_t CuttingPlane::best_index() const {
  return poly_.find(poly_.best().theta).value_or(0);
}

void CuttingPlane::insert_eval(const HermitianEigen& eig, double theta, bool dual) {
  poly_.insert(support_from_eig(a_, theta, eig, Extreme::max));
  if (dual) poly_.insert(support_from_eig(a_, theta, eig, Extreme::min));
}

void CuttingPlane::optimize_best() {
  const double tb = poly_.best().theta;
  for (double t : optimized_)
    if (circular_distance(t, tb) <= kTolAngle) return;
  optimized_.push_back(tb);

  // The arguments of the two corners next to b_star size the first step. They
  // are not a hard bracket: the local maximizer of h can lie beyond them.
  OptOptions opt = opt_;
  if (auto ib = poly_.find(tb); ib && poly_.size() >= 3) {
    const std::size_t j = poly_.size();
    double lo = tb, hi = tb;
    for (std::size_t k : {(*ib + j - 1) % j, *ib}) {
      const Complex c = poly_.corners()[k];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || c == Complex(0.0, 0.0)) continue;
      const double u = tb + wrap_pi(uhlig_cut(c) - tb);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    if (hi - lo > 1e-14) opt.initial_trust = (hi - lo) / 2.0;
  }

  const OptResult res = maximize_rho(a_, tb, std::nullopt, opt);
  for (const Visit& v : res.visited) {
    if (opts_.dual_cuts) {
      poly_.insert(v.upper);
      poly_.insert(v.lower);
    } else {
      poly_.insert(v.attaining());
    }
  }
  optimized_.push_back(res.support_theta());
  notify(nullptr);
}

bool CuttingPlane::step() {
  if (converged()) return false;
  optimize_best();
  if (converged()) return false;

  const std::size_t j = poly_.size();
  const auto outer = poly_.outermost_corner();
  const std::size_t ib = best_index();
  const std::size_t kl = (ib + j - 1) % j;  // corner between ib - 1 and ib
  const std::size_t kr = ib;                // corner between ib and ib + 1
  const auto& pts = poly_.points();
  const double l = poly_.lower();
  const SupportPoint& bstar = pts[ib];
  // b_star's own point may be stored under a merged support; use the best point
  SupportPoint bs = bstar;
  bs.z = poly_.best().z;

  auto plan_for = [&](std::size_t k) {
    const std::size_t nb = k == kl ? (ib + j - 1) % j : (ib + 1) % j;
    return optimal_cut(bs, pts[nb], l);
  };

  CutPlan attempt;
  attempt.kind = "uhlig";
  if (opts_.optimal_cuts && j >= 3) {
    const std::size_t region =
        std::abs(poly_.corners()[kl]) >= std::abs(poly_.corners()[kr]) ? kl : kr;
    attempt = plan_for(region);
    last_mu_ = attempt.mu_est;
    if (outer.left != region && (outer.left == kl || outer.left == kr)) {
      CutPlan other = plan_for(outer.left);
      other.mu_est = attempt.mu_est;
      attempt = other;
    } else if (outer.left != kl && outer.left != kr) {
      attempt.kind = "uhlig";
      attempt.reason = "not_adjacent";
    }
  } else {
    attempt.reason = "disabled";
  }

  double theta;
  std::string kind;
  if (attempt.kind == "optimal") {
    theta = attempt.theta_cut;
    kind = "optimal";
  } else {
    theta = uhlig_cut(outer.point);
    kind = "uhlig";
  }

  const HermitianEigen eig = hermitian_eig(build_H(a_, theta), EigMode::extremes);
  insert_eval(eig, theta, opts_.dual_cuts);

  CutRecord rec;
  rec.iter = static_cast<int>(log_.size()) + 1;
  rec.kind = kind;
  rec.theta_cut = theta;
  rec.mu_est = attempt.mu_est;
  if (kind != "optimal") rec.reason = attempt.reason;
  rec.l = poly_.lower();
  rec.u = poly_.upper();
  rec.eps = poly_.rel_error();
  log_.push_back(rec);
  notify(&log_.back());
  return true;
}

SolveReport algorithm2(const ComplexMatrix& a, const CuttingOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const CountScope counts;
  CuttingPlane cp(a, opts);

  auto report = [&] {
    SolveReport rep;
    rep.method = "cutting";
    rep.tol = opts.tol;
    const auto& g = cp.polygon();
    rep.lower = g.lower();
    rep.r = g.lower();
    rep.upper = g.upper();
    rep.rel_err = g.rel_error();
    rep.cuts = cp.log();
    rep.converged = cp.converged();
    const KernelCounts d = counts.delta();
    rep.eigH_count = d.hermitian;
    rep.pencil_count = d.pencil;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };

  int stalled = 0;
  while (!cp.converged()) {
    if (cp.cuts() >= cp.max_cuts())
      throw NonConvergence("cutting-plane method hit the cut budget of " +
                               std::to_string(cp.max_cuts()),
                           report());
    const double before = cp.polygon().rel_error();
    const std::size_t size_before = cp.polygon().size();
    if (!cp.step()) break;
    if (cp.polygon().rel_error() >= before && cp.polygon().size() == size_before) {
      if (++stalled >= 3)
        throw NonConvergence("cutting-plane method stalled: cuts no longer change the polygon",
                             report());
    } else {
      stalled = 0;
    }
  }
  return report();
}

}  // namespace numrad
