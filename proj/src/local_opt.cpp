#include "numrad/local_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace numrad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double eig_scale(const HermitianEigen& eig) {
  return std::max({std::fabs(eig.lambda_max()), std::fabs(eig.lambda_min()),
                   std::numeric_limits<double>::min()});
}

void require_simple(const RhoEval& ev) {
  if (!attaining_simple(ev))
    throw DerivativeUndefined("attaining eigenvalue of H(theta) is not simple");
}

// One iterate of the maximizer: an evaluation plus whatever derivatives exist.
struct Point {
  RhoEval ev;
  std::optional<double> d1;
  std::optional<double> d2;
};

}  // namespace

bool attaining_simple(const RhoEval& ev) {
  const Eigen::Index n = ev.eig.values.size();
  if (n <= 1) return true;
  const double gap = ev.sign > 0 ? ev.eig.values(0) - ev.eig.values(1)
                                 : ev.eig.values(n - 2) - ev.eig.values(n - 1);
  return gap > kTolGap * eig_scale(ev.eig);
}

double rho_first_derivative(const ComplexMatrix& a, const RhoEval& ev) {
  require_simple(ev);
  const ComplexVector x = ev.vector();
  const ComplexVector y = build_dH(a, ev.theta) * x;
  return ev.sign * x.dot(y).real();
}

double rho_second_derivative(const ComplexMatrix& a, const RhoEval& ev) {
  require_simple(ev);
  const Eigen::Index n = ev.eig.values.size();
  const Eigen::Index j = ev.index();
  const double lj = ev.eig.values(j);
  // H'' = -H, so x_j^* H'' x_j = -lambda_j
  double second = -lj;
  if (n > 1) {
    const ComplexVector y = build_dH(a, ev.theta) * ev.eig.vectors.col(j);
    const ComplexVector c = ev.eig.vectors.adjoint() * y;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      second += 2.0 * std::norm(c(k)) / (lj - ev.eig.values(k));
    }
  }
  return ev.sign * second;
}

double rho_first_derivative(const ComplexMatrix& a, double theta) {
  return rho_first_derivative(a, rho_H(a, theta));
}

double rho_second_derivative(const ComplexMatrix& a, double theta) {
  return rho_second_derivative(a, rho_H(a, theta));
}

Visit make_visit(const ComplexMatrix& a, const RhoEval& ev) {
  auto [hi, lo] = supports_of(a, ev);
  return {ev.theta, ev.value, ev.sign, std::move(hi), std::move(lo)};
}

OptResult maximize_rho(const ComplexMatrix& a, double theta0, std::optional<Bracket> bracket,
                       const OptOptions& opts) {
  require_valid(a);
  return maximize_rho(a, rho_H(a, theta0), bracket, opts);
}

OptResult maximize_rho(const ComplexMatrix& a, const RhoEval& start,
                       std::optional<Bracket> bracket, const OptOptions& opts) {
  require_valid(a);
  OptResult res;
  const double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf;
  if (bracket) {
    lo = std::min(bracket->first, bracket->second);
    hi = std::max(bracket->first, bracket->second);
    if (start.theta < lo || start.theta > hi)
      throw InputError("maximize_rho: bracket does not contain the start angle");
  }
  double trust = bracket ? std::max(hi - lo, 1e-12) / 2.0 : opts.initial_trust.value_or(kPi / 4.0);

  auto analyse = [&](RhoEval ev) {
    Point p{std::move(ev), std::nullopt, std::nullopt};
    res.visited.push_back(make_visit(a, p.ev));
    if (attaining_simple(p.ev)) {
      p.d1 = rho_first_derivative(a, p.ev);
      if (opts.newton) p.d2 = rho_second_derivative(a, p.ev);
    }
    return p;
  };
  auto evaluate = [&](double theta) { return analyse(rho_H(a, theta)); };

  Point cur = analyse(start);
  std::optional<Point> prev;
  double best_theta = cur.ev.theta, best_value = cur.ev.value;
  int best_sign = cur.ev.sign;

  for (int it = 0; it < opts.max_iter; ++it) {
    const double tol_d1 = 1e-14 * (1.0 + cur.ev.value);
    const double curv_scale = std::max(cur.ev.value, std::numeric_limits<double>::min());

    double step;
    if (cur.d1) {
      const double g = *cur.d1;
      std::optional<double> curv = cur.d2;
      if (!opts.newton && prev && prev->d1 && prev->ev.theta != cur.ev.theta)
        curv = (g - *prev->d1) / (cur.ev.theta - prev->ev.theta);
      if (std::fabs(g) <= tol_d1) {
        // stationary: done unless this is visibly a minimum
        if (!curv || *curv <= 1e-8 * curv_scale) {
          res.converged = true;
          break;
        }
        step = trust;
      } else if (curv && *curv < 0.0) {
        step = -g / *curv;
      } else {
        step = std::copysign(trust, g);
      }
    } else {
      // Non-smooth point: probe both sides and keep the better one.
      const double h = trust / 2.0;
      if (h <= 1e-15 * std::max(1.0, std::fabs(cur.ev.theta))) {
        res.converged = true;
        break;
      }
      std::optional<Point> winner;
      for (double s : {h, -h}) {
        double t = cur.ev.theta + s;
        if (t <= lo || t >= hi) continue;
        Point p = evaluate(t);
        ++res.iterations;
        if (p.ev.value > best_value) {
          best_value = p.ev.value;
          best_theta = p.ev.theta;
          best_sign = p.ev.sign;
        }
        if (p.ev.value > cur.ev.value && (!winner || p.ev.value > winner->ev.value))
          winner = std::move(p);
      }
      if (winner) {
        prev = std::move(cur);
        cur = std::move(*winner);
      } else {
        trust /= 4.0;
      }
      continue;
    }

    if (std::fabs(step) > trust) step = std::copysign(trust, step);
    double target = cur.ev.theta + step;
    if (target <= lo) target = 0.5 * (cur.ev.theta + lo);
    if (target >= hi) target = 0.5 * (cur.ev.theta + hi);
    step = target - cur.ev.theta;
    if (std::fabs(step) <= 1e-15 * std::max(1.0, std::fabs(cur.ev.theta))) {
      res.converged = true;
      break;
    }

    Point trial = evaluate(target);
    ++res.iterations;
    if (trial.ev.value > best_value) {
      best_value = trial.ev.value;
      best_theta = trial.ev.theta;
      best_sign = trial.ev.sign;
    }
    const double noise = 16.0 * kEps * std::max(cur.ev.value, trial.ev.value);
    if (trial.ev.value >= cur.ev.value - noise) {
      if (trial.d1 && cur.d1 && std::signbit(*trial.d1) != std::signbit(*cur.d1)) {
        // passed a stationary point: it is now bracketed
        if (step > 0.0) {
          lo = std::max(lo, cur.ev.theta);
          hi = std::min(hi, trial.ev.theta);
        } else {
          lo = std::max(lo, trial.ev.theta);
          hi = std::min(hi, cur.ev.theta);
        }
      }
      trust = std::max(trust, 2.0 * std::fabs(step));
      if (std::isfinite(hi - lo)) trust = std::min(trust, hi - lo);
      prev = std::move(cur);
      cur = std::move(trial);
    } else {
      // ascent direction but the value fell: the maximizer is short of target
      if (step > 0.0) hi = std::min(hi, trial.ev.theta);
      else lo = std::max(lo, trial.ev.theta);
      trust = std::fabs(step) / 2.0;
    }
  }

  res.theta_star = best_theta;
  res.gamma = best_value;
  res.sign = best_sign;
  return res;
}

}  // namespace numrad
