#include "numrad/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "numrad/fov.hpp"

namespace numrad {

namespace {

double arcsec(double x) { return std::acos(1.0 / x); }

void require_mu(double mu, bool open) {
  const bool ok = open ? (mu > 0.0 && mu < 1.0) : (mu >= 0.0 && mu <= 1.0);
  if (!ok || !std::isfinite(mu))
    throw DomainError("mu = " + std::to_string(mu) + " outside " + (open ? "(0, 1)" : "[0, 1]"));
}

}  // namespace

double disk_rel_error(int j) {
  if (j < 3) throw DomainError("disk_rel_error needs j >= 3");
  return 1.0 / std::cos(kPi / j) - 1.0;
}

std::int64_t disk_min_planes(double tau) {
  if (!(tau > 0.0)) throw DomainError("disk_min_planes needs tau > 0");
  return static_cast<std::int64_t>(std::ceil(kPi / arcsec(1.0 + tau)));
}

std::int64_t disk_refined_planes(int j, double tau) {
  if (!(tau > 0.0)) throw DomainError("disk_refined_planes needs tau > 0");
  if (tau >= disk_rel_error(j)) throw DomainError("the j-gon already meets tau");
  const double d = std::ceil(std::log2(kPi / (j * arcsec(1.0 + tau))));
  return static_cast<std::int64_t>(j) << static_cast<int>(d);
}

double uhlig_angle_rate(double mu) {
  require_mu(mu, false);
  return mu / 2.0;
}

double uhlig_modulus_rate(double mu) {
  require_mu(mu, false);
  return mu * mu / 4.0;
}

double optimal_angle_rate(double mu) {
  require_mu(mu, true);
  // 2(1 - sqrt(1 - mu))/mu - 1 without the cancellation at small mu
  const double w = 1.0 + std::sqrt(1.0 - mu);
  return mu / (w * w);
}

RateReport rates(double mu) {
  RateReport rep;
  rep.mu = mu;
  rep.uhlig_angle_rate = uhlig_angle_rate(mu);
  rep.uhlig_modulus_rate = uhlig_modulus_rate(mu);
  rep.optimal_angle_rate =
      (mu > 0.0 && mu < 1.0) ? optimal_angle_rate(mu) : std::numeric_limits<double>::quiet_NaN();
  if (mu > 0.0) {
    const auto phi = simulate_uhlig_recursion(mu, kPi / 3.0, 40);
    for (std::size_t k = 1; k < phi.size(); ++k) rep.simulated_ratios.push_back(phi[k] / phi[k - 1]);
  }
  return rep;
}

std::vector<double> simulate_uhlig_recursion(double mu, double phi0, int k) {
  if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("Uhlig recursion needs mu in (0, 1]");
  if (!(phi0 > 0.0 && phi0 < kPi)) throw DomainError("Uhlig recursion needs phi0 in (0, pi)");
  if (k < 0) throw DomainError("negative step count");
  std::vector<double> phi{phi0};
  for (int i = 0; i < k; ++i) {
    const double half = phi.back() / 2.0;
    phi.push_back(mu == 1.0 ? half : std::atan(mu * std::tan(half)));
  }
  return phi;
}

double optimal_step_length(double s, double r_tilde, double phi) {
  // t = -s sin(phi) + sqrt(s^2 sin^2(phi) + 2 s r_tilde (1 - cos(phi))), rationalized
  const double sn = std::sin(phi);
  const double one_minus_cos = 2.0 * std::pow(std::sin(phi / 2.0), 2);
  const double c = 2.0 * s * r_tilde * one_minus_cos;
  const double root = std::sqrt(s * s * sn * sn + c);
  const double denom = s * sn + root;
  return denom > 0.0 ? c / denom : 0.0;
}

std::vector<double> simulate_optimal_recursion(double s, double r_tilde, double phi0, int k) {
  if (!(s > 0.0) || !(r_tilde > 0.0)) throw DomainError("optimal recursion needs s, r_tilde > 0");
  if (!(phi0 > 0.0 && phi0 < kPi / 2.0)) throw DomainError("optimal recursion needs phi0 in (0, pi/2)");
  if (k < 0) throw DomainError("negative step count");
  std::vector<double> phi{phi0};
  for (int i = 0; i < k; ++i) {
    const double p = phi.back();
    const double t = optimal_step_length(s, r_tilde, p);
    const double sn = std::sin(p), cs = std::cos(p);
    phi.push_back(-p + 2.0 * std::atan((r_tilde * sn - t * cs) / (r_tilde * cs + t * sn)));
  }
  return phi;
}

int cuts_needed(double beta, double mu, double tau) {
  if (!(tau > 0.0)) throw DomainError("cuts_needed needs tau > 0");
  if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("cuts_needed needs mu in (0, 1]");
  if (!(beta >= 1.0)) throw DomainError("cuts_needed needs beta >= 1");
  if (tau >= beta - 1.0) return 0;
  return static_cast<int>(std::ceil((std::log(tau) - std::log(beta - 1.0)) / std::log(mu * mu / 4.0)));
}

double grid_oracle(const ComplexMatrix& a, int m, int refine_iters) {
  require_valid(a);
  if (m < 8) throw DomainError("grid_oracle needs m >= 8");
  auto rho = [&](double t) { return rho_H(a, t).value; };

  const double h = kPi / m;
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < m; ++k) {
    const double v = rho(k * h);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }

  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best_k - 1) * h, hi = (best_k + 1) * h;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = rho(x1), f2 = rho(x2);
  best = std::max({best, f1, f2});
  for (int i = 0; i < refine_iters; ++i) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = rho(x1);
      best = std::max(best, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = rho(x2);
      best = std::max(best, f2);
    }
  }
  return best;
}

}  // namespace numrad
