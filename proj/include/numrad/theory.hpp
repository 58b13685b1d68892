#pragma once

#include <cstdint>
#include <vector>

#include "numrad/linalg.hpp"

namespace numrad {

/// Relative error (u - l)/l of the regular j-gon circumscribing a disk: sec(pi/j) - 1.
double disk_rel_error(int j);

/// Fewest supporting lines that bring a disk to relative error tau.
std::int64_t disk_min_planes(double tau);

/// Supporting lines reached by repeated doubling of a regular j-gon until the
/// error drops to tau: j * 2^d.
std::int64_t disk_refined_planes(int j, double tau);

/// Asymptotic rates for normalized curvature mu.
struct RateReport {
  double mu = 0.0;
  double uhlig_angle_rate = 0.0;    ///< mu / 2
  double uhlig_modulus_rate = 0.0;  ///< mu^2 / 4
  double optimal_angle_rate = 0.0;  ///< 2(1 - sqrt(1 - mu))/mu - 1, NaN when mu is 0 or 1
  std::vector<double> simulated_ratios;
};

RateReport rates(double mu);

double uhlig_angle_rate(double mu);
double uhlig_modulus_rate(double mu);
double optimal_angle_rate(double mu);

/// phi_{k+1} = arctan(mu tan(phi_k / 2)); returns phi_0 .. phi_k.
std::vector<double> simulate_uhlig_recursion(double mu, double phi0, int k);

/// Angle recursion of repeated optimal cuts on the disk of radius r_tilde
/// centred at s > 0. Returns phi_0 .. phi_k.
std::vector<double> simulate_optimal_recursion(double s, double r_tilde, double phi0, int k);

/// Distance t along the support line from b_j (at angle phi) to the point of
/// modulus s + r_tilde, for the disk model.
double optimal_step_length(double s, double r_tilde, double phi);

/// Uhlig cuts needed to reduce a corner with |c| = beta * r to relative error tau.
int cuts_needed(double beta, double mu, double tau);

/// Brute-force reference: max of rho(H(theta)) on m uniform angles in [0, pi)
/// followed by golden-section refinement around the best cell.
double grid_oracle(const ComplexMatrix& a, int m = 720, int refine_iters = 60);

}  // namespace numrad
