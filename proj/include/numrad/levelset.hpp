#pragma once

#include <optional>
#include <vector>

#include "numrad/local_opt.hpp"
#include "numrad/report.hpp"

namespace numrad {

struct Pencil {
  ComplexMatrix r;  ///< [[2 gamma I, -A^*], [I, 0]]
  ComplexMatrix s;  ///< [[A, 0], [0, I]]
};

Pencil build_pencil(const ComplexMatrix& a, double gamma);

/// Maps Arg(lambda) in (-pi, pi] to the H(theta) angle in [0, pi).
double remap_f(double arg);

/// Relative slack on |lambda| = 1 for a pencil eigenvalue to count as unimodular.
inline constexpr double kTolUnimodular = 1e-8;

struct LevelSetAngles {
  std::vector<double> angles;  ///< sorted, in [0, pi), deduplicated
  bool singular = false;
};

/// Angles theta in [0, pi) at which gamma is an eigenvalue of +-H(theta),
/// from one generalized eigenvalue solve.
LevelSetAngles unimodular_angles(const ComplexMatrix& a, double gamma,
                                 double tol_uni = kTolUnimodular);

struct LevelSetOptions {
  double tol = 1e-14;
  std::vector<double> seeds;  ///< extra starting angles (any real; reduced mod pi)
  double gamma_floor = 0.0;   ///< known lower bound on r(A), e.g. from a warm start
  bool bbbs_only = false;     ///< skip local optimization
  int max_outer = 50;
  double tol_uni = kTolUnimodular;
  std::optional<OptOptions> opt;  ///< default_opt_options(n) when unset
};

/// Improved level-set iteration. Throws NonConvergence when the outer cap is hit.
SolveReport algorithm1(const ComplexMatrix& a, const LevelSetOptions& opts);
SolveReport algorithm1(const ComplexMatrix& a, double tol = 1e-14,
                       const std::vector<double>& seeds = {});

/// Newton (second derivatives) up to n = 800, secant beyond.
OptOptions default_opt_options(Eigen::Index n);

}  // namespace numrad
