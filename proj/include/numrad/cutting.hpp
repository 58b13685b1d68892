#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "numrad/local_opt.hpp"
#include "numrad/report.hpp"

namespace numrad {

/// theta = -Arg(c) in [0, 2 pi).
double uhlig_cut(Complex c);

/// Rotation by `rotation` followed by optional complex conjugation.
struct FrameTransform {
  double rotation = 0.0;
  bool reflect = false;

  Complex apply(Complex z) const;
  Complex invert(Complex z) const;
  /// Support angles transform as theta -> +-(theta - rotation).
  double apply_angle(double theta) const;
  double invert_angle(double theta) const;
  SupportPoint apply(const SupportPoint& sp) const;
};

/// Puts b_star on the positive real axis and b_j in the upper half plane.
FrameTransform normalize_frame(Complex b_star, Complex b_j);

/// Point d on the support line of `sp` with |d| = gamma, taking the root
/// closer to `toward`. None when the line lies farther than gamma from 0.
std::optional<Complex> point_on_line_with_modulus(const SupportPoint& sp, double gamma,
                                                  Complex toward);

struct QuadraticFit {
  double q2 = 0.0;
  double q0 = 0.0;
  double residual = 0.0;  ///< |q'(Im b_j) - tan(theta_j)|
  bool fit_ok = false;
  std::optional<double> mu_est;
};

inline constexpr double kFitTolerance = 0.1;
inline constexpr double kCrossoverMu = 0.999961;
inline constexpr double kCutShift = 1e-3;

/// Sideways parabola x = q2 y^2 + q0 through (gamma, 0) and b_j, both in the
/// normalized frame; theta_j is b_j's framed support angle.
QuadraticFit fit_quadratic(double gamma, Complex b_j, double theta_j, double eta = kFitTolerance);

struct CutPlan {
  std::string kind;  ///< "optimal" or "uhlig"
  double theta_cut = 0.0;
  std::optional<double> mu_est;
  std::optional<double> fit_residual;
  std::optional<std::string> reason;  ///< set when the optimal construction was rejected
};

/// Optimal cut between the locally outermost point b_star (|b_star| = gamma)
/// and its neighbour b_j. Any failed precondition returns kind "uhlig" with
/// theta_cut = NaN and `reason` set; the caller supplies the Uhlig angle.
CutPlan optimal_cut(const SupportPoint& b_star, const SupportPoint& b_j, double gamma,
                    double delta = kCutShift);

struct CuttingOptions {
  double tol = 1e-14;
  bool dual_cuts = true;
  bool optimal_cuts = true;
  long max_cuts = -1;  ///< -1: 10 n + 10^4
  std::optional<OptOptions> opt;
  /// Called after the initial polygon and after every cut.
  std::function<void(const BoundaryPolygon&, const CutRecord*)> on_iteration;
};

/// Algorithm state, stepped one cut at a time so a controller can interleave
/// decisions (see hybrid_solve).
class CuttingPlane {
 public:
  CuttingPlane(const ComplexMatrix& a, CuttingOptions opts);

  bool converged() const { return poly_.rel_error() <= opts_.tol; }
  /// Optimizes from the best known point and, unless that already meets the
  /// tolerance, makes one cut. Returns false when no cut was made.
  bool step();

  const BoundaryPolygon& polygon() const { return poly_; }
  const std::vector<CutRecord>& log() const { return log_; }
  long cuts() const { return static_cast<long>(log_.size()); }
  long max_cuts() const { return max_cuts_; }
  /// Curvature estimate from the most recent optimal-cut attempt near b_star.
  std::optional<double> last_mu_est() const { return last_mu_; }
  /// Index of the support attaining the lower bound.
  std::size_t best_index() const;

 private:
  void optimize_best();
  void insert_eval(const HermitianEigen& eig, double theta, bool dual);
  void notify(const CutRecord* rec);

  ComplexMatrix a_;
  CuttingOptions opts_;
  OptOptions opt_;
  long max_cuts_;
  BoundaryPolygon poly_;
  std::vector<CutRecord> log_;
  std::vector<double> optimized_;  ///< support angles already used as optimizer starts
  std::optional<double> last_mu_;
};

/// Improved cutting-plane method. Throws NonConvergence when max_cuts is hit.
SolveReport algorithm2(const ComplexMatrix& a, const CuttingOptions& opts = {});

}  // namespace numrad
