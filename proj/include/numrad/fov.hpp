#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "numrad/linalg.hpp"

namespace numrad {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Duplicate-angle merge threshold (radians).
inline constexpr double kTolAngle = 1e-10;
/// Minimum |sin(dtheta)| for two support lines to be intersected.
inline constexpr double kTolParallel = 1e-12;
/// Relative eigenvalue gap below which lambda_max counts as multiple.
inline constexpr double kTolGap = 1e-8;

/// Maps any angle into [0, 2*pi).
double wrap_2pi(double theta);

/// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

/// H(theta) = (e^{i theta} A + e^{-i theta} A^*) / 2.
ComplexMatrix build_H(const ComplexMatrix& a, double theta);

/// H'(theta) = (i/2)(e^{i theta} A - e^{-i theta} A^*).
ComplexMatrix build_dH(const ComplexMatrix& a, double theta);

/// One supporting hyperplane of W(A): L_theta = { e^{-i theta}(lambda + i t) }
/// with boundary point z on it.
struct SupportPoint {
  double theta = 0.0;  ///< in [0, 2*pi)
  double lambda = 0.0;
  Complex z{0.0, 0.0};
  std::optional<ComplexVector> eigvec;
};

enum class Extreme { max, min };

/// Support at theta from lambda_max(H(theta)) (Extreme::max), or the dual
/// support at theta + pi from lambda_min(H(theta)) (Extreme::min).
SupportPoint support_point(const ComplexMatrix& a, double theta, Extreme which = Extreme::max);

/// Same as support_point() but from a decomposition of H(theta) already in hand.
SupportPoint support_from_eig(const ComplexMatrix& a, double theta, const HermitianEigen& eig,
                              Extreme which, bool keep_vector = false);

/// rho(H(theta)) together with the eigenpair attaining it.
struct RhoEval {
  double theta = 0.0;
  double value = 0.0;  ///< max(lambda_max, -lambda_min)
  int sign = 1;        ///< +1 when lambda_max attains, -1 for lambda_min
  HermitianEigen eig;  ///< full decomposition of H(theta)

  Eigen::Index index() const { return sign > 0 ? 0 : eig.values.size() - 1; }
  double lambda() const { return eig.values(index()); }
  ComplexVector vector() const { return eig.vectors.col(index()); }
  /// Angle whose h(.) equals value: theta for sign +1, theta + pi otherwise.
  double support_theta() const { return wrap_2pi(sign > 0 ? theta : theta + kPi); }
};

/// One Hermitian eigen-solve. Ties lambda_max == -lambda_min resolve to sign +1.
RhoEval rho_H(const ComplexMatrix& a, double theta);

/// Both supports (max at theta, dual at theta + pi) carried by one evaluation.
std::pair<SupportPoint, SupportPoint> supports_of(const ComplexMatrix& a, const RhoEval& ev);

/// Thrown when two support lines are (nearly) parallel.
class DegenerateIntersection : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The point c with Re(e^{i theta_p} c) = lambda_p and Re(e^{i theta_q} c) = lambda_q.
Complex corner_intersection(const SupportPoint& p, const SupportPoint& q);

/// Outer polygon G (intersection of the stored half planes) together with the
/// known boundary points Z and the bounds l <= r(A) <= u.
class BoundaryPolygon {
 public:
  struct Corner {
    Complex point;
    std::size_t left;   ///< index of the support with the smaller angle
    std::size_t right;  ///< index of the next support (cyclic)
  };

  BoundaryPolygon() = default;
  explicit BoundaryPolygon(std::vector<SupportPoint> supports);

  /// Inserts a support in angular order. A support within kTolAngle of an
  /// existing one is merged, keeping the larger lambda. Returns true when the
  /// polygon changed.
  bool insert(const SupportPoint& sp);

  /// Recomputes every corner and the upper bound from scratch.
  void recompute_all();

  const std::vector<SupportPoint>& points() const { return points_; }
  const std::vector<Complex>& corners() const { return corners_; }
  std::size_t size() const { return points_.size(); }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// (u - l) / l, +inf while l == 0.
  double rel_error() const;

  /// The known boundary point attaining the lower bound.
  const SupportPoint& best() const { return best_; }

  /// Corner of largest modulus; ties go to the smallest left-support angle.
  Corner outermost_corner() const;

  /// Index of the support with angle within kTolAngle of theta, if any.
  std::optional<std::size_t> find(double theta) const;

  /// Corner index k joins points()[k] and points()[(k + 1) % size()].
  Corner corner(std::size_t k) const;

  /// theta,lambda,z_re,z_im,corner_re,corner_im; one row per support.
  void write_csv(std::ostream& out) const;

 private:
  Complex compute_corner(std::size_t k) const;
  void update_upper();
  void note_point(const SupportPoint& sp);

  std::vector<SupportPoint> points_;
  std::vector<Complex> corners_;
  SupportPoint best_;
  double lower_ = 0.0;
  double upper_ = std::numeric_limits<double>::infinity();
};

/// Rectangular start: supports at (l - 1) pi / 2 - psi, l = 1..4. With
/// `dual` the four supports cost two Hermitian solves instead of four.
BoundaryPolygon polygon_init(const ComplexMatrix& a, double psi, bool dual = true);

/// Osculating-circle radius of the boundary at z_theta.
struct CurvatureResult {
  double radius = 0.0;        ///< +inf inside a line segment
  std::optional<double> mu;   ///< radius / r when r was supplied
};

class CurvatureUndefined : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Radius of curvature of the boundary of W(A) at the boundary point of
/// angle theta. Requires a simple lambda_max(H(theta)); a multiple
/// lambda_max whose eigenspace spans a segment returns +inf, any other
/// multiple case throws CurvatureUndefined.
CurvatureResult fiedler_curvature(const ComplexMatrix& a, double theta,
                                  std::optional<double> r = std::nullopt);

}  // namespace numrad
