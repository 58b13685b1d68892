#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "numrad/fov.hpp"

namespace numrad {

/// rho(H(.)) is not differentiable at theta: the attaining eigenvalue is multiple.
class DerivativeUndefined : public DomainError {
 public:
  using DomainError::DomainError;
};

/// True when the eigenvalue attaining rho(H(theta)) is simple.
bool attaining_simple(const RhoEval& ev);

/// d/dtheta rho(H(theta)) = sgn(lambda_j) x_j^* H'(theta) x_j.
double rho_first_derivative(const ComplexMatrix& a, const RhoEval& ev);

/// Second derivative from the full eigendecomposition of H(theta):
///   lambda_j'' = -lambda_j + 2 sum_{k != j} |x_k^* H' x_j|^2 / (lambda_j - lambda_k),
/// multiplied by sgn(lambda_j) for the lambda_min branch.
double rho_second_derivative(const ComplexMatrix& a, const RhoEval& ev);

/// Convenience overloads that perform one Hermitian solve.
double rho_first_derivative(const ComplexMatrix& a, double theta);
double rho_second_derivative(const ComplexMatrix& a, double theta);

/// Data kept for every angle where the maximizer solved an eigenproblem.
struct Visit {
  double theta = 0.0;
  double rho = 0.0;
  int sign = 1;
  SupportPoint upper;  ///< support at theta (lambda_max)
  SupportPoint lower;  ///< dual support at theta + pi (lambda_min)

  double support_theta() const { return sign > 0 ? upper.theta : lower.theta; }
  const SupportPoint& attaining() const { return sign > 0 ? upper : lower; }
};

Visit make_visit(const ComplexMatrix& a, const RhoEval& ev);

struct OptOptions {
  bool newton = true;  ///< false: secant on rho'
  int max_iter = 30;
  /// Largest first step when no bracket is given (default pi / 4).
  std::optional<double> initial_trust;
};

struct OptResult {
  double theta_star = 0.0;
  double gamma = 0.0;
  int sign = 1;
  std::vector<Visit> visited;
  int iterations = 0;
  bool converged = false;

  /// Support angle in [0, 2 pi) whose h(.) value equals gamma.
  double support_theta() const { return wrap_2pi(sign > 0 ? theta_star : theta_star + kPi); }
};

using Bracket = std::pair<double, double>;

/// Safeguarded Newton (or secant) ascent on rho(H(theta)) from theta0,
/// optionally confined to a bracket containing theta0. Never returns a
/// value below rho(H(theta0)).
OptResult maximize_rho(const ComplexMatrix& a, double theta0,
                       std::optional<Bracket> bracket = std::nullopt,
                       const OptOptions& opts = {});

/// As above but starting from an evaluation already in hand; that evaluation
/// is reported in `visited` but costs nothing here.
OptResult maximize_rho(const ComplexMatrix& a, const RhoEval& start,
                       std::optional<Bracket> bracket = std::nullopt,
                       const OptOptions& opts = {});

}  // namespace numrad
