#include "numrad/fov.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace numrad {

double wrap_2pi(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod can land exactly on 2*pi after the shift
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double circular_distance(double a, double b) {
  const double d = std::fabs(wrap_2pi(a) - wrap_2pi(b));
  return std::min(d, kTwoPi - d);
}

ComplexMatrix build_H(const ComplexMatrix& a, double theta) {
  const ComplexMatrix b = std::polar(1.0, theta) * a;
  return 0.5 * (b + b.adjoint());
}

ComplexMatrix build_dH(const ComplexMatrix& a, double theta) {
  const ComplexMatrix b = std::polar(1.0, theta) * a;
  return Complex(0.0, 0.5) * (b - b.adjoint());
}

SupportPoint support_from_eig(const ComplexMatrix& a, double theta, const HermitianEigen& eig,
                              Extreme which, bool keep_vector) {
  const Eigen::Index k = which == Extreme::max ? 0 : eig.values.size() - 1;
  const auto x = eig.vectors.col(k);
  SupportPoint sp;
  if (which == Extreme::max) {
    sp.theta = wrap_2pi(theta);
    sp.lambda = eig.values(k);
  } else {
    sp.theta = wrap_2pi(theta + kPi);
    sp.lambda = -eig.values(k);
  }
  sp.z = x.dot(a * x);
  if (keep_vector) sp.eigvec = x;
  return sp;
}

SupportPoint support_point(const ComplexMatrix& a, double theta, Extreme which) {
  const HermitianEigen eig = hermitian_eig(build_H(a, theta));
  return support_from_eig(a, theta, eig, which, true);
}

RhoEval rho_H(const ComplexMatrix& a, double theta) {
  RhoEval ev;
  ev.theta = theta;
  ev.eig = hermitian_eig(build_H(a, theta));
  const double top = ev.eig.lambda_max();
  const double bottom = -ev.eig.lambda_min();
  if (bottom > top) {
    ev.sign = -1;
    ev.value = bottom;
  } else {
    ev.sign = 1;
    ev.value = top;
  }
  return ev;
}

std::pair<SupportPoint, SupportPoint> supports_of(const ComplexMatrix& a, const RhoEval& ev) {
  return {support_from_eig(a, ev.theta, ev.eig, Extreme::max),
          support_from_eig(a, ev.theta, ev.eig, Extreme::min)};
}

Complex corner_intersection(const SupportPoint& p, const SupportPoint& q) {
  // Write c = e^{-i theta_p}(lambda_p + i t) and solve along p's line. Cramer's
  // rule on the 2x2 system loses everything to cancellation once the angles
  // are ~1e-7 apart; here the error stays tangential to the line.
  const double delta = std::remainder(q.theta - p.theta, kTwoPi);
  const double sd = std::sin(delta);
  if (std::fabs(sd) <= kTolParallel) throw DegenerateIntersection("support lines are parallel");
  const double half = std::sin(0.5 * delta);
  const double t = ((p.lambda - q.lambda) - 2.0 * p.lambda * half * half) / sd;
  return std::polar(1.0, -p.theta) * Complex(p.lambda, t);
}

BoundaryPolygon::BoundaryPolygon(std::vector<SupportPoint> supports) {
  for (const auto& sp : supports) {
    auto pos = std::lower_bound(points_.begin(), points_.end(), sp.theta,
                                [](const SupportPoint& p, double t) { return p.theta < t; });
    points_.insert(pos, sp);
    note_point(sp);
  }
  recompute_all();
}

double BoundaryPolygon::rel_error() const {
  if (upper_ <= 0.0) return 0.0;
  if (lower_ <= 0.0) return std::numeric_limits<double>::infinity();
  return (upper_ - lower_) / lower_;
}

void BoundaryPolygon::note_point(const SupportPoint& sp) {
  const double m = std::abs(sp.z);
  if (m > lower_ || (m == lower_ && sp.theta < best_.theta)) {
    lower_ = m;
    best_ = sp;
    best_.eigvec.reset();
  }
}

Complex BoundaryPolygon::compute_corner(std::size_t k) const {
  const std::size_t j = points_.size();
  const SupportPoint& p = points_[k];
  const SupportPoint& q = points_[(k + 1) % j];
  double gap = q.theta - p.theta;
  if (k + 1 == j) gap += kTwoPi;
  const double inf = std::numeric_limits<double>::infinity();
  if (gap >= kPi) return {inf, inf};
  try {
    const Complex c = corner_intersection(p, q);
    if (gap >= kPi / 2.0) return c;
    // Along p's line the corner sits between the two tangent points. With the
    // lines ~1e-10 apart, roundoff in lambda alone can push it far outside.
    const Complex rot = std::polar(1.0, p.theta);
    const double tp = (rot * p.z).imag(), tq = (rot * q.z).imag();
    const double t = (rot * c).imag();
    const double tc = std::clamp(t, std::min(tp, tq), std::max(tp, tq));
    return tc == t ? c : std::conj(rot) * Complex(p.lambda, tc);
  } catch (const DegenerateIntersection&) {
    // the two lines coincide up to roundoff
    return p.z;
  }
}

void BoundaryPolygon::update_upper() {
  double m = 0.0;
  for (const auto& c : corners_) m = std::max(m, std::abs(c));
  upper_ = std::min(upper_, m);
}

void BoundaryPolygon::recompute_all() {
  corners_.assign(points_.size(), Complex{});
  if (points_.size() < 3) {
    const double inf = std::numeric_limits<double>::infinity();
    std::fill(corners_.begin(), corners_.end(), Complex{inf, inf});
    return;
  }
  for (std::size_t k = 0; k < points_.size(); ++k) corners_[k] = compute_corner(k);
  update_upper();
}

std::optional<std::size_t> BoundaryPolygon::find(double theta) const {
  if (points_.empty()) return std::nullopt;
  const double t = wrap_2pi(theta);
  auto it = std::lower_bound(points_.begin(), points_.end(), t,
                             [](const SupportPoint& p, double v) { return p.theta < v; });
  const std::size_t j = points_.size();
  const std::size_t hi = static_cast<std::size_t>(it - points_.begin()) % j;
  const std::size_t lo = (hi + j - 1) % j;
  if (circular_distance(points_[hi].theta, t) <= kTolAngle) return hi;
  if (circular_distance(points_[lo].theta, t) <= kTolAngle) return lo;
  return std::nullopt;
}

bool BoundaryPolygon::insert(const SupportPoint& in) {
  SupportPoint sp = in;
  sp.theta = wrap_2pi(sp.theta);
  sp.eigvec.reset();
  note_point(sp);

  if (auto hit = find(sp.theta)) {
    SupportPoint& old = points_[*hit];
    if (sp.lambda <= old.lambda) return false;
    old.lambda = sp.lambda;
    old.z = sp.z;
    if (points_.size() >= 3) {
      const std::size_t j = points_.size();
      corners_[(*hit + j - 1) % j] = compute_corner((*hit + j - 1) % j);
      corners_[*hit] = compute_corner(*hit);
      update_upper();
    }
    return true;
  }

  auto it = std::lower_bound(points_.begin(), points_.end(), sp.theta,
                             [](const SupportPoint& p, double v) { return p.theta < v; });
  const std::size_t pos = static_cast<std::size_t>(it - points_.begin());
  points_.insert(it, sp);
  if (points_.size() <= 3) {
    recompute_all();
    return true;
  }
  const std::size_t j = points_.size();
  corners_.insert(corners_.begin() + static_cast<std::ptrdiff_t>(pos), Complex{});
  corners_[(pos + j - 1) % j] = compute_corner((pos + j - 1) % j);
  corners_[pos] = compute_corner(pos);
  update_upper();
  return true;
}

BoundaryPolygon::Corner BoundaryPolygon::corner(std::size_t k) const {
  return {corners_.at(k), k, (k + 1) % points_.size()};
}

BoundaryPolygon::Corner BoundaryPolygon::outermost_corner() const {
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t k = 0; k < corners_.size(); ++k) {
    const double v = std::abs(corners_[k]);
    if (v > m) {
      m = v;
      best = k;
    }
  }
  return corner(best);
}

void BoundaryPolygon::write_csv(std::ostream& out) const {
  out << "theta,lambda,z_re,z_im,corner_re,corner_im\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const auto& p = points_[k];
    const Complex c = k < corners_.size() ? corners_[k] : Complex{};
    out << p.theta << ',' << p.lambda << ',' << p.z.real() << ',' << p.z.imag() << ','
        << c.real() << ',' << c.imag() << '\n';
  }
}

BoundaryPolygon polygon_init(const ComplexMatrix& a, double psi, bool dual) {
  require_valid(a);
  std::vector<SupportPoint> supports;
  supports.reserve(4);
  if (dual) {
    for (int l = 0; l < 2; ++l) {
      const auto [hi, lo] = supports_of(a, rho_H(a, l * kPi / 2.0 - psi));
      supports.push_back(hi);
      supports.push_back(lo);
    }
  } else {
    for (int l = 0; l < 4; ++l) {
      SupportPoint sp = support_point(a, l * kPi / 2.0 - psi, Extreme::max);
      sp.eigvec.reset();
      supports.push_back(std::move(sp));
    }
  }
  return BoundaryPolygon(std::move(supports));
}

CurvatureResult fiedler_curvature(const ComplexMatrix& a, double theta, std::optional<double> r) {
  require_valid(a);
  const ComplexMatrix b = std::polar(1.0, theta) * a;
  const ComplexMatrix h1 = 0.5 * (b + b.adjoint());
  const ComplexMatrix h2 = Complex(0.0, -0.5) * (b - b.adjoint());
  const HermitianEigen eig = hermitian_eig(h1);
  const Eigen::Index n = eig.values.size();

  CurvatureResult out;
  auto finish = [&](double radius) {
    out.radius = radius;
    if (r && *r > 0.0) out.mu = radius / *r;
    return out;
  };
  if (n == 1) return finish(0.0);

  const double lam = eig.values(0);
  const double scale = std::max({std::fabs(eig.values(0)), std::fabs(eig.values(n - 1)),
                                 norm_one(a) * 1e-3, std::numeric_limits<double>::min()});
  if (lam - eig.values(1) <= kTolGap * scale) {
    // multiple lambda_max: the boundary at this angle is a segment when the
    // imaginary part varies over the eigenspace
    Eigen::Index m = 1;
    while (m < n && lam - eig.values(m) <= kTolGap * scale) ++m;
    const ComplexMatrix v = eig.vectors.leftCols(m);
    const ComplexMatrix k = v.adjoint() * h2 * v;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ks(0.5 * (k + k.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    const double spread = ks.eigenvalues().maxCoeff() - ks.eigenvalues().minCoeff();
    if (spread > kTolGap * std::max(norm_one(a), std::numeric_limits<double>::min()))
      return finish(std::numeric_limits<double>::infinity());
    throw CurvatureUndefined("lambda_max(H(theta)) is not simple; curvature is undefined");
  }

  // Shift so that lambda_max(H1) = 0 and the boundary point sits at 0; the
  // shift only moves H2 by a multiple of I, which the sum below ignores.
  const ComplexVector x = eig.vectors.col(0);
  const ComplexVector w = h2 * x;
  const double h1_norm = lam - eig.values(n - 1);
  double radius = 0.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    const double d = lam - eig.values(k);
    if (d <= 1e-12 * h1_norm) continue;
    radius += std::norm(eig.vectors.col(k).dot(w)) / d;
  }
  return finish(std::max(0.0, 2.0 * radius));
}

}  // namespace numrad
