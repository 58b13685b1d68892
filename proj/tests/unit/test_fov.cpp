#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace numrad;

namespace {

// h(theta) = lambda_max(H(theta)) from Eigen directly, bypassing the library kernel.
double h_ref(const ComplexMatrix& a, double theta) {
  const ComplexMatrix b = std::polar(1.0, theta) * a;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Radius of curvature from the support function: h + h''.
double curvature_fd(const ComplexMatrix& a, double theta) {
  const double step = 1e-3;
  const double h0 = h_ref(a, theta);
  const double d2 = (h_ref(a, theta + step) - 2.0 * h0 + h_ref(a, theta - step)) / (step * step);
  return h0 + d2;
}

}  // namespace

TEST_CASE("wrap_2pi and circular_distance") {
  CHECK(wrap_2pi(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_2pi(kTwoPi) == 0.0);
  CHECK(wrap_2pi(7.0) == doctest::Approx(7.0 - kTwoPi));
  CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(circular_distance(0.0, kPi) == doctest::Approx(kPi));
}

TEST_CASE("H and H' are Hermitian with H' the angle derivative") {
  const ComplexMatrix a = random_complex(6, 2);
  const double t = 0.7, step = 1e-6;
  const ComplexMatrix h = build_H(a, t);
  CHECK((h - h.adjoint()).norm() == 0.0);
  const ComplexMatrix fd = (build_H(a, t + step) - build_H(a, t - step)) / (2.0 * step);
  CHECK((fd - build_dH(a, t)).norm() < 1e-8 * a.norm());
}

TEST_CASE("support points lie on their line and bound W(A)") {
  const ComplexMatrix a = random_complex(8, 4);
  for (double t : {0.0, 1.0, 2.5, 4.0}) {
    const SupportPoint hi = support_point(a, t, Extreme::max);
    const SupportPoint lo = support_point(a, t, Extreme::min);
    CHECK((std::polar(1.0, hi.theta) * hi.z).real() == doctest::Approx(hi.lambda).epsilon(1e-12));
    CHECK((std::polar(1.0, lo.theta) * lo.z).real() == doctest::Approx(lo.lambda).epsilon(1e-12));
    CHECK(lo.theta == doctest::Approx(wrap_2pi(t + kPi)));
    CHECK(hi.lambda == doctest::Approx(h_ref(a, t)).epsilon(1e-12));
    REQUIRE(hi.eigvec.has_value());
    // every eigenvector's Rayleigh quotient is in W(A), hence inside the half plane
    const auto e = hermitian_eig(build_H(a, t));
    for (int k = 0; k < 8; ++k) {
      const Complex z = e.vectors.col(k).dot(a * e.vectors.col(k));
      CHECK(testing::inside(hi, z, 1e-12 * a.norm()));
      CHECK(testing::inside(lo, z, 1e-12 * a.norm()));
    }
  }
}

TEST_CASE("rho_H picks the larger of lambda_max and -lambda_min") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = -3.0;
  a(1, 1) = 1.0;
  const RhoEval ev = rho_H(a, 0.0);
  CHECK(ev.value == doctest::Approx(3.0));
  CHECK(ev.sign == -1);
  CHECK(ev.support_theta() == doctest::Approx(kPi));
  const RhoEval tie = rho_H(crabb(2), 0.0);
  CHECK(tie.sign == 1);
}

TEST_CASE("corner_intersection satisfies both line equations") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), lam(0.5, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    SupportPoint p, q;
    p.theta = ang(rng);
    p.lambda = lam(rng);
    q.theta = wrap_2pi(p.theta + std::uniform_real_distribution<double>(1e-3, 3.0)(rng));
    q.lambda = lam(rng);
    const Complex c = corner_intersection(p, q);
    const double scale = 1.0 + std::abs(c);
    CHECK(std::fabs((std::polar(1.0, p.theta) * c).real() - p.lambda) < 1e-13 * scale);
    CHECK(std::fabs((std::polar(1.0, q.theta) * c).real() - q.lambda) < 1e-13 * scale);
  }
}

TEST_CASE("corner_intersection stays accurate for nearly parallel lines") {
  // two tangents of the unit circle 1e-7 apart meet at modulus sec(1e-7 / 2)
  SupportPoint p, q;
  p.theta = 1.0;
  p.lambda = 1.0;
  q.theta = 1.0 + 1e-7;
  q.lambda = 1.0;
  const Complex c = corner_intersection(p, q);
  CHECK(std::abs(c) >= 1.0);
  CHECK(std::abs(c) - 1.0 == doctest::Approx(1.0 / std::cos(0.5e-7) - 1.0).epsilon(1e-3));
  q.theta = 1.0 + 1e-14;
  CHECK_THROWS_AS(corner_intersection(p, q), DegenerateIntersection);
}

TEST_CASE("polygon_init builds a rectangle") {
  const ComplexMatrix a = random_complex(10, 6);
  const CountScope scope;
  const BoundaryPolygon g = polygon_init(a, 0.3, true);
  CHECK(scope.delta().hermitian == 2);
  REQUIRE(g.size() == 4);
  for (std::size_t k = 0; k + 1 < g.size(); ++k)
    CHECK(g.points()[k + 1].theta - g.points()[k].theta == doctest::Approx(kPi / 2.0));
  CHECK(g.lower() <= g.upper());
  const BoundaryPolygon single = polygon_init(a, 0.3, false);
  CHECK(single.size() == 4);
  CHECK(single.upper() == doctest::Approx(g.upper()).epsilon(1e-12));
}

TEST_CASE("polygon invariants under random inserts") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ComplexMatrix a = random_complex(12, seed);
    BoundaryPolygon g = polygon_init(a, 0.0, true);
    std::vector<Complex> zs;
    for (const auto& p : g.points()) zs.push_back(p.z);
    double l = g.lower(), u = g.upper(), eps = g.rel_error();
    const double slack = 1e-12 * a.norm();
    for (int cut = 0; cut < 60; ++cut) {
      const auto ev = rho_H(a, ang(rng));
      const auto [hi, lo] = supports_of(a, ev);
      g.insert(hi);
      g.insert(lo);
      zs.push_back(hi.z);
      zs.push_back(lo.z);
      CHECK(g.lower() >= l);
      CHECK(g.upper() <= u);
      CHECK(g.rel_error() <= eps);
      CHECK(g.lower() <= g.upper());
      l = g.lower();
      u = g.upper();
      eps = g.rel_error();
    }
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.points()[k - 1].theta < g.points()[k].theta);
    for (const auto& sp : g.points())
      for (Complex z : zs) CHECK(testing::inside(sp, z, slack));
    // corners lie on both adjacent lines and inside every other half plane
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Complex c = g.corners()[k];
      for (const auto& sp : g.points()) CHECK(testing::inside(sp, c, slack * 10));
    }
    const double oracle = grid_oracle(a);
    CHECK(g.lower() <= oracle * (1.0 + 1e-12));
    CHECK(oracle <= g.upper() * (1.0 + 1e-12));

    BoundaryPolygon fresh = g;
    fresh.recompute_all();
    for (std::size_t k = 0; k < g.size(); ++k)
      CHECK(std::abs(fresh.corners()[k] - g.corners()[k]) <= 1e-14 * (1.0 + std::abs(g.corners()[k])));
  }
}

TEST_CASE("duplicate angles merge keeping the larger lambda") {
  const ComplexMatrix a = random_complex(5, 8);
  BoundaryPolygon g = polygon_init(a, 0.0, true);
  SupportPoint sp = g.points()[1];
  sp.theta += 1e-12;
  sp.lambda -= 0.1;
  CHECK_FALSE(g.insert(sp));
  CHECK(g.size() == 4);
  sp.lambda += 0.2;
  CHECK(g.insert(sp));
  CHECK(g.size() == 4);
  CHECK(g.points()[1].lambda == doctest::Approx(sp.lambda));
  CHECK(g.find(sp.theta + 5e-11).has_value());
  CHECK_FALSE(g.find(sp.theta + 1e-3).has_value());
}

TEST_CASE("outermost corner and csv export") {
  const ComplexMatrix a = random_complex(7, 12);
  const BoundaryPolygon g = polygon_init(a, 0.0, true);
  const auto c = g.outermost_corner();
  for (Complex z : g.corners()) CHECK(std::abs(z) <= std::abs(c.point));
  CHECK(c.right == (c.left + 1) % g.size());
  CHECK(std::abs(c.point) == doctest::Approx(g.upper()));
  std::ostringstream out;
  g.write_csv(out);
  const std::string s = out.str();
  CHECK(s.rfind("theta,lambda,z_re,z_im,corner_re,corner_im\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}

TEST_CASE("fiedler curvature of the shifted disk") {
  const ComplexMatrix a = disk_model(6, 0.3, 0.7);
  // the outermost support of the disk centred at 0.3 is at theta = 0
  const auto res = fiedler_curvature(a, 0.0, 1.0);
  CHECK(res.radius == doctest::Approx(0.7).epsilon(1e-8));
  REQUIRE(res.mu.has_value());
  CHECK(*res.mu == doctest::Approx(0.7).epsilon(1e-8));
  for (double t : {0.5, 2.0, 3.0}) CHECK(fiedler_curvature(a, t).radius == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("fiedler curvature matches h + h'' on random matrices") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  int checked = 0;
  for (std::uint64_t seed = 100; checked < 20; ++seed) {
    const ComplexMatrix a = random_complex(6, seed);
    const double t = ang(rng);
    const auto e = hermitian_eig(build_H(a, t));
    if (e.values(0) - e.values(1) < 1e-2) continue;
    const double fd = curvature_fd(a, t);
    CHECK(testing::rel_diff(fiedler_curvature(a, t).radius, fd) < 1e-4);
    ++checked;
  }
}

TEST_CASE("fiedler curvature on segments and flat multiple eigenvalues") {
  ComplexMatrix seg = ComplexMatrix::Zero(2, 2);
  seg(0, 0) = Complex(1.0, 1.0);
  seg(1, 1) = Complex(1.0, -1.0);
  CHECK(std::isinf(fiedler_curvature(seg, 0.0).radius));
  CHECK_THROWS_AS(fiedler_curvature(ComplexMatrix::Identity(3, 3), 0.0), CurvatureUndefined);
  // jordan_edge: stadium shape, arcs of radius 1/2 joined by horizontal segments
  CHECK(fiedler_curvature(jordan_edge(), 0.0).radius == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::isinf(fiedler_curvature(jordan_edge(), kPi / 2.0).radius));
}
