#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace numrad;

namespace {

// Support of the disk |z - s| <= rt at centre angle phi.
SupportPoint disk_support(double s, double rt, double phi) {
  SupportPoint sp;
  sp.theta = wrap_2pi(-phi);
  sp.lambda = s * std::cos(phi) + rt;
  sp.z = s + std::polar(rt, phi);
  return sp;
}

double wrap_pi(double t) {
  double r = std::remainder(t, kTwoPi);
  return r <= -kPi ? r + kTwoPi : r;
}

}  // namespace

TEST_CASE("uhlig_cut") {
  CHECK(uhlig_cut(Complex(1.0, 1.0)) == doctest::Approx(kTwoPi - kPi / 4.0));
  CHECK(uhlig_cut(Complex(-1.0, 0.0)) == doctest::Approx(kPi));
  CHECK_THROWS_AS(uhlig_cut(Complex(0.0, 0.0)), DomainError);
}

TEST_CASE("frame normalization") {
  FrameTransform t = normalize_frame(Complex(0.0, 1.0), std::polar(1.0, 2.0));
  CHECK(t.rotation == doctest::Approx(-kPi / 2.0));
  CHECK_FALSE(t.reflect);
  CHECK(std::abs(t.apply(Complex(0.0, 1.0)) - 1.0) < 1e-15);

  t = normalize_frame(1.0, std::polar(1.0, -0.3));
  CHECK(t.reflect);
  CHECK(std::abs(t.apply(std::polar(1.0, -0.3)) - std::polar(1.0, 0.3)) < 1e-15);

  for (const FrameTransform f : {FrameTransform{0.7, false}, FrameTransform{-2.0, true}}) {
    const Complex z(0.3, -1.7);
    CHECK(std::abs(f.invert(f.apply(z)) - z) < 1e-15);
    CHECK(wrap_2pi(f.invert_angle(f.apply_angle(1.1))) == doctest::Approx(1.1));
    // a support line stays a support line of the transformed point
    SupportPoint sp = disk_support(0.2, 0.5, 0.9);
    const SupportPoint tp = f.apply(sp);
    CHECK((std::polar(1.0, tp.theta) * tp.z).real() == doctest::Approx(tp.lambda));
  }
}

TEST_CASE("point on a support line with given modulus") {
  const double s = 0.3, rt = 0.7, phi = kPi / 3.0;
  // framed: b_star = 1 on the real axis, b_j above it with support angle -phi
  const SupportPoint bj = disk_support(s, rt, phi);
  const auto d = point_on_line_with_modulus(bj, 1.0, Complex(1.0, 0.0));
  REQUIRE(d.has_value());
  CHECK(std::abs(*d) == doctest::Approx(1.0));
  CHECK((std::polar(1.0, bj.theta) * *d).real() == doctest::Approx(bj.lambda));
  // t_j from the closed form, and by bisection on |b_j - i t e^{i phi}| = 1
  const double closed = -s * std::sin(phi) +
                        std::sqrt(s * s * std::pow(std::sin(phi), 2) + 2 * s * rt * (1 - std::cos(phi)));
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(bj.z - Complex(0.0, mid) * std::polar(1.0, phi)) < 1.0 ? lo : hi) = mid;
  }
  CHECK(closed == doctest::Approx(lo).epsilon(1e-12));
  CHECK(std::abs(*d - bj.z) == doctest::Approx(closed).epsilon(1e-12));
  CHECK(closed == doctest::Approx(0.26702).epsilon(1e-4));

  const auto foot = point_on_line_with_modulus(bj, bj.lambda, 0.0);
  REQUIRE(foot.has_value());
  CHECK(std::abs(*foot - std::polar(bj.lambda, -bj.theta)) < 1e-15);
  CHECK_FALSE(point_on_line_with_modulus(bj, 0.5 * bj.lambda, 0.0).has_value());
}

TEST_CASE("quadratic fit") {
  SUBCASE("disk samples recover the curvature") {
    const double s = 0.3, rt = 0.7;
    for (double phi : {0.02, 0.005}) {
      const Complex b = s + std::polar(rt, phi);
      const QuadraticFit f = fit_quadratic(1.0, b, -phi);
      REQUIRE(f.mu_est.has_value());
      CHECK(f.fit_ok);
      CHECK(*f.mu_est == doctest::Approx(0.7).epsilon(phi));
    }
  }
  SUBCASE("exact parabola data has zero residual") {
    const double q2 = -0.8, y = 0.3;
    const QuadraticFit f = fit_quadratic(1.0, Complex(q2 * y * y + 1.0, y), std::atan(2 * q2 * y));
    CHECK(f.q2 == doctest::Approx(q2));
    CHECK(f.q0 == 1.0);
    CHECK(f.residual < 1e-15);
    CHECK(f.fit_ok);
    CHECK(*f.mu_est == doctest::Approx(1.0 / 1.6));
  }
  SUBCASE("a flat side is rejected") {
    const QuadraticFit f = fit_quadratic(1.0, Complex(1.0, 0.4), -0.2);
    CHECK(f.q2 == 0.0);
    CHECK_FALSE(f.fit_ok);
  }
  SUBCASE("b_j on the axis is degenerate") {
    CHECK_FALSE(fit_quadratic(1.0, Complex(0.9, 0.0), -0.2).mu_est.has_value());
  }
}

TEST_CASE("optimal cut on the disk model follows the angle recursion") {
  const double s = 0.3, rt = 0.7;
  const SupportPoint bstar = disk_support(s, rt, 0.0);
  // at phi = pi/3 the parabola is no longer tangent at b_j, so the fit gate refuses
  const CutPlan wide = optimal_cut(bstar, disk_support(s, rt, kPi / 3.0), 1.0, 0.0);
  CHECK(wide.kind == "uhlig");
  CHECK(wide.reason == "fit");
  for (double phi : {0.8, 0.6, 0.3, 0.05}) {
    const SupportPoint bj = disk_support(s, rt, phi);
    const CutPlan plan = optimal_cut(bstar, bj, 1.0, 0.0);
    REQUIRE(plan.kind == "optimal");
    const double t = optimal_step_length(s, rt, phi);
    const double next =
        -phi + 2.0 * std::atan((rt * std::sin(phi) - t * std::cos(phi)) / (rt * std::cos(phi) + t * std::sin(phi)));
    const double framed = -wrap_pi(plan.theta_cut);
    CHECK(std::fabs(framed - next) <= 0.02 * phi);
    CHECK(framed > 0.0);
    CHECK(framed < phi);
    REQUIRE(plan.mu_est.has_value());
  }
}

TEST_CASE("optimal cut works in any frame") {
  const double s = 0.3, rt = 0.7, phi = 0.4;
  const SupportPoint bstar = disk_support(s, rt, 0.0);
  const SupportPoint bj = disk_support(s, rt, phi);
  const CutPlan ref = optimal_cut(bstar, bj, 1.0);
  REQUIRE(ref.kind == "optimal");
  for (const FrameTransform f : {FrameTransform{1.3, false}, FrameTransform{-0.6, true}}) {
    const CutPlan moved = optimal_cut(f.apply(bstar), f.apply(bj), 1.0);
    REQUIRE(moved.kind == "optimal");
    CHECK(wrap_2pi(moved.theta_cut) == doctest::Approx(wrap_2pi(f.apply_angle(ref.theta_cut))).epsilon(1e-12));
  }
}

TEST_CASE("optimal cut fallbacks") {
  SupportPoint bstar;
  bstar.theta = 0.0;
  bstar.lambda = 1.0;
  bstar.z = 1.0;
  SUBCASE("crossover") {
    const double q2 = -1.0 / (2.0 * 0.99999), y = 0.05;
    SupportPoint bj;
    bj.theta = wrap_2pi(std::atan(2 * q2 * y));
    bj.z = Complex(q2 * y * y + 1.0, y);
    bj.lambda = (std::polar(1.0, bj.theta) * bj.z).real();
    const CutPlan plan = optimal_cut(bstar, bj, 1.0);
    CHECK(plan.kind == "uhlig");
    CHECK(plan.reason == "crossover");
    CHECK(std::isnan(plan.theta_cut));
    CHECK(*plan.mu_est == doctest::Approx(0.99999));
  }
  SUBCASE("polygonal neighbour") {
    SupportPoint bj;
    bj.theta = wrap_2pi(-0.5);
    bj.z = Complex(1.0, 0.3);
    bj.lambda = (std::polar(1.0, bj.theta) * bj.z).real();
    CHECK(optimal_cut(bstar, bj, 1.0).kind == "uhlig");
  }
  SUBCASE("b_star not at a stationary angle") {
    SupportPoint off = bstar;
    off.theta = 0.2;
    off.lambda = (std::polar(1.0, 0.2) * off.z).real();
    const CutPlan plan = optimal_cut(off, disk_support(0.3, 0.7, 0.5), 1.0);
    CHECK(plan.reason == "not_stationary");
  }
}

TEST_CASE("algorithm2 matches the grid oracle with invariants on every cut") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const ComplexMatrix a = random_complex(5 + 4 * static_cast<int>(seed), seed);
    const double oracle = grid_oracle(a);
    double l = 0.0, u = 1e300, eps = 1e300;
    int calls = 0;
    CuttingOptions opts;
    opts.on_iteration = [&](const BoundaryPolygon& g, const CutRecord*) {
      ++calls;
      CHECK(g.lower() >= l);
      CHECK(g.upper() <= u);
      CHECK(g.rel_error() <= eps);
      CHECK(g.lower() <= oracle * (1.0 + 1e-12));
      CHECK(oracle <= g.upper() * (1.0 + 1e-12));
      l = g.lower();
      u = g.upper();
      eps = g.rel_error();
    };
    const CountScope scope;
    const SolveReport rep = algorithm2(a, opts);
    CHECK(rep.method == "cutting");
    CHECK(rep.converged);
    CHECK(rep.rel_err <= 1e-14);
    CHECK(testing::rel_diff(rep.r, oracle) < 1e-12);
    CHECK(rep.eigH_count == scope.delta().hermitian);
    CHECK(rep.pencil_count == 0);
    REQUIRE(rep.cuts.has_value());
    CHECK(calls >= static_cast<int>(rep.cuts->size()) + 1);
    for (const CutRecord& c : *rep.cuts) {
      CHECK((c.kind == "optimal" || c.kind == "uhlig"));
      if (c.kind == "uhlig") CHECK(c.reason.has_value());
    }
  }
}

TEST_CASE("algorithm2 variants agree") {
  const ComplexMatrix a = random_complex(16, 21);
  const double oracle = grid_oracle(a);
  CuttingOptions no_dual;
  no_dual.dual_cuts = false;
  CHECK(testing::rel_diff(algorithm2(a, no_dual).r, oracle) < 1e-12);
  CuttingOptions uhlig_only;
  uhlig_only.optimal_cuts = false;
  const SolveReport rep = algorithm2(a, uhlig_only);
  CHECK(testing::rel_diff(rep.r, oracle) < 1e-12);
  for (const CutRecord& c : *rep.cuts) CHECK(c.kind == "uhlig");
  CuttingOptions secant;
  secant.opt = OptOptions{false, 30, std::nullopt};
  CHECK(testing::rel_diff(algorithm2(a, secant).r, oracle) < 1e-12);
}

TEST_CASE("algorithm2 is fast at corners and slow on disks") {
  ComplexMatrix d = ComplexMatrix::Zero(5, 5);
  d(0, 0) = Complex(2.0, 1.0);
  d(1, 1) = Complex(-1.0, 1.5);
  d(2, 2) = 0.5;
  d(3, 3) = Complex(0.0, -2.0);
  d(4, 4) = Complex(1.0, -1.0);
  const SolveReport normal = algorithm2(d);
  CHECK(normal.r == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(normal.cuts->size() <= 5);

  CuttingOptions capped;
  capped.max_cuts = 50;
  try {
    algorithm2(crabb(4), capped);
    FAIL("a disk should not converge in 50 cuts");
  } catch (const NonConvergence& e) {
    CHECK_FALSE(e.report().converged);
    CHECK(e.report().cuts->size() == 50);
    CHECK(e.report().lower <= 1.0 + 1e-14);
    CHECK(e.report().upper >= 1.0);
  }
}
