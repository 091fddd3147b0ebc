#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support/generators.hpp"
#include "streamnav/errors.hpp"
#include "streamnav/flow_field.hpp"

using namespace streamnav;

namespace {

FlowField unit_obstacle() { return FlowField({Obstacle::planned({0.0, 0.0}, 1.0)}); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("obstacle radii are validated") {
  CHECK_THROWS_AS(Obstacle({0, 0}, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Obstacle({0, 0}, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Obstacle({0, 0}, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Obstacle({NAN, 0}, 0.5, 1.0), InvalidArgument);

  const SafetyMargins m{0.40, 0.28};
  const Obstacle f = Obstacle::failed_agent({1, 2}, m);
  CHECK(f.actual_radius() == doctest::Approx(0.68));
  CHECK(f.planned_radius() == doctest::Approx(1.36));
  CHECK(f.consistent_with(m));
  CHECK_FALSE(Obstacle::planned({0, 0}, 1.0).consistent_with(m));
}

TEST_CASE("duplicate obstacle centers are rejected") {
  CHECK_THROWS_AS(FlowField({Obstacle::planned({1, 1}, 1.0), Obstacle::planned({1, 1}, 0.5)}),
                  InvalidArgument);
}

TEST_CASE("empty field is the identity map") {
  const FlowField empty;
  const FieldPoint f = eval_field({3.5, -2.0}, empty);
  CHECK(f.phi == 3.5);
  CHECK(f.psi == -2.0);
  const Jacobian2x2 j = eval_jacobian({3.5, -2.0}, empty);
  CHECK(j.dphi_dx == 1.0);
  CHECK(j.dpsi_dy == 1.0);
  CHECK(j.dphi_dy == 0.0);
  CHECK(j.dpsi_dx == 0.0);
}

TEST_CASE("single unit obstacle reference values") {
  const FlowField field = unit_obstacle();
  const FieldPoint f = eval_field({2.0, 0.0}, field);
  CHECK(f.phi == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(f.psi == 0.0);

  const Jacobian2x2 j = eval_jacobian({2.0, 0.0}, field);
  CHECK(j.dphi_dx == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(j.dpsi_dy == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(j.dphi_dy == 0.0);
  CHECK(j.dpsi_dx == 0.0);

  SUBCASE("stagnation points have a vanishing Jacobian") {
    for (double x : {-1.0, 1.0}) {
      const Jacobian2x2 s = eval_jacobian({x, 0.0}, field);
      CHECK(std::abs(s.dphi_dx) < 1e-15);
      CHECK(std::abs(s.dpsi_dx) < 1e-15);
      CHECK(std::abs(s.determinant()) < 1e-15);
    }
  }

  SUBCASE("center is a singularity") {
    CHECK_THROWS_AS(field.sample({0.0, 0.0}), SingularityEvaluation);
    CHECK_THROWS_AS(field.sample({1e-10, 0.0}), SingularityEvaluation);
    CHECK_NOTHROW(field.sample({1e-6, 0.0}));
  }
}

TEST_CASE("field matches the complex-arithmetic oracle") {
  testgen::Gen g(11);
  const Box region{-10, 10, -10, 10};
  for (int trial = 0; trial < 50; ++trial) {
    const FlowField field = g.field(4, region);
    for (int i = 0; i < 20; ++i) {
      const Vec2 p = g.point_outside(region, field, 0.05);
      const auto f = testgen::complex_potential(p, field);
      const auto df = testgen::complex_derivative(p, field);
      const FieldPoint v = eval_field(p, field);
      const Jacobian2x2 j = eval_jacobian(p, field);
      CHECK(rel(v.phi, f.real()) < 1e-12);
      CHECK(rel(v.psi, f.imag()) < 1e-12);
      CHECK(rel(j.dphi_dx, df.real()) < 1e-12);
      CHECK(rel(j.dpsi_dx, df.imag()) < 1e-12);
    }
  }
}

TEST_CASE("Cauchy-Riemann holds exactly") {
  testgen::Gen g(12);
  const Box region{-8, 8, -8, 8};
  for (int trial = 0; trial < 200; ++trial) {
    const FlowField field = g.field(3, region);
    const Jacobian2x2 j = eval_jacobian(g.point_outside(region, field, 0.01), field);
    CHECK(j.dphi_dx == j.dpsi_dy);
    CHECK(j.dphi_dy == -j.dpsi_dx);
  }
}

TEST_CASE("superposition of obstacles") {
  const Obstacle a = Obstacle::planned({-2.0, 1.0}, 0.8);
  const Obstacle b = Obstacle::planned({3.0, -0.5}, 1.2);
  const FlowField both({a, b});
  const FlowField only_a({a});
  const FlowField only_b({b});
  testgen::Gen g(13);
  for (int i = 0; i < 100; ++i) {
    const Vec2 p = g.point_outside({-6, 6, -6, 6}, both, 0.05);
    const FieldPoint fa = eval_field(p, only_a);
    const FieldPoint fb = eval_field(p, only_b);
    const FieldPoint f = eval_field(p, both);
    CHECK(f.phi == doctest::Approx(fa.phi + fb.phi).epsilon(1e-12));
    CHECK(f.psi == doctest::Approx(fa.psi + fb.psi).epsilon(1e-12));
  }
}

TEST_CASE("psi vanishes on the planned circle of an isolated obstacle") {
  const Vec2 c{1.5, -0.5};
  const double a = 1.36;
  const FlowField field({Obstacle::planned(c, a)});
  for (int k = 0; k < 360; ++k) {
    const double t = k * 2.0 * M_PI / 360.0;
    const Vec2 p{c.x + a * std::cos(t), c.y + a * std::sin(t)};
    CHECK(std::abs(eval_field(p, field).psi) < 1e-12);
  }
}

TEST_CASE("analytic Jacobian agrees with central differences") {
  testgen::Gen g(14);
  const Box region{-6, 6, -6, 6};
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const FlowField field = g.field(3, region);
    const Vec2 p = g.point_outside(region, field, 0.1);
    const Jacobian2x2 j = eval_jacobian(p, field);
    const FieldPoint xp = eval_field({p.x + h, p.y}, field), xm = eval_field({p.x - h, p.y}, field);
    const FieldPoint yp = eval_field({p.x, p.y + h}, field), ym = eval_field({p.x, p.y - h}, field);
    const double scale = std::max(1.0, std::hypot(j.dphi_dx, j.dpsi_dx));
    CHECK(std::abs((xp.phi - xm.phi) / (2 * h) - j.dphi_dx) / scale < 1e-5);
    CHECK(std::abs((yp.phi - ym.phi) / (2 * h) - j.dphi_dy) / scale < 1e-5);
    CHECK(std::abs((xp.psi - xm.psi) / (2 * h) - j.dpsi_dx) / scale < 1e-5);
    CHECK(std::abs((yp.psi - ym.psi) / (2 * h) - j.dpsi_dy) / scale < 1e-5);
  }
}

TEST_CASE("discrete Laplacian of phi and psi converges at second order") {
  const FlowField field({Obstacle::planned({0, 0}, 1.0), Obstacle::planned({4, 1}, 0.7)});
  auto laplacian = [&](Vec2 p, double h) {
    const FieldPoint c = eval_field(p, field);
    const FieldPoint e = eval_field({p.x + h, p.y}, field), w = eval_field({p.x - h, p.y}, field);
    const FieldPoint n = eval_field({p.x, p.y + h}, field), s = eval_field({p.x, p.y - h}, field);
    return std::pair{(e.phi + w.phi + n.phi + s.phi - 4 * c.phi) / (h * h),
                     (e.psi + w.psi + n.psi + s.psi - 4 * c.psi) / (h * h)};
  };
  for (Vec2 p : {Vec2{1.6, 0.3}, Vec2{-1.5, 1.1}, Vec2{2.0, -1.0}, Vec2{4.0, 2.2}}) {
    const auto [phi1, psi1] = laplacian(p, 0.04);
    const auto [phi2, psi2] = laplacian(p, 0.02);
    CAPTURE(p.x);
    CAPTURE(p.y);
    CHECK(std::abs(phi2) < 1e-2);
    CHECK(std::abs(psi2) < 1e-2);
    // Halving h quarters the truncation error.
    CHECK(std::abs(phi1 / phi2) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::abs(psi1 / psi2) == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("lambda_max of a single obstacle") {
  const FlowField field = unit_obstacle();

  SUBCASE("annulus peak is 4 at the top and bottom of the circle") {
    CHECK(lambda_max(field, {-5, 5, -5, 5}, 0.01) == doctest::Approx(4.0).epsilon(0.05 / 4.0));
    CHECK(eval_jacobian({0.0, 1.0}, field).stretch_sq() == doctest::Approx(4.0));
  }
  SUBCASE("far field tends to 1") {
    CHECK(lambda_max(field, {50, 60, -5, 5}, 0.05) == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("halving the step never lowers the maximum") {
    double prev = 0.0;
    for (double step : {0.2, 0.1, 0.05, 0.025}) {
      const double v = lambda_max(field, {-3, 3, -3, 3}, step);
      CHECK(v >= prev * (1.0 - 1e-12));  // node coordinates may differ by an ulp
      prev = v;
    }
    const LambdaEstimate est = lambda_max_checked(field, {-3, 3, -3, 3}, 0.01, 0.05);
    CHECK(est.refined >= est.value);
    CHECK(est.converged);
    CHECK(est.inflated == doctest::Approx(est.refined * 1.05));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(lambda_max(field, {-0.5, 0.5, -0.5, 0.5}, 0.01), EmptyDomain);
    CHECK_THROWS_AS(lambda_max(field, {-3, 3, -3, 3}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(lambda_max(field, {1, 1, -3, 3}, 0.1), InvalidArgument);
  }
}

TEST_CASE("grid_count includes the upper end within rounding") {
  CHECK(grid_count(-3.0, 3.0, 0.05) == 121);
  CHECK(grid_count(0.0, 1.0, 0.1) == 11);
  CHECK(grid_count(0.0, 1.05, 0.1) == 11);
}

TEST_CASE("clearance queries") {
  const FlowField field({Obstacle::planned({0, 0}, 1.0), Obstacle::planned({5, 0}, 2.0)});
  CHECK(field.inside_planned({0.5, 0.0}));
  CHECK_FALSE(field.inside_planned({1.0, 0.0}));
  CHECK(field.planned_clearance({2.0, 0.0}) == doctest::Approx(1.0));
  CHECK(field.nearest({4.0, 0.0}) == std::optional<std::size_t>(1));
  CHECK(std::isinf(FlowField().planned_clearance({0, 0})));
  CHECK_FALSE(FlowField().nearest({0, 0}).has_value());
}
