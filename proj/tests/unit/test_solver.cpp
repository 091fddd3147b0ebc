#include <doctest.h>

#include <cmath>

#include "../support/generators.hpp"
#include "streamnav/errors.hpp"
#include "streamnav/streamline_solver.hpp"

using namespace streamnav;

namespace {

FlowField unit_obstacle() { return FlowField({Obstacle::planned({0.0, 0.0}, 1.0)}); }

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.noise_sigma = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("identity field inverts in one step") {
  NoiseSource noise(1);
  const SolveResult r = calc_xy(1.5, -2.0, {0.0, 0.0}, FlowField(), SolverConfig{}, noise);
  CHECK(r.position.x == 1.5);
  CHECK(r.position.y == -2.0);
  CHECK(r.phi_residual == 0.0);
  CHECK(r.psi_residual == 0.0);
  CHECK_FALSE(r.noise_was_injected);
  CHECK(r.velocity.x == doctest::Approx(150.0));
}

TEST_CASE("inverting the (2, 0) image of the unit obstacle") {
  NoiseSource noise(1);
  const SolveResult r = calc_xy(2.5, 0.0, {1.9, 0.05}, unit_obstacle(), SolverConfig{}, noise);
  CHECK(std::abs(r.position.x - 2.0) < 1e-6);
  CHECK(std::abs(r.position.y) < 1e-6);
  CHECK(r.phi_residual < 1e-12);
  CHECK_FALSE(r.noise_was_injected);
}

TEST_CASE("targeting the saddle stays outside and injects noise") {
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 7ULL, 42ULL}) {
    CAPTURE(seed);
    NoiseSource noise(seed);
    const FlowField field = unit_obstacle();
    const SolveResult r = calc_xy(2.0, 0.0, {1.05, 0.0}, field, SolverConfig{}, noise);
    CHECK(norm(r.position) >= 1.0);
    CHECK(std::abs(eval_field(r.position, field).psi) <= 1e-3);
    CHECK(r.noise_was_injected);
  }
}

TEST_CASE("round trip over random fields") {
  testgen::Gen g(31);
  const Box region{-10, 10, -10, 10};
  NoiseSource noise(3);
  for (int trial = 0; trial < 200; ++trial) {
    const FlowField field = g.field(3, region);
    const Vec2 p = g.point_outside(region, field, 0.1);
    const Vec2 guess = p + Vec2{g.uniform(-0.05, 0.05), g.uniform(-0.05, 0.05)};
    const FieldPoint target = eval_field(p, field);
    const SolveResult r = calc_xy(target.phi, target.psi, guess, field, SolverConfig{}, noise);
    CAPTURE(trial);
    CHECK(distance(r.position, p) < 1e-6);
  }
}

TEST_CASE("returned positions never enter a planned disk") {
  testgen::Gen g(32);
  const Box region{-6, 6, -6, 6};
  NoiseSource noise(4);
  for (int trial = 0; trial < 500; ++trial) {
    const FlowField field = g.field(3, region);
    // Arbitrary targets and guesses, including guesses inside disks.
    const Vec2 guess = g.point(region);
    const FieldPoint target = eval_field(g.point_outside(region, field, 0.0), field);
    SolveResult r;
    try {
      r = calc_xy(target.phi, target.psi, guess, field, SolverConfig{}, noise);
    } catch (const SingularJacobian&) {
      continue;
    } catch (const NonFinite&) {
      continue;
    }
    CHECK(field.planned_clearance(r.position) >= -1e-9);
  }
}

TEST_CASE("guess at an obstacle center is moved off the singularity") {
  NoiseSource noise(5);
  const FlowField field = unit_obstacle();
  const SolveResult r = calc_xy(2.5, 0.0, {0.0, 0.0}, field, SolverConfig{}, noise);
  CHECK(field.planned_clearance(r.position) >= -1e-9);
  CHECK(std::isfinite(r.position.x));
}

TEST_CASE("velocity is the displacement over dt") {
  testgen::Gen g(33);
  NoiseSource noise(6);
  const FlowField field = unit_obstacle();
  SolverConfig cfg;
  for (int i = 0; i < 200; ++i) {
    const Vec2 p = g.point_outside({-4, 4, -4, 4}, field, 0.2);
    const Vec2 guess = p + Vec2{g.uniform(-0.05, 0.05), g.uniform(-0.05, 0.05)};
    const FieldPoint t = eval_field(p, field);
    const SolveResult r = calc_xy(t.phi, t.psi, guess, field, cfg, noise);
    const Vec2 dr = r.position - guess;
    const Vec2 back = r.velocity * cfg.dt;
    CHECK(norm(back - dr) <= 1e-15 * std::max(1.0, norm(dr)));
  }
}

TEST_CASE("solver is deterministic for a given seed") {
  const FlowField field = unit_obstacle();
  auto run = [&](std::uint64_t seed) {
    NoiseSource noise(seed);
    std::vector<SolveResult> out;
    for (int i = 0; i < 20; ++i) {
      out.push_back(calc_xy(2.0 + 0.001 * i, 0.0, {1.05, 0.0}, field, SolverConfig{}, noise));
    }
    return out;
  };
  const auto a = run(9), b = run(9), c = run(10);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position == b[i].position);
    CHECK(a[i].velocity == b[i].velocity);
    any_diff = any_diff || !(a[i].position == c[i].position);
  }
  CHECK(any_diff);
}

TEST_CASE("zero sigma disables noise without breaking the exclusion guarantee") {
  SolverConfig cfg;
  cfg.noise_sigma = 0.0;
  NoiseSource noise(1);
  const FlowField field = unit_obstacle();
  const SolveResult r = calc_xy(2.0, 0.0, {1.05, 0.0}, field, cfg, noise);
  CHECK(norm(r.position) >= 1.0 - 1e-9);
}

TEST_CASE("invert_batch") {
  const FlowField field = unit_obstacle();
  SUBCASE("empty") {
    NoiseSource noise(1);
    CHECK(invert_batch({}, field, SolverConfig{}, noise).empty());
  }
  SUBCASE("identical targets under the same seed give identical results") {
    const std::vector<InversionTarget> targets{{2.5, 0.0, {1.9, 0.05}}, {2.5, 0.0, {1.9, 0.05}}};
    NoiseSource n1(8), n2(8);
    const auto a = invert_batch(targets, field, SolverConfig{}, n1);
    const auto b = invert_batch(targets, field, SolverConfig{}, n2);
    REQUIRE(a.size() == 2);
    CHECK(a[0].position == a[1].position);
    CHECK(a[0].position == b[0].position);
  }
  SUBCASE("matches per-element calc_xy in order") {
    const std::vector<InversionTarget> targets{
        {2.5, 0.0, {1.9, 0.05}}, {2.0, 0.0, {1.05, 0.0}}, {-3.0, 1.0, {-2.5, 1.0}}};
    NoiseSource n1(9), n2(9);
    const auto batch = invert_batch(targets, field, SolverConfig{}, n1);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const SolveResult r = calc_xy(targets[i].phi, targets[i].psi, targets[i].guess, field,
                                    SolverConfig{}, n2);
      CHECK(batch[i].position == r.position);
    }
  }
  SUBCASE("failures carry the element index") {
    const std::vector<InversionTarget> targets{{2.5, 0.0, {1.9, 0.05}}, {NAN, 0.0, {2.0, 0.0}}};
    NoiseSource noise(1);
    try {
      invert_batch(targets, field, SolverConfig{}, noise);
      FAIL("expected AgentSolveError");
    } catch (const AgentSolveError& e) {
      CHECK(e.index() == 1);
    }
  }
}

TEST_CASE("six-agent target set inverts to tight residuals") {
  const SafetyMargins m;
  const FlowField field({Obstacle::failed_agent({0, 0}, m)});
  const std::vector<Vec2> agents{{-4.711, 0.3}, {-2.356, 1.36}, {-2.356, -1.36},
                                 {-4.711, 2.72}, {-4.711, -2.72}};
  std::vector<InversionTarget> targets;
  for (const Vec2& p : agents) {
    const FieldPoint f = eval_field(p, field);
    targets.push_back({f.phi + 0.01, f.psi, p});
  }
  NoiseSource noise(1);
  for (const SolveResult& r : invert_batch(targets, field, SolverConfig{}, noise)) {
    CHECK(r.phi_residual < 1e-6);
    CHECK(r.psi_residual < 1e-6);
  }
}

TEST_CASE("project_outside") {
  const FlowField field = unit_obstacle();
  Vec2 p{0.5, 0.0};
  CHECK(project_outside(p, field));
  CHECK(norm(p) >= 1.0);
  Vec2 q{2.0, 0.0};
  CHECK_FALSE(project_outside(q, field));
  CHECK(q == Vec2{2.0, 0.0});
}
