#include <doctest.h>

#include <cmath>

#include "../support/generators.hpp"
#include "streamnav/errors.hpp"
#include "streamnav/safety_analysis.hpp"

using namespace streamnav;

namespace {

const SafetyMargins kMargins{0.40, 0.28};

std::vector<Vec2> pair_at(double d) { return {{0.0, 0.0}, {d, 0.0}}; }

ScenarioLog constant_log(std::vector<Vec2> positions, int steps, const FlowField& field) {
  ScenarioLog log;
  log.fields.push_back(field);
  for (int k = 0; k < steps; ++k) {
    StepRecord rec;
    rec.step = k;
    rec.time = 0.01 * (k + 1);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      AgentRecord a;
      a.id = static_cast<int>(i) + 1;
      a.desired_position = positions[i];
      rec.agents.push_back(a);
    }
    log.steps.push_back(rec);
  }
  return log;
}

bool segment_clear(Vec2 a, Vec2 b, const FlowField& field) {
  for (int s = 0; s <= 200; ++s) {
    const double t = s / 200.0;
    if (field.inside_planned(a + (b - a) * t)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("single-obstacle condition at the published constants") {
  const SafetyReport pass = check_theorem2(pair_at(2.72), kMargins, 1.36);
  CHECK(pass.theorem2 == Verdict::Pass);
  CHECK(std::abs(*pass.theorem2_margin) < 1e-12);

  CHECK(check_theorem2(pair_at(2.71), kMargins, 1.36).theorem2 == Verdict::Fail);
  CHECK(theorem2_condition(2.72, kMargins, 1.36));
  CHECK_FALSE(theorem2_condition(2.71, kMargins, 1.36));
}

TEST_CASE("single-obstacle condition requires exactly one obstacle") {
  const FlowField two({Obstacle::failed_agent({0, 0}, kMargins), Obstacle::failed_agent({10, 0}, kMargins)});
  const std::vector<Vec2> p{{-5, 3}, {-5, -3}};
  CHECK_THROWS_AS(check_theorem2(p, two, kMargins), NotApplicable);
  CHECK_THROWS_AS(check_theorem2(p, FlowField(), kMargins), NotApplicable);

  const FlowField one({Obstacle::failed_agent({0, 0}, kMargins)});
  const SafetyReport r = check_theorem2(p, one, kMargins);
  CHECK(r.theorem2 == Verdict::Pass);
  CHECK(r.d_min0 == doctest::Approx(6.0));
  CHECK(r.p_min0 > 0.0);
}

TEST_CASE("single-obstacle condition is monotone in d_min0") {
  testgen::Gen g(41);
  for (int i = 0; i < 1000; ++i) {
    const SafetyMargins m{g.uniform(0.05, 1.0), g.uniform(0.05, 1.0)};
    const double a_p = g.uniform(0.1, 3.0);
    const double d1 = g.uniform(0.0, 10.0);
    const double d2 = d1 + g.uniform(0.0, 5.0);
    if (theorem2_condition(d1, m, a_p)) CHECK(theorem2_condition(d2, m, a_p));
  }
}

TEST_CASE("general condition") {
  SUBCASE("identity field reduces to the separation floor") {
    const Box dom{-5, 5, -5, 5};
    CHECK(check_theorem1(pair_at(1.40), FlowField(), kMargins, dom).theorem1 == Verdict::Pass);
    CHECK(check_theorem1(pair_at(1.30), FlowField(), kMargins, dom).theorem1 == Verdict::Fail);
    CHECK(check_theorem1(pair_at(1.40), FlowField(), kMargins, dom).lambda_max == 1.0);
  }
  SUBCASE("single obstacle needs p_min0 of about 2.72") {
    const FlowField field({Obstacle::failed_agent({0, 0}, kMargins)});
    const Box dom{-8, 8, -8, 8};
    // Far from the obstacle phi-psi distance is close to x-y distance.
    const std::vector<Vec2> wide{{-30, 40}, {-30 + 2.80, 40}};
    const std::vector<Vec2> narrow{{-30, 40}, {-30 + 2.60, 40}};
    const SafetyReport w = check_theorem1(wide, field, kMargins, dom);
    CHECK(w.lambda_max == doctest::Approx(4.0).epsilon(0.0125));
    CHECK(w.theorem1 == Verdict::Pass);
    CHECK(check_theorem1(narrow, field, kMargins, dom).theorem1 == Verdict::Fail);
  }
  SUBCASE("refinement and inflation") {
    const FlowField field({Obstacle::failed_agent({0, 0}, kMargins)});
    Theorem1Options opts;
    opts.refine = true;
    opts.lambda_inflation = 0.05;
    const std::vector<Vec2> far{{-30, 40}, {-17, 40}};
    const SafetyReport r = check_theorem1(far, field, kMargins, {-8, 8, -8, 8}, opts);
    REQUIRE(r.lambda_relative_change.has_value());
    CHECK(*r.lambda_relative_change < 0.01);
    CHECK(r.lambda_max == doctest::Approx(4.0 * 1.05).epsilon(0.02));
  }
  SUBCASE("errors") {
    const FlowField field({Obstacle::failed_agent({0, 0}, kMargins)});
    const std::vector<Vec2> one{{5, 5}};
    CHECK_THROWS_AS(check_theorem1(one, field, kMargins, {-8, 8, -8, 8}), InvalidArgument);
    const std::vector<Vec2> inside{{0.5, 0}, {5, 5}};
    CHECK_THROWS_AS(check_theorem1(inside, field, kMargins, {-8, 8, -8, 8}), AgentInsideExclusion);
    const std::vector<Vec2> outside{{3, 0}, {6, 0}};
    CHECK_THROWS_AS(check_theorem1(outside, field, kMargins, {-0.9, 0.9, -0.9, 0.9}), EmptyDomain);
  }
}

TEST_CASE("conformal distance bound on random pairs") {
  testgen::Gen g(42);
  const Box dom{-6, 6, -6, 6};
  int pairs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const FlowField field = g.field(2, {-3, 3, -3, 3});
    const double lambda = lambda_max(field, dom, 0.01);
    int done = 0;
    while (done < 50) {
      const Vec2 a = g.point_outside(dom, field, 0.0);
      const Vec2 b = a + Vec2{g.uniform(-1.5, 1.5), g.uniform(-1.5, 1.5)};
      if (b.x < dom.x_min || b.x > dom.x_max || b.y < dom.y_min || b.y > dom.y_max) continue;
      if (!segment_clear(a, b, field)) continue;
      const FieldPoint fa = eval_field(a, field), fb = eval_field(b, field);
      const double dxy2 = std::pow(distance(a, b), 2);
      const double dpp2 = std::pow(fa.phi - fb.phi, 2) + std::pow(fa.psi - fb.psi, 2);
      CHECK(dxy2 >= dpp2 / lambda);
      ++done;
      ++pairs;
    }
  }
  CHECK(pairs == 1000);
}

TEST_CASE("separation monitors") {
  SUBCASE("two agents at exactly the floor") {
    const ScenarioLog log = constant_log({{0, 0}, {0, 1.36}}, 10, FlowField());
    const auto samples = monitor_separations(log, kMargins);
    REQUIRE(samples.size() == 10);
    for (const auto& s : samples) CHECK(*s.d_min_commanded == doctest::Approx(1.36));
    CHECK(summarize(samples, kMargins).separation_ok);
    CHECK_FALSE(samples[0].clearance_commanded.has_value());
  }
  SUBCASE("one agent: no separation but clearance is reported") {
    const FlowField field({Obstacle::failed_agent({0, 0}, kMargins)});
    const auto samples = monitor_separations(constant_log({{3, 0}}, 5, field), kMargins);
    CHECK_FALSE(samples[0].d_min_commanded.has_value());
    REQUIRE(samples[0].clearance_commanded.has_value());
    CHECK(*samples[0].clearance_commanded == doctest::Approx(3.0 - 0.68));
  }
  SUBCASE("violations are detected") {
    const FlowField field({Obstacle::failed_agent({0, 0}, kMargins)});
    const auto samples = monitor_separations(constant_log({{0.8, 0}, {0.8, 1.0}}, 3, FlowField()),
                                             kMargins, field);
    const SeparationSummary sum = summarize(samples, kMargins);
    CHECK_FALSE(sum.separation_ok);
    CHECK_FALSE(sum.clearance_ok);
  }
  SUBCASE("failed agents are ignored") {
    ScenarioLog log = constant_log({{0, 0}, {0, 0.5}, {0, 3}}, 2, FlowField());
    for (auto& rec : log.steps) rec.agents[1].healthy = false;
    const auto samples = monitor_separations(log, kMargins);
    CHECK(*samples[0].d_min_commanded == doctest::Approx(3.0));
  }
}

TEST_CASE("min distances") {
  CHECK_THROWS_AS(min_pairwise_distance(std::vector<Vec2>{{0, 0}}), InvalidArgument);
  const std::vector<Vec2> p{{0, 0}, {3, 4}, {10, 0}};
  CHECK(min_pairwise_distance(p) == 5.0);
  CHECK(min_phi_psi_distance(p, FlowField()) == 5.0);
  CHECK(std::string(to_string(Verdict::NotApplicable)) == "not-applicable");
}
