#include "loja/errors.hpp"
#include "loja/flow.hpp"

#include <doctest.h>

#include <cmath>

using namespace loja;

namespace {

Trajectory run(const char* text, std::vector<double> x0, FlowOptions o = {}) {
  PolynomialField E(parse(text));
  return integrate_flow(E, x0, o);
}

}  // namespace

TEST_CASE("critical set descriptors") {
  auto axes = CriticalSetDescriptor::subspaces(2, {{0}, {1}});
  std::vector<double> p{0.3, -0.4};
  CHECK(axes.distance(p) == doctest::Approx(0.3));
  CHECK(axes.nearest(p) == std::vector<double>{0.0, -0.4});
  auto origin = CriticalSetDescriptor::subspace(2, {});
  CHECK(origin.distance(p) == doctest::Approx(0.5));
  auto pts = CriticalSetDescriptor::points({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(pts.distance(p) == doctest::Approx(std::hypot(0.7, 0.4)));
  CHECK_THROWS_AS(CriticalSetDescriptor::subspace(2, {2}), DimensionError);
  CHECK_THROWS_AS(CriticalSetDescriptor::points({}), PreconditionError);
  std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(origin.distance(wrong), DimensionError);
}

TEST_CASE("x^2 from 0.5 follows 0.5 exp(-2t)") {
  FlowOptions o;
  o.critical_set = CriticalSetDescriptor::subspace(1, {});
  auto t = run("x^2", {0.5}, o);
  REQUIRE(t.converged);
  CHECK(t.stop_reason == StopReason::GradientBelowTol);
  CHECK(std::abs(t.arc_length - 0.5) < 1e-6);
  REQUIRE(t.limit_point);
  CHECK((*t.limit_point)[0] == 0.0);
  for (const auto& s : t.samples) CHECK(s.x[0] == doctest::Approx(0.5 * std::exp(-2.0 * s.t)).epsilon(1e-8));
  // Sharp constant 2: the bound is exactly E(x0)^(1/2) / (1/2 * 2) = 0.5.
  auto lb = verify_length_bound(t, Rational(1, 2), 2.0);
  CHECK(lb.bound == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lb.pass);
}

TEST_CASE("x^4 from 0.5 converges with the bound attained") {
  FlowOptions o;
  o.tol = 1e-19;
  o.t_max = 1e15;
  auto t = run("x^4", {0.5}, o);
  REQUIRE(t.converged);
  CHECK(std::abs(t.arc_length - 0.5) < 1e-6);
  // ||grad E|| = 4 |E|^(3/4): theta = 3/4, C = 4, bound = (1/16)^(1/4) / (1/4 * 4) = 0.5.
  auto lb = verify_length_bound(t, Rational(3, 4), 4.0);
  CHECK(std::abs(lb.bound - 0.5) < 1e-6);
  CHECK(lb.pass);
}

TEST_CASE("energy decreases and arc-length identities hold") {
  const std::vector<std::pair<const char*, std::vector<double>>> corpus{
      {"x^2", {0.5}},           {"x^4", {0.5}},           {"x^2 + y^4", {0.2, 0.2}},
      {"x^2*y^2", {0.3, 0.4}},  {"x^2 - y^3", {0.3, 0.2}}, {"x*y", {0.3, 0.1}},
      {"x^2*y^2 + x^6", {0.2, 0.3}}};
  for (const auto& [text, x0] : corpus) {
    INFO(text);
    auto t = run(text, x0);
    CHECK(energy_monotone(t));
    for (std::size_t k = 1; k < t.samples.size(); ++k) CHECK(t.samples[k].arc_length >= t.samples[k - 1].arc_length);
    auto ids = check_arc_length_identities(t);
    CHECK(ids.interior_samples > 10);
    CHECK(ids.max_speed_error <= 1e-6);
    CHECK(ids.max_q_relative_error <= 1e-6);
    CHECK(ids.pass);
  }
}

TEST_CASE("stop reasons") {
  auto left = run("x^2 - y^3", {0.3, 0.2});
  CHECK(left.stop_reason == StopReason::LeftDomain);
  CHECK_FALSE(left.converged);
  CHECK_THROWS_AS(verify_length_bound(left, Rational(2, 3), 1.0), PreconditionError);
  FlowOptions o;
  o.t_max = 0.1;
  auto timed = run("x^2", {0.5}, o);
  CHECK(timed.stop_reason == StopReason::MaxTime);
  CHECK(timed.samples.back().t == doctest::Approx(0.1));
  auto at_rest = run("x^2", {0.0});
  CHECK(at_rest.converged);
  CHECK(at_rest.samples.size() == 1);
  CHECK_THROWS_AS(run("x^2", {2.0}), PreconditionError);
  CHECK_THROWS_AS(run("x^2", {0.1, 0.1}), DimensionError);
}

TEST_CASE("finite length within the bound on the corpus") {
  // Exponent and a constant valid along each path.
  struct Case {
    const char* text;
    std::vector<double> x0;
    Rational theta;
    double C;
  };
  const std::vector<Case> cases{{"x^2", {0.5}, Rational(1, 2), 2.0},
                                {"x^2*y^2", {0.3, 0.4}, Rational(3, 4), 2.0},
                                {"x^2 + y^4", {0.2, 0.2}, Rational(3, 4), 1.0}};
  for (const auto& c : cases) {
    INFO(c.text);
    auto t = run(c.text, c.x0);
    REQUIRE(t.converged);
    auto lb = verify_length_bound(t, c.theta, c.C);
    CHECK(lb.pass);
    CHECK(lb.margin >= -0.01 * lb.bound);
  }
}

TEST_CASE("distance inequalities") {
  auto x2 = verify_distance_inequalities(parse("x^2"), CriticalSetDescriptor::subspace(1, {}), Rational(1, 2));
  REQUIRE(x2.size() == 4);
  CHECK(x2[0].kind == InequalityKind::DistanceCritical);
  CHECK(x2[0].exponent == 2);
  CHECK(std::abs(x2[0].measured_constant - 1.0) < 1e-9);
  CHECK(x2[2].measured_constant == doctest::Approx(2.0));

  auto xy = verify_distance_inequalities(parse("x^2*y^2"), CriticalSetDescriptor::subspaces(2, {{0}, {1}}),
                                         Rational(3, 4));
  CHECK(xy[0].exponent == 4);
  CHECK(xy[1].exponent == 4);
  CHECK(xy[2].exponent == 3);
  for (const auto& r : xy) {
    CHECK(r.measured_constant > 0.0);
    CHECK(r.pass);
  }

  auto cusp = verify_distance_inequalities(parse("x^2 - y^3"), CriticalSetDescriptor::subspace(2, {}),
                                           Rational(2, 3));
  CHECK(cusp[0].skipped);
  CHECK_THROWS_AS(verify_distance_inequalities(parse("x^2"), CriticalSetDescriptor::subspace(1, {}), Rational(1)),
                  PreconditionError);
  CHECK_THROWS_AS(verify_distance_inequalities(parse("x^2*y"), CriticalSetDescriptor::subspace(1, {}),
                                               Rational(1, 2)),
                  DimensionError);
}

TEST_CASE("gamma exponent comes from the normal-crossings form of the squared gradient") {
  // E = x^3 y^3: ||grad E||^2 = 9 x^4 y^4 (x^2 + y^2) is not normal crossings, so gamma = mu.
  auto r = verify_distance_inequalities(parse("x^3*y^3"), CriticalSetDescriptor::subspaces(2, {{0}, {1}}),
                                        Rational(5, 6));
  CHECK(r[3].exponent == r[2].exponent);
  CHECK_FALSE(r[3].note.empty());
  DistanceCheckOptions o;
  o.theta_F = Rational(3, 4);
  auto g = verify_distance_inequalities(parse("x^2"), CriticalSetDescriptor::subspace(1, {}), Rational(1, 2), o);
  // theta'_F = 7/8, beta_F = 4, gamma = 2.
  CHECK(g[3].exponent == 2);
}

TEST_CASE("radial flow of x^2 + y^2 attains the bound") {
  auto t = run("x^2 + y^2", {0.3, 0.4});
  REQUIRE(t.converged);
  CHECK(std::abs(t.arc_length - 0.5) < 1e-6);
  auto lb = verify_length_bound(t, Rational(1, 2), 2.0);
  CHECK(lb.bound == doctest::Approx(0.5));
  CHECK(lb.pass);
}

TEST_CASE("limit points agree at halved step sizes") {
  // Tolerances 32 times tighter halve the step of a fifth-order pair.
  FlowOptions fine;
  fine.atol /= 32.0;
  fine.rtol /= 32.0;
  for (const auto& [text, x0] : std::vector<std::pair<const char*, std::vector<double>>>{
           {"x^2*y^2", {0.3, 0.4}}, {"x^2 + y^4", {0.2, 0.2}}, {"x^2 + y^2", {0.3, 0.4}}}) {
    INFO(text);
    auto a = run(text, x0);
    auto b = run(text, x0, fine);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    for (std::size_t i = 0; i < x0.size(); ++i) CHECK(std::abs(a.samples.back().x[i] - b.samples.back().x[i]) < 1e-6);
  }
}
