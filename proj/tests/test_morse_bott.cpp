#include "loja/errors.hpp"
#include "loja/morse_bott.hpp"

#include <doctest.h>

#include <cmath>

using namespace loja;

namespace {

RationalMatrix oracle_hessian(const Polynomial& p) {
  RationalMatrix h(p.dimension(), std::vector<Rational>(p.dimension()));
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    for (std::size_t j = 0; j < p.dimension(); ++j) h[i][j] = p.derivative(i).derivative(j).constant_term();
  }
  return h;
}

bool annihilates(const RationalMatrix& m, const std::vector<Rational>& v) {
  for (const auto& row : m) {
    Rational s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += row[j] * v[j];
    if (s != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("exact Hessian and kernel") {
  for (const char* text : {"x^2 + y^2", "x^2 - y^3", "x*y + z^2 - x^3", "3*x^2 + 2*x*y"}) {
    INFO(text);
    auto p = parse(text);
    auto h = hessian_at_origin(p);
    CHECK(h == oracle_hessian(p));
    for (const auto& v : kernel_basis(h)) CHECK(annihilates(h, v));
  }
  RationalMatrix rank_one{{1, 2}, {2, 4}};
  auto k = kernel_basis(rank_one);
  REQUIRE(k.size() == 1);
  CHECK(k[0] == std::vector<Rational>{-2, 1});
}

TEST_CASE("x^2 + y^2 is Morse-Bott at an isolated minimum") {
  auto r = check_morse_bott(parse("x^2 + y^2"), {});
  CHECK(r.verdict);
  CHECK(r.hessian_kernel.empty());
  CHECK(r.kernel_equals_K);
  CHECK(r.predicted_theta == Rational(1, 2));
  CHECK(r.order_N == 2u);
}

TEST_CASE("cusp is not Morse-Bott; Hessian kernel is the y axis") {
  auto r = check_morse_bott(parse("x^2 - y^3"), {});
  CHECK_FALSE(r.verdict);
  REQUIRE(r.hessian_kernel.size() == 1);
  CHECK(r.hessian_kernel[0] == std::vector<Rational>{0, 1});
  CHECK_FALSE(r.kernel_equals_K);
}

TEST_CASE("critical line x = 0 of x^2") {
  auto r = check_morse_bott(parse("x^2", {"x", "y"}), {1});
  CHECK(r.verdict);
  CHECK(r.gradient_vanishes_on_K);
  CHECK(r.no_critical_points_off_K);
}

TEST_CASE("wrong critical set is detected off K") {
  auto r = check_morse_bott(parse("x^2*y^2"), {0});
  CHECK_FALSE(r.verdict);
  CHECK(r.off_K_critical_samples > 0);
}

TEST_CASE("x^3 + x^2 y^5 fails the order-3 condition on second derivatives") {
  auto r = check_generalized_morse_bott(parse("x^3 + x^2*y^5"), {1}, 3);
  CHECK_FALSE(r.verdict);
  CHECK_FALSE(r.condition_b);
  CHECK(r.condition_b_failure == "d^2/dx^2");
  CHECK(r.condition_b_restriction == "2*y^5");
}

TEST_CASE("generalized order-4 condition for x^4 along the y axis") {
  auto r = check_generalized_morse_bott(parse("x^4", {"x", "y"}), {1}, 4);
  CHECK(r.verdict);
  CHECK(r.condition_a);
  CHECK(r.condition_b);
  CHECK(r.condition_c);
  REQUIRE(r.coercivity_zeta);
  // 4! * 1 on the unit normal vector.
  CHECK(*r.coercivity_zeta == doctest::Approx(24.0));
  CHECK(r.zeta_lipschitz_certified);
  CHECK(r.predicted_theta == Rational(3, 4));
}

TEST_CASE("indefinite quadratic fails coercivity") {
  auto r = check_generalized_morse_bott(parse("x^2 - y^2"), {}, 2);
  CHECK_FALSE(r.condition_c);
  CHECK_FALSE(r.verdict);
}

TEST_CASE("Morse-Bott preconditions") {
  CHECK_THROWS_AS(check_morse_bott(parse("x + y^2"), {}), PreconditionError);
  CHECK_THROWS_AS(check_morse_bott(parse("x^2"), {3}), DimensionError);
  CHECK_THROWS_AS(check_generalized_morse_bott(parse("x^2"), {}, 1), PreconditionError);
}

TEST_CASE("generalized gradient inequality constants") {
  auto x2 = parse("x^2");
  auto g = verify_gmb_gradient_inequality(x2, check_generalized_morse_bott(x2, {}, 2));
  // (N/4) ((2/N!) * 2)^(1/N) with N = 2.
  CHECK(g.constant_C == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(g.check.measured_constant == doctest::Approx(2.0));
  CHECK(g.check.pass);

  auto x4 = parse("x^4");
  g = verify_gmb_gradient_inequality(x4, check_generalized_morse_bott(x4, {}, 4));
  CHECK(g.constant_C == doctest::Approx(std::pow(2.0, 0.25)));
  CHECK(g.check.pass);

  auto q = parse("x^2 + y^2 + x^3");
  g = verify_gmb_gradient_inequality(q, check_generalized_morse_bott(q, {}, 2));
  CHECK(g.check.pass);
  CHECK(g.R < 1.0);
}

TEST_CASE("failing verdict needs an explicit opt-in and is then refuted by probes") {
  auto b = parse("x^3 + x^2*y^5");
  auto r = check_generalized_morse_bott(b, {1}, 3);
  CHECK_THROWS_AS(verify_gmb_gradient_inequality(b, r), PreconditionError);
  GmbCheckOptions o;
  o.allow_failed_verdict = true;
  // The second critical curve x = -2/3 y^5.
  for (double y : {0.5, 0.2, 0.1, 0.05}) o.probe_points.push_back({-2.0 / 3.0 * std::pow(y, 5), y});
  auto g = verify_gmb_gradient_inequality(b, r, o);
  REQUIRE(g.probe_min_ratio);
  CHECK(*g.probe_min_ratio < g.constant_C);
  CHECK_FALSE(g.check.pass);
}
