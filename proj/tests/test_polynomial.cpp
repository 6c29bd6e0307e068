#include "loja/errors.hpp"
#include "loja/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace loja;

TEST_CASE("parse and print round trip in canonical order") {
  CHECK(parse("x^2 - y^3").to_string() == "x^2 - y^3");
  CHECK(parse("-y^3 + x^2").to_string() == "x^2 - y^3");
  CHECK(parse("x1*x2").to_string() == "x1*x2");
  CHECK(parse("(x + y)^2").to_string() == "x^2 + 2*x*y + y^2");
  CHECK(parse("1/2*x - 3/4").to_string() == "-3/4 + 1/2*x");
  CHECK(parse("x - x").to_string() == "0");
  auto p = parse("3*x^2*y - 2/3*y^5 + 7");
  CHECK(parse(p.to_string(), p.variables()) == p);
}

TEST_CASE("variables keep declared order then order of appearance") {
  auto p = parse("y^2 + x", {"x"});
  REQUIRE(p.variables() == std::vector<std::string>{"x", "y"});
  CHECK(parse("y + x").variables() == std::vector<std::string>{"y", "x"});
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const char* text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("no ParseError for " << text);
    return 0;
  };
  CHECK(position_of("x^2 y") == 4);
  CHECK(position_of("x + $") == 4);
  CHECK_THROWS_AS(parse("x^1.5"), ParseError);
  CHECK_THROWS_AS(parse("x^"), ParseError);
  CHECK_THROWS_AS(parse("x^2^3"), ParseError);
  CHECK_THROWS_AS(parse("(x + y"), ParseError);
  CHECK_THROWS_AS(parse("x + y)"), ParseError);
  CHECK_THROWS_AS(parse("x/0"), ParseError);
  CHECK_THROWS_AS(parse("2x"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("degree and term caps") {
  CHECK_NOTHROW(parse("x^64"));
  CHECK_THROWS_AS(parse("x^65"), LimitError);
  CHECK_THROWS_AS(parse("x^40 * x^40"), LimitError);
}

TEST_CASE("arithmetic aligns variables") {
  auto a = parse("x + 1");
  auto b = parse("y - 1");
  auto s = a + b;
  CHECK(s.variables() == std::vector<std::string>{"x", "y"});
  CHECK(s.to_string() == "x + y");
  CHECK((a * b).to_string() == "-1 - x + y + x*y");
  CHECK(pow(parse("x + y"), 3) == parse("x^3 + 3*x^2*y + 3*x*y^2 + y^3"));
  CHECK((Rational(1, 2) * parse("2*x")).to_string() == "x");
  CHECK((-a).to_string() == "-1 - x");
}

TEST_CASE("degrees, order and coefficients") {
  auto p = parse("x^2*y - y^5 + x^3");
  CHECK(p.total_degree() == 5);
  CHECK(p.order() == 3);
  CHECK(p.degree_in(1) == 5);
  CHECK(p.coefficient({2, 1}) == 1);
  CHECK(p.coefficient({0, 5}) == -1);
  CHECK(p.constant_term() == 0);
  CHECK(p.homogeneous_part(3).to_string() == "x^3 + x^2*y");
  CHECK_THROWS_AS(Polynomial({"x"}).order(), PreconditionError);
}

TEST_CASE("evaluation in doubles and rationals") {
  auto p = parse("x^2 - y^3 + 1/3");
  std::vector<double> x{2.0, 1.5};
  CHECK(p.evaluate(x) == doctest::Approx(4.0 - 3.375 + 1.0 / 3.0));
  std::vector<Rational> q{Rational(1, 2), Rational(2, 3)};
  CHECK(p.evaluate(q) == Rational(1, 4) - Rational(8, 27) + Rational(1, 3));
  std::vector<double> bad{1.0};
  CHECK_THROWS_AS(p.evaluate(bad), DimensionError);
}

TEST_CASE("derivatives and gradient") {
  auto p = parse("x^3*y^2 - 4*y + x");
  CHECK(p.derivative(0).to_string() == "1 + 3*x^2*y^2");
  CHECK(p.derivative(1).to_string() == "-4 + 2*x^3*y");
  auto g = p.gradient();
  REQUIRE(g.size() == 2);
  CHECK(g[1] == p.derivative(1));
}

TEST_CASE("substitution composes and rejects name collisions") {
  auto p = parse("x^2 - y^3");
  Substitution chart1{{{"x", parse("u*v")}, {"y", parse("v")}}};
  CHECK(substitute(p, chart1).to_string() == "-v^3 + u^2*v^2");
  Substitution bad{{{"x", parse("y + 1")}}};
  CHECK_THROWS_AS(substitute(p, bad), DimensionError);
  Substitution identity_then_shift{{{"x", parse("y + 1")}, {"y", parse("y")}}};
  CHECK(substitute(p, identity_then_shift) == parse("1 + 2*y + y^2 - y^3"));
  Substitution unknown{{{"z", parse("u")}}};
  CHECK_THROWS_AS(substitute(p, unknown), DimensionError);
}

TEST_CASE("monomial factor extraction") {
  auto c = extract_monomial_factor(parse("x^6*y^2 - x^6*y^3"));
  CHECK(c.exponents == Exponents{6, 2});
  CHECK(c.quotient.to_string() == "1 - y");
  CHECK_THROWS_AS(extract_monomial_factor(Polynomial({"x"})), PreconditionError);
}

TEST_CASE("renaming and variable extension") {
  auto p = parse("a^2 - a^3*b^3");
  auto r = p.renamed({{"a", "u_2"}, {"b", "v_2"}});
  CHECK(r.to_string() == "u_2^2 - u_2^3*v_2^3");
  auto w = parse("x").with_variables({"y", "x"});
  CHECK(w.variables() == std::vector<std::string>{"y", "x"});
  CHECK_THROWS_AS(parse("x*y").with_variables({"x"}), DimensionError);
}

TEST_CASE("rational helpers") {
  CHECK(to_string(parse_rational("-6/8")) == "-3/4");
  CHECK(to_string(parse_rational("5")) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
}

TEST_CASE("ring identities on random polynomials") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-5, 5), deg(0, 4);
  auto random_poly = [&] {
    Polynomial::TermMap t;
    for (int k = 0; k < 6; ++k) t[{unsigned(deg(rng)), unsigned(deg(rng))}] += Rational(coef(rng), 1 + deg(rng));
    return Polynomial({"x", "y"}, t);
  };
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_poly(), b = random_poly(), c = random_poly();
    CHECK((a + b) - b == a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b).derivative(0) == a.derivative(0) * b + a * b.derivative(0));
    CHECK(parse(a.to_string(), {"x", "y"}) == a);
    std::vector<Rational> pt{Rational(coef(rng), 3), Rational(coef(rng), 7)};
    CHECK((a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt));
  }
}
