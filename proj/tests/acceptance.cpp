// One PASS/FAIL line per acceptance criterion. Expected values come from
// small independent computations here, never from the engine's own output.
#include "loja/blowup.hpp"
#include "loja/estimator.hpp"
#include "loja/flow.hpp"
#include "loja/morse_bott.hpp"
#include "loja/snc.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace loja;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream limit;
  limit << "limit " << limit_seconds << " s";
  o.require(secs < limit_seconds, "runtime over " + limit.str());
  if (!o.ok) ++failures;
  std::printf("%s [%d] %s (%.2f s, %s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs, limit.str().c_str(),
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

unsigned degree_sum(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

Rational one_minus_inverse(unsigned N) { return Rational(1) - Rational(1, N); }

// Worked-example charts in their own variable names.
struct Chart {
  const char* path;
  const char* text;
  const char* a;
  const char* b;
};

constexpr Chart kTower[] = {
    {"root/1", "u^2*v^2 - v^3", "u", "v"},
    {"root/2", "a^2 - a^3*b^3", "a", "b"},
    {"root/1/2", "r^4*s^2 - r^3*s^3", "r", "s"},
    {"root/1/2/2", "alpha^6*beta^2 - alpha^6*beta^3", "alpha", "beta"},
    {"root/2/1", "c^2*d^2 - c^3*d^6", "c", "d"},
    {"root/2/1/1", "g^2*h^4 - g^3*h^9", "g", "h"},
};

ResolutionResult cusp_tower() {
  ResolveOptions o;
  o.max_depth = 3;
  o.mode = ResolveMode::Uniform;
  return resolve(parse("x^2 - y^3"), o);
}

const char* const kSncCorpus[] = {"x1*x2", "x^2", "x^2*y^2", "x^6*y^2", "x^6*y", "x^3", "x^4", "x^5", "x^6"};

ExponentEstimate estimate_at_origin(const ScalarField& E) {
  std::vector<double> origin(E.dimension(), 0.0);
  return estimate_theta(E, origin);
}

}  // namespace

int main() {
  criterion(1, "blow-up tower of x^2 - y^3 reproduces the worked example exactly", 1.0, [](Outcome& o) {
    auto r = cusp_tower();
    for (const auto& c : kTower) {
      const BlowupNode* n = r.tree.find(c.path);
      o.require(n != nullptr, std::string("missing chart ") + c.path);
      if (!n) continue;
      auto expected = parse(c.text, {c.a, c.b}).renamed({{c.a, n->variables[0]}, {c.b, n->variables[1]}});
      o.require((expected - n->total_transform).is_zero(),
                std::string(c.path) + ": " + n->total_transform.to_string() + " != " + expected.to_string());
    }
    const BlowupNode* leaf = r.tree.find("root/1/2/2");
    if (!leaf) return;
    o.require(leaf->is_leaf(), "root/1/2/2 is not a leaf");
    // Monomial content of alpha^6 beta^2 (1 - beta), read off by hand.
    const Exponents content{6, 2};
    auto residual = parse("1 - beta", {"alpha", "beta"}).renamed({{"beta", leaf->variables[1]}, {"alpha", leaf->variables[0]}});
    const LeafReport* lr = nullptr;
    for (const auto& l : r.leaves) {
      if (l.chart_path == "root/1/2/2") lr = &l;
    }
    o.require(lr != nullptr, "no leaf report");
    if (!lr) return;
    o.require(lr->monomial == content, "monomial content");
    o.require((lr->residual - residual).is_zero(), "residual " + lr->residual.to_string());
    o.require(lr->N == degree_sum(content) && lr->N == 8, "N");
    o.require(lr->theta_bound == one_minus_inverse(degree_sum(content)) && lr->theta_bound == Rational(7, 8),
              "theta bound " + to_string(lr->theta_bound));
  });

  criterion(2, "translated chart at beta = 1 has N = 7 and bound 6/7", 1.0, [](Outcome& o) {
    auto r = cusp_tower();
    // Independent translation: beta = 1 - gamma in alpha^6 beta^2 (1 - beta).
    auto leaf = parse("alpha^6*beta^2 - alpha^6*beta^3", {"alpha", "beta"});
    auto moved = substitute(leaf, {{{"beta", parse("1 - gamma")}, {"alpha", parse("alpha")}}});
    auto content = extract_monomial_factor(moved);
    const unsigned N = degree_sum(content.exponents);
    o.require(content.quotient.constant_term() != 0, "oracle translation not normal crossings");
    o.require(N == 7, "oracle N");
    const ExceptionalPoint* pt = nullptr;
    for (const auto& p : r.points) {
      if (p.leaf_path == "root/1/2/2" && p.location == 1) pt = &p;
    }
    o.require(pt != nullptr, "no exceptional point at beta = 1");
    if (!pt) return;
    o.require(pt->snc, "translated chart not normal crossings");
    o.require(pt->N == N, "N = " + std::to_string(pt->N));
    o.require(pt->theta_bound == one_minus_inverse(N) && pt->theta_bound == Rational(6, 7),
              "bound " + to_string(pt->theta_bound));
  });

  criterion(3, "exponent formula and optimal flag on the normal-crossings corpus", 1.0, [](Outcome& o) {
    for (const char* text : kSncCorpus) {
      auto mf = detect_snc(parse(text));
      o.require(mf.snc_at_origin, std::string(text) + " not detected");
      auto r = exponent_from_snc(mf);
      const unsigned N = degree_sum(mf.exponents);
      unsigned c = 0, n = 0;
      for (auto e : mf.exponents) {
        c += e > 0;
        n = std::max(n, e);
      }
      const bool optimal = (c == 2 && n == 1 && N == 2) || (c == 1 && n == 2);
      o.require(r.theta == one_minus_inverse(N), std::string(text) + " theta");
      o.require(r.optimal == optimal, std::string(text) + " optimal flag");
      o.require(r.optimal == (r.theta == Rational(1, 2)), std::string(text) + " optimal iff theta = 1/2");
    }
  });

  criterion(4, "constructive constants pass the sampled gradient inequality", 10.0, [](Outcome& o) {
    SamplingOptions s{10000, 1, 1};
    for (const char* text : kSncCorpus) {
      auto p = parse(text);
      auto r = compute_constants(detect_snc(p), 1.0, s);
      auto check = verify_gradient_inequality(p, r, s);
      std::ostringstream why;
      why << text << " measured " << check.measured_constant << " vs C0 " << r.constant_C0;
      o.require(check.pass && check.sample_count > 0, why.str());
    }
  });

  criterion(5, "generalized Young inequality: random and exact tuples", 5.0, [](Outcome& o) {
    using Big = boost::multiprecision::cpp_bin_float_50;
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> ua(1e-3, 4.0), up(1.0, 9.0);
    std::uniform_int_distribution<int> len(1, 6);
    std::size_t violations = 0, oracle_violations = 0;
    for (int t = 0; t < 10000; ++t) {
      int k = len(rng);
      std::vector<double> a(k), p(k);
      Big inv = 0, prod = 1, sum = 0;
      for (int j = 0; j < k; ++j) {
        a[j] = ua(rng);
        p[j] = up(rng);
        inv += Big(1) / p[j];
        prod *= a[j];
      }
      Big r = 1 / inv;
      for (int j = 0; j < k; ++j) sum += pow(Big(a[j]), Big(p[j])) / p[j];
      if (pow(prod, r) > r * sum * (1 + Big(1e-30))) ++oracle_violations;
      if (!generalized_young_holds(a, p)) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    o.require(oracle_violations == 0, "oracle found violations");
    std::uniform_int_distribution<int> num(1, 50), den(1, 12), ex(1, 5);
    for (int t = 0; t < 100; ++t) {
      int k = len(rng) % 4 + 1;
      std::vector<Rational> a(k);
      std::vector<unsigned> p(k);
      for (int j = 0; j < k; ++j) {
        a[j] = Rational(num(rng), den(rng));
        p[j] = static_cast<unsigned>(ex(rng));
      }
      o.require(generalized_young_holds_exact(a, p), "exact tuple " + std::to_string(t));
    }
  });

  criterion(6, "empirical exponents of x1*x2, x^2 - y^3 and x^2*y^2", 90.0, [](Outcome& o) {
    auto run = [&](const char* text, double lo, double hi) {
      auto t0 = std::chrono::steady_clock::now();
      auto e = estimate_at_origin(PolynomialField(parse(text)));
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream why;
      why << text << " theta_hat " << e.theta_hat;
      o.require(e.theta_hat >= lo && e.theta_hat <= hi, why.str());
      o.require(secs < 30.0, std::string(text) + " over 30 s");
      return e;
    };
    run("x1*x2", 0.45, 0.55);
    auto cusp = run("x^2 - y^3", 0.62, 0.72);
    o.require(cusp.theta_hat >= 0.5 && cusp.theta_hat <= 7.0 / 8.0, "cusp outside [1/2, 7/8]");
    o.require(compare_with_resolution_bound(cusp, Rational(1, 2), Rational(7, 8)).consistent, "cusp inconsistent");
    run("x^2*y^2", 0.70, 0.80);
  });

  criterion(7, "failure detection: builtins flagged, polynomials not", 30.0, [](Outcome& o) {
    for (const char* id : {"haraux", "delellis"}) {
      auto e = estimate_at_origin(*make_builtin(id));
      o.require(e.failure_detected, std::string(id) + " not flagged");
    }
    std::vector<const char*> corpus(std::begin(kSncCorpus), std::end(kSncCorpus));
    for (const char* extra : {"x^2 - y^3", "x^2 + y^4", "x^2 + y^2", "x^3 + x^2*y^5"}) corpus.push_back(extra);
    for (const char* text : corpus) {
      auto e = estimate_at_origin(PolynomialField(parse(text)));
      o.require(!e.failure_detected, std::string(text) + " flagged");
    }
  });

  criterion(8, "flow length equality cases, monotone energy and arc-length identities", 10.0, [](Outcome& o) {
    auto bound = [](double e0, double theta, double C) { return std::pow(e0, 1.0 - theta) / ((1.0 - theta) * C); };
    {
      PolynomialField E(parse("x^2"));
      auto t = integrate_flow(E, std::vector<double>{0.5});
      // ||grad x^2|| = 2 |x^2|^(1/2).
      double b = bound(0.25, 0.5, 2.0);
      o.require(std::abs(b - 0.5) < 1e-12, "oracle bound for x^2");
      o.require(t.converged && std::abs(t.arc_length - 0.5) < 1e-6, "x^2 arc length");
      auto lb = verify_length_bound(t, Rational(1, 2), 2.0);
      o.require(lb.pass && std::abs(lb.bound - b) < 1e-6, "x^2 length bound");
    }
    {
      PolynomialField E(parse("x^4"));
      FlowOptions f;
      f.tol = 1e-19;
      f.t_max = 1e15;
      auto t = integrate_flow(E, std::vector<double>{0.5}, f);
      // ||grad x^4|| = 4 |x^4|^(3/4).
      double b = bound(0.0625, 0.75, 4.0);
      o.require(t.converged && std::abs(t.arc_length - 0.5) < 1e-6, "x^4 arc length");
      auto lb = verify_length_bound(t, Rational(3, 4), 4.0);
      o.require(lb.pass && std::abs(lb.bound - b) < 1e-6, "x^4 length bound");
    }
    const std::vector<std::pair<const char*, std::vector<double>>> corpus{
        {"x^2", {0.5}},          {"x^4", {0.5}},            {"x^2 + y^4", {0.2, 0.2}}, {"x^2*y^2", {0.3, 0.4}},
        {"x^2 + y^2", {0.3, 0.4}}, {"x^2 - y^3", {0.3, 0.2}}, {"x*y", {0.3, 0.1}},      {"x^6*y^2", {0.4, 0.3}}};
    for (const auto& [text, x0] : corpus) {
      PolynomialField E(parse(text));
      auto t = integrate_flow(E, x0);
      o.require(energy_monotone(t, 1e-9), std::string(text) + " energy increased");
      auto ids = check_arc_length_identities(t, 1e-6);
      std::ostringstream why;
      why << text << " speed " << ids.max_speed_error << " Q' " << ids.max_q_relative_error;
      o.require(ids.pass, why.str());
    }
  });

  criterion(9, "distance inequalities have positive constants; C1 = 1 for x^2", 20.0, [](Outcome& o) {
    struct Case {
      const char* text;
      CriticalSetDescriptor crit;
      Rational theta;
    };
    const std::vector<Case> cases{{"x^2", CriticalSetDescriptor::subspace(1, {}), Rational(1, 2)},
                                  {"x^2*y^2", CriticalSetDescriptor::subspaces(2, {{0}, {1}}), Rational(3, 4)},
                                  {"x^2 + y^4", CriticalSetDescriptor::subspace(2, {}), Rational(3, 4)}};
    for (const auto& c : cases) {
      auto reports = verify_distance_inequalities(parse(c.text), c.crit, c.theta);
      const Rational one = 1;
      const Rational alpha = one / (one - c.theta);
      const Rational beta = one / (2 * (one - (one + c.theta) / 2));
      const Rational mu = c.theta / (one - c.theta);
      o.require(reports.size() == 4, std::string(c.text) + " report count");
      if (reports.size() != 4) continue;
      o.require(reports[0].exponent == alpha, std::string(c.text) + " alpha");
      o.require(reports[1].exponent == beta, std::string(c.text) + " beta");
      o.require(reports[2].exponent == mu, std::string(c.text) + " mu");
      for (const auto& r : reports) {
        std::ostringstream why;
        why << c.text << " " << to_string(r.kind) << " measured " << r.measured_constant;
        o.require(!r.skipped && r.measured_constant > 0.0 && r.pass, why.str());
      }
    }
    auto x2 = verify_distance_inequalities(parse("x^2"), CriticalSetDescriptor::subspace(1, {}), Rational(1, 2));
    std::ostringstream why;
    why << "x^2 C1 = " << x2[0].measured_constant;
    o.require(std::abs(x2[0].measured_constant - 1.0) < 1e-9, why.str());
    // ||grad x^2||^2 = 4 x^2 has exponent 1/2, so gamma = 1/(2(1 - 3/4)) / 2 = 1.
    o.require(x2[3].exponent == 1, "x^2 gamma");
  });

  criterion(10, "Morse-Bott battery", 1.0, [](Outcome& o) {
    auto circle = check_morse_bott(parse("x^2 + y^2"), {});
    o.require(circle.verdict, "x^2 + y^2 not Morse-Bott");
    auto cusp_poly = parse("x^2 - y^3");
    auto cusp = check_morse_bott(cusp_poly, {});
    o.require(!cusp.verdict, "cusp reported Morse-Bott");
    // Hessian diag(2, 0): kernel spanned by e_y.
    RationalMatrix h{{cusp_poly.derivative(0).derivative(0).constant_term(),
                      cusp_poly.derivative(0).derivative(1).constant_term()},
                     {cusp_poly.derivative(1).derivative(0).constant_term(),
                      cusp_poly.derivative(1).derivative(1).constant_term()}};
    o.require(h == RationalMatrix{{2, 0}, {0, 0}}, "oracle Hessian");
    o.require(cusp.hessian == h, "cusp Hessian");
    o.require(cusp.hessian_kernel == RationalMatrix{{0, 1}}, "cusp kernel is not the y axis");
    auto b = parse("x^3 + x^2*y^5");
    // d^2/dx^2 restricted to x = 0 is 2 y^5, not identically zero below order 3.
    std::vector<std::size_t> normal{0};
    auto restricted = b.derivative(0).derivative(0).with_zeroed(normal);
    o.require(!restricted.is_zero(), "oracle restriction vanished");
    auto g = check_generalized_morse_bott(b, {1}, 3);
    o.require(!g.condition_b, "condition (b) passed");
    o.require(!g.verdict, "verdict positive");
    o.require(g.condition_b_failure == "d^2/dx^2", "failing derivative " + g.condition_b_failure);
    o.require(g.condition_b_restriction == restricted.to_string(), "restriction " + g.condition_b_restriction);
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
