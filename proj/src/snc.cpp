#include "loja/snc.hpp"

#include "loja/errors.hpp"
#include "loja/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace loja {

MonomialFactorization detect_snc(const Polynomial& p) {
  auto [m, q] = extract_monomial_factor(p);
  bool snc = q.constant_term() != 0;
  return {std::move(m), std::move(q), snc};
}

ExponentReport exponent_from_snc(const MonomialFactorization& mf) {
  if (!mf.snc_at_origin) throw PreconditionError("residual vanishes at the origin; resolve first");
  ExponentReport r;
  r.exponents = mf.exponents;
  for (unsigned e : mf.exponents) {
    r.total_degree_N += e;
    if (e > 0) {
      ++r.active_count_c;
      r.max_exponent_n = std::max(r.max_exponent_n, e);
    }
  }
  if (r.active_count_c == 0) throw PreconditionError("no monomial factor: the function does not vanish at the origin");
  if (r.active_count_c == 1 && r.max_exponent_n == 1) {
    throw PreconditionError("single simple factor: the origin is not a critical point");
  }
  r.theta = Rational(1) - Rational(1, r.total_degree_N);
  r.optimal = (r.active_count_c == 2 && r.total_degree_N == 2) || (r.active_count_c == 1 && r.max_exponent_n == 2);
  return r;
}

namespace {

// Unit-ball samples followed by the axis points +-e_i and the origin.
PointSet unit_sample_with_axes(std::size_t d, const SamplingOptions& opts) {
  PointSet pts = sample_ball(d, 1.0, opts.samples, opts.seed);
  std::vector<double> e(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    e[i] = 1.0;
    pts.push_back(e);
    e[i] = -1.0;
    pts.push_back(e);
    e[i] = 0.0;
  }
  pts.push_back(e);
  return pts;
}

}  // namespace

ExponentReport compute_constants(const MonomialFactorization& mf, double sigma, const SamplingOptions& opts) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw PreconditionError("sigma must be positive and finite");
  ExponentReport report = exponent_from_snc(mf);
  const Polynomial& f0 = mf.residual;
  const std::size_t d = f0.dimension();
  if (d == 0) throw DimensionError("polynomial has no variables");
  const auto grad = f0.gradient();
  const PointSet unit = unit_sample_with_axes(d, opts);
  const std::size_t count = unit.size();
  const double sign0 = to_double(f0.constant_term()) > 0 ? 1.0 : -1.0;

  std::vector<double> absval(count);
  std::vector<char> ok(count);
  for (unsigned halving = 0;; ++halving) {
    if (halving > kMaxSigmaHalvings) {
      throw NumericalError("sigma underflow after " + std::to_string(kMaxSigmaHalvings) + " halvings");
    }
    parallel_for(count, opts.workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> x(d);
      for (std::size_t k = begin; k < end; ++k) {
        for (std::size_t i = 0; i < d; ++i) x[i] = sigma * unit[k][i];
        double F = f0.evaluate(x);
        absval[k] = std::abs(F);
        // The residual must keep the sign it has at the origin, and the
        // shrinking condition must hold for every active coordinate.
        bool good = F * sign0 > 0.0;
        for (std::size_t j = 0; good && j < d; ++j) {
          if (mf.exponents[j] == 0) continue;
          double lhs = std::abs(x[j] * grad[j].evaluate(x));
          double rhs = 0.5 * mf.exponents[j] * std::abs(F);
          good = lhs <= rhs * (1.0 + 1e-12);
        }
        ok[k] = good;
      }
    });
    if (std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) {
      report.halvings = halving;
      break;
    }
    sigma *= 0.5;
  }

  double m = *std::min_element(absval.begin(), absval.end());
  double M = *std::max_element(absval.begin(), absval.end());
  double theta = to_double(report.theta);
  double C0 = m / (2.0 * std::pow(M, theta));
  if (report.active_count_c >= 2) {
    C0 *= std::sqrt(static_cast<double>(report.total_degree_N) / report.max_exponent_n);
  }
  report.has_constants = true;
  report.ball_radius_sigma = sigma;
  report.unit_min_m = m;
  report.unit_max_M = M;
  report.constant_C0 = C0;
  return report;
}

InequalityCheckReport verify_gradient_inequality(const Polynomial& p, const ExponentReport& report,
                                                 const SamplingOptions& opts) {
  if (!report.has_constants) throw PreconditionError("report has no constants; run compute_constants first");
  const std::size_t d = p.dimension();
  const double sigma = report.ball_radius_sigma;
  const double theta = to_double(report.theta);
  const auto grad = p.gradient();
  const PointSet unit = unit_sample_with_axes(d, opts);
  const std::size_t count = unit.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> ratio(count, kInf);
  parallel_for(count, opts.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(d), g(d);
    for (std::size_t k = begin; k < end; ++k) {
      bool near_plane = false;
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = sigma * unit[k][i];
        if (std::abs(x[i]) < 1e-12 * sigma && i < report.exponents.size() && report.exponents[i] > 0) {
          near_plane = true;
        }
      }
      if (near_plane) continue;
      double v = std::abs(p.evaluate(x));
      if (v == 0.0) continue;
      for (std::size_t i = 0; i < d; ++i) g[i] = grad[i].evaluate(x);
      double gn = norm(g);
      ratio[k] = gn == 0.0 ? 0.0 : std::exp(std::log(gn) - theta * std::log(v));
    }
  });

  InequalityCheckReport out;
  out.kind = InequalityKind::Gradient;
  out.exponent = report.theta;
  out.predicted_constant = report.constant_C0;
  out.sigma = sigma;
  out.measured_constant = *std::min_element(ratio.begin(), ratio.end());
  out.sample_count = static_cast<std::size_t>(std::count_if(ratio.begin(), ratio.end(), [](double r) {
    return std::isfinite(r);
  }));
  if (out.sample_count == 0) {
    out.measured_constant = 0.0;
    out.note = "every sample was a zero of the function";
  }
  out.pass = constant_check_passes(out.measured_constant, out.predicted_constant);
  return out;
}

bool generalized_young_holds(std::span<const double> a, std::span<const double> p, double rel_tol) {
  if (a.size() != p.size() || a.empty()) throw DimensionError("Young tuple sizes differ or are empty");
  double inv_r = 0.0, log_prod = 0.0, sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] > 0.0) || !(p[j] > 0.0)) throw PreconditionError("Young inequality needs positive a_j and p_j");
    inv_r += 1.0 / p[j];
    log_prod += std::log(a[j]);
    sum += std::pow(a[j], p[j]) / p[j];
  }
  double r = 1.0 / inv_r;
  return r * log_prod <= std::log(r * sum) + rel_tol;
}

bool generalized_young_holds_exact(std::span<const Rational> a, std::span<const unsigned> p) {
  if (a.size() != p.size() || a.empty()) throw DimensionError("Young tuple sizes differ or are empty");
  Rational inv_r = 0, prod = 1, sum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] <= 0 || p[j] == 0) throw PreconditionError("Young inequality needs positive a_j and p_j");
    inv_r += Rational(1, p[j]);
    prod *= a[j];
    sum += pow(a[j], p[j]) / p[j];
  }
  Rational r = 1 / inv_r;
  auto u = static_cast<unsigned>(boost::multiprecision::numerator(r));
  auto v = static_cast<unsigned>(boost::multiprecision::denominator(r));
  return pow(prod, u) <= pow(r * sum, v);
}

bool monomial_inequality_holds(std::span<const double> x, std::span<const unsigned> n, double rel_tol) {
  if (x.size() != n.size()) throw DimensionError("coordinate and exponent counts differ");
  unsigned N = 0, nmax = 0;
  double log_mono = 0.0;
  double inv_sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (n[i] == 0) continue;
    if (x[i] == 0.0) throw PreconditionError("monomial inequality needs nonzero active coordinates");
    N += n[i];
    nmax = std::max(nmax, n[i]);
    log_mono += 2.0 * n[i] * std::log(std::abs(x[i]));
    inv_sq += 1.0 / (x[i] * x[i]);
  }
  if (N == 0) throw PreconditionError("no active exponents");
  double theta = 1.0 - 1.0 / N;
  double lhs = log_mono + std::log(inv_sq);
  double rhs = std::log(static_cast<double>(N) / nmax) + theta * log_mono;
  return lhs >= rhs - rel_tol * std::max(1.0, std::abs(rhs));
}

}  // namespace loja
