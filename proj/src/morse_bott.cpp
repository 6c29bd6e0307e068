#include "loja/morse_bott.hpp"

#include "loja/errors.hpp"
#include "loja/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace loja {

namespace {

constexpr unsigned kMaxHalvings = 40;

std::vector<std::size_t> validated(const Polynomial& p, std::vector<std::size_t> K) {
  std::sort(K.begin(), K.end());
  K.erase(std::unique(K.begin(), K.end()), K.end());
  for (auto k : K) {
    if (k >= p.dimension()) throw DimensionError("critical subspace index " + std::to_string(k) + " out of range");
  }
  return K;
}

std::vector<std::size_t> complement(std::size_t d, const std::vector<std::size_t>& K) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::binary_search(K.begin(), K.end(), i)) out.push_back(i);
  }
  return out;
}

void require_critical_origin(const Polynomial& p) {
  for (const auto& g : p.gradient()) {
    if (g.constant_term() != 0) throw PreconditionError("the origin is not a critical point");
  }
}

bool gradient_vanishes_on(const Polynomial& p, const std::vector<std::size_t>& normal) {
  for (const auto& g : p.gradient()) {
    if (!g.with_zeroed(normal).is_zero()) return false;
  }
  return true;
}

// Solves (A^T A + mu I) x = A^T b by Gaussian elimination; A is n x n.
std::vector<double> damped_solve(const std::vector<double>& A, const std::vector<double>& b, std::size_t n) {
  std::vector<double> M(n * n, 0.0), rhs(n, 0.0);
  double frob = 0.0;
  for (double a : A) frob += a * a;
  double mu = 1e-14 * frob + 1e-300;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += A[k * n + i] * A[k * n + j];
      M[i * n + j] = s + (i == j ? mu : 0.0);
    }
    for (std::size_t k = 0; k < n; ++k) rhs[i] += A[k * n + i] * b[k];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(M[r * n + c]) > std::abs(M[piv * n + c])) piv = r;
    }
    if (M[piv * n + c] == 0.0) continue;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(M[c * n + j], M[piv * n + j]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = M[r * n + c] / M[c * n + c];
      for (std::size_t j = c; j < n; ++j) M[r * n + j] -= f * M[c * n + j];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    if (M[i * n + i] == 0.0) continue;
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= M[i * n + j] * x[j];
    x[i] = s / M[i * n + i];
  }
  return x;
}

// Newton refinement of grad p = 0 from seeded samples; counts samples that
// converge to a critical point clearly off K inside the ball.
std::size_t count_off_K_critical(const Polynomial& p, const std::vector<std::size_t>& normal,
                                 const CriticalSetOptions& opts) {
  const std::size_t d = p.dimension();
  if (normal.empty()) return 0;
  const auto grad = p.gradient();
  std::vector<Polynomial> hess;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) hess.push_back(grad[i].derivative(j));
  }
  PointSet pts = sample_ball(d, opts.radius, opts.samples, opts.seed);
  std::vector<char> found(pts.size(), 0);
  parallel_for(pts.size(), opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> x(d), g(d), H(d * d);
    for (std::size_t k = b; k < e; ++k) {
      std::copy(pts[k].begin(), pts[k].end(), x.begin());
      double gn = 0.0;
      for (int it = 0; it < 60; ++it) {
        for (std::size_t i = 0; i < d; ++i) g[i] = grad[i].evaluate(x);
        gn = norm(g);
        if (gn < 1e-14 || norm(x) > 2.0 * opts.radius) break;
        for (std::size_t i = 0; i < d * d; ++i) H[i] = hess[i].evaluate(x);
        auto step = damped_solve(H, g, d);
        for (std::size_t i = 0; i < d; ++i) x[i] -= step[i];
      }
      double off = 0.0;
      for (auto i : normal) off += x[i] * x[i];
      off = std::sqrt(off);
      if (gn < 1e-10 && norm(x) <= opts.radius && off > 1e-3 * opts.radius) found[k] = 1;
    }
  });
  return static_cast<std::size_t>(std::count(found.begin(), found.end(), 1));
}

std::string derivative_name(const Polynomial& p, const Exponents& alpha) {
  unsigned order = 0;
  std::string den;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    order += alpha[i];
    den += "d" + p.variables()[i];
    if (alpha[i] > 1) den += "^" + std::to_string(alpha[i]);
  }
  return (order == 1 ? std::string("d") : "d^" + std::to_string(order)) + "/" + den;
}

// All multi-indices of the given total order over d slots, in graded-lex order.
std::vector<Exponents> multi_indices(std::size_t d, unsigned order) {
  std::vector<Exponents> out;
  Exponents cur(d, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == d) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (unsigned k = left + 1; k-- > 0;) {
      cur[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (d > 0) rec(rec, 0, order);
  return out;
}

Polynomial partial(const Polynomial& p, const Exponents& alpha) {
  Polynomial q = p;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (unsigned k = 0; k < alpha[i]; ++k) q = q.derivative(i);
  }
  return q;
}

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

// Normal-space unit vectors embedded in R^d.
PointSet normal_mesh(std::size_t d, const std::vector<std::size_t>& normal, std::size_t count, std::uint64_t seed,
                     bool random) {
  const std::size_t m = normal.size();
  PointSet base = random ? (m == 1 ? sphere_mesh(1, 2) : sample_sphere(m, 1.0, count, seed))
                         : sphere_mesh(m, count, seed);
  PointSet out(d, base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    for (std::size_t j = 0; j < m; ++j) out[k][normal[j]] = base[k][j];
  }
  return out;
}

// Covering radius of sphere_mesh(m, count); beyond dimension 3 the mesh is
// random and this is only a heuristic.
double mesh_covering_radius(std::size_t m, std::size_t count) {
  double n = static_cast<double>(count);
  if (m <= 1) return 0.0;
  if (m == 2) return std::numbers::pi / n;
  if (m == 3) return std::sqrt(4.0 * std::numbers::pi / n);
  return 2.0 * std::pow(n, -1.0 / static_cast<double>(m - 1));
}

}  // namespace

RationalMatrix hessian_at_origin(const Polynomial& p) {
  const std::size_t d = p.dimension();
  RationalMatrix H(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Exponents e(d, 0);
      e[i] += 1;
      e[j] += 1;
      H[i][j] = p.coefficient(e) * (i == j ? 2 : 1);
    }
  }
  return H;
}

RationalMatrix kernel_basis(const RationalMatrix& m) {
  if (m.empty()) return {};
  const std::size_t rows = m.size(), cols = m[0].size();
  RationalMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    Rational lead = a[r][c];
    for (auto& v : a[r]) v /= lead;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  RationalMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

MorseBottReport check_morse_bott(const Polynomial& p, const std::vector<std::size_t>& K_in,
                                 const CriticalSetOptions& opts) {
  auto K = validated(p, K_in);
  require_critical_origin(p);
  const auto normal = complement(p.dimension(), K);

  MorseBottReport r;
  r.kind = MorseBottKind::MorseBott;
  r.critical_subspace = K;
  r.gradient_vanishes_on_K = gradient_vanishes_on(p, normal);
  r.off_K_critical_samples = count_off_K_critical(p, normal, opts);
  r.no_critical_points_off_K = r.off_K_critical_samples == 0;
  r.is_critical_set_exactly_K = r.gradient_vanishes_on_K && r.no_critical_points_off_K;

  r.hessian = hessian_at_origin(p);
  r.hessian_kernel = kernel_basis(r.hessian);
  r.kernel_equals_K = r.hessian_kernel.size() == K.size();
  for (auto k : K) {
    for (std::size_t i = 0; i < p.dimension(); ++i) {
      if (r.hessian[i][k] != 0) r.kernel_equals_K = false;
    }
  }
  r.condition_a = r.gradient_vanishes_on_K;
  r.verdict = r.gradient_vanishes_on_K && r.kernel_equals_K;
  r.predicted_theta = Rational(1, 2);
  if (r.verdict) r.order_N = 2;
  return r;
}

MorseBottReport check_generalized_morse_bott(const Polynomial& p, const std::vector<std::size_t>& K_in, unsigned N,
                                             const CriticalSetOptions& opts) {
  if (N < 2) throw PreconditionError("order N must be at least 2");
  auto K = validated(p, K_in);
  require_critical_origin(p);
  const std::size_t d = p.dimension();
  const auto normal = complement(d, K);

  MorseBottReport r;
  r.kind = MorseBottKind::Generalized;
  r.critical_subspace = K;
  r.order_N = N;
  r.predicted_theta = Rational(1) - Rational(1, N);
  r.gradient_vanishes_on_K = gradient_vanishes_on(p, normal);
  r.off_K_critical_samples = count_off_K_critical(p, normal, opts);
  r.no_critical_points_off_K = r.off_K_critical_samples == 0;
  r.is_critical_set_exactly_K = r.gradient_vanishes_on_K && r.no_critical_points_off_K;
  r.condition_a = r.gradient_vanishes_on_K;
  r.hessian = hessian_at_origin(p);
  r.hessian_kernel = kernel_basis(r.hessian);

  r.condition_b = true;
  for (unsigned order = 1; order < N && r.condition_b; ++order) {
    for (const auto& alpha : multi_indices(d, order)) {
      Polynomial restricted = partial(p, alpha).with_zeroed(normal);
      if (!restricted.is_zero()) {
        r.condition_b = false;
        r.condition_b_failure = derivative_name(p, alpha);
        r.condition_b_restriction = restricted.to_string();
        break;
      }
    }
  }

  // E^(N)(0) v^N = N! P_N(v) for v in the normal space.
  const std::size_t m = normal.size();
  if (m > 0) {
    Polynomial PN = p.homogeneous_part(N).with_zeroed(K);
    const double fact = factorial(N);
    if (m == 1) {
      std::vector<Rational> e(d, Rational(0));
      e[normal[0]] = 1;
      Rational plus = PN.evaluate(std::span<const Rational>(e));
      e[normal[0]] = -1;
      Rational minus = PN.evaluate(std::span<const Rational>(e));
      Rational lo = std::min(abs(plus), abs(minus));
      r.coercivity_zeta = to_double(lo) * fact;
      r.zeta_lipschitz_certified = lo > 0;
    } else {
      PointSet mesh = normal_mesh(d, normal, opts.samples, opts.seed, false);
      std::vector<double> vals(mesh.size());
      parallel_for(mesh.size(), opts.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) vals[k] = fact * PN.evaluate(mesh[k]);
      });
      double lo = std::numeric_limits<double>::infinity();
      bool pos = false, neg = false;
      for (double v : vals) {
        lo = std::min(lo, std::abs(v));
        pos = pos || v > 0.0;
        neg = neg || v < 0.0;
      }
      double coef_sum = 0.0;
      for (const auto& [ex, c] : PN.terms()) coef_sum += std::abs(to_double(c));
      double lipschitz = fact * std::sqrt(static_cast<double>(m)) * N * coef_sum;
      r.coercivity_zeta = lo;
      r.zeta_lipschitz_certified = !(pos && neg) && lo - lipschitz * mesh_covering_radius(m, mesh.size()) > 0.0;
    }
    r.certified_zeta = 0.9 * *r.coercivity_zeta;
    r.condition_c = r.zeta_lipschitz_certified;
  }
  r.verdict = r.condition_a && r.condition_b && r.condition_c;
  return r;
}

GmbCheckResult verify_gmb_gradient_inequality(const Polynomial& p, const MorseBottReport& report,
                                              const GmbCheckOptions& opts) {
  if (report.kind != MorseBottKind::Generalized || !report.order_N) {
    throw PreconditionError("report is not a generalized Morse-Bott report");
  }
  if (!report.verdict && !opts.allow_failed_verdict) {
    throw PreconditionError("generalized Morse-Bott verdict is negative");
  }
  const unsigned N = *report.order_N;
  const std::size_t d = p.dimension();
  const auto& K = report.critical_subspace;
  const auto normal = complement(d, K);
  if (normal.empty()) throw PreconditionError("no normal directions");

  // N-th partials, keyed by multi-index.
  std::map<Exponents, Polynomial> nth;
  for (const auto& alpha : multi_indices(d, N)) nth.emplace(alpha, partial(p, alpha));
  const auto lower = multi_indices(d, N - 1);

  auto multinomial_weight = [](const Exponents& a) {
    double w = 1.0;
    unsigned total = 0;
    for (unsigned k : a) {
      total += k;
      w /= factorial(k);
    }
    return w * factorial(total);
  };
  auto vpow = [](std::span<const double> v, const Exponents& a) {
    double s = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (unsigned k = 0; k < a[i]; ++k) s *= v[i];
    }
    return s;
  };
  // E^(N)(x) v^N
  auto dvN = [&](std::span<const double> x, std::span<const double> v) {
    double s = 0.0;
    for (const auto& [alpha, q] : nth) {
      double w = vpow(v, alpha);
      if (w != 0.0) s += multinomial_weight(alpha) * w * q.evaluate(x);
    }
    return s;
  };
  // Normal components of E^(N)(x) v^(N-1).
  auto cov = [&](std::span<const double> x, std::span<const double> v) {
    std::vector<double> out(normal.size(), 0.0);
    for (const auto& beta : lower) {
      double w = vpow(v, beta);
      if (w == 0.0) continue;
      w *= multinomial_weight(beta);
      for (std::size_t j = 0; j < normal.size(); ++j) {
        Exponents a = beta;
        a[normal[j]] += 1;
        out[j] += w * nth.at(a).evaluate(x);
      }
    }
    return out;
  };

  GmbCheckResult result;
  const double fact = factorial(N);
  const std::vector<double> origin(d, 0.0);
  {
    PointSet mesh = normal_mesh(d, normal, opts.samples, opts.seed, false);
    std::vector<double> vals(mesh.size());
    parallel_for(mesh.size(), opts.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) vals[k] = norm(cov(origin, mesh[k]));
    });
    double inf = *std::min_element(vals.begin(), vals.end());
    result.constant_C = (N / 4.0) * std::pow(2.0 / fact * inf, 1.0 / N);
  }

  // Unit cylinder samples, rescaled by (R, L) on each attempt.
  const std::size_t count = opts.samples;
  PointSet kappa_unit = K.empty() ? PointSet() : sample_ball(K.size(), 1.0, count, opts.seed);
  PointSet dirs = normal_mesh(d, normal, count, opts.seed + 1, true);
  std::vector<double> radial(count);
  {
    std::mt19937_64 rng(opts.seed + 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& t : radial) t = 1.0 - u(rng);  // (0, 1]
  }
  auto point = [&](std::size_t k, double R, double L, std::vector<double>& x) {
    auto v = dirs[k % dirs.size()];
    for (std::size_t i = 0; i < d; ++i) x[i] = R * radial[k] * v[i];
    for (std::size_t j = 0; j < K.size(); ++j) x[K[j]] += L * kappa_unit[k][j];
  };

  double R = opts.initial_R, L = opts.initial_L;
  std::vector<char> ok(count);
  for (unsigned halving = 0;; ++halving) {
    if (halving > kMaxHalvings) throw NumericalError("cylinder radii underflow");
    parallel_for(count, opts.workers, [&](std::size_t b, std::size_t e) {
      std::vector<double> x(d);
      for (std::size_t k = b; k < e; ++k) {
        point(k, R, L, x);
        auto v = dirs[k % dirs.size()];
        double base = dvN(origin, v);
        bool good = std::abs(dvN(x, v) - base) <= std::abs(base) * (1.0 + 1e-12);
        if (good) {
          auto c0 = cov(origin, v);
          auto cx = cov(x, v);
          for (std::size_t j = 0; j < cx.size(); ++j) cx[j] -= c0[j];
          good = norm(cx) <= 0.5 * norm(c0) * (1.0 + 1e-12);
        }
        ok[k] = good;
      }
    });
    if (std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) {
      result.halvings = halving;
      break;
    }
    R *= 0.5;
    L *= 0.5;
  }
  result.R = R;
  result.L = L;

  const double theta = 1.0 - 1.0 / N;
  const double level = p.evaluate(origin);
  const auto grad = p.gradient();
  auto ratio_at = [&](std::span<const double> x) {
    double dv = std::abs(p.evaluate(x) - level);
    if (dv == 0.0) return std::numeric_limits<double>::infinity();
    std::vector<double> g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = grad[i].evaluate(x);
    double gn = norm(g);
    return gn == 0.0 ? 0.0 : std::exp(std::log(gn) - theta * std::log(dv));
  };
  std::vector<double> ratios(count);
  parallel_for(count, opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> x(d);
    for (std::size_t k = b; k < e; ++k) {
      point(k, R, L, x);
      ratios[k] = ratio_at(x);
    }
  });
  double measured = *std::min_element(ratios.begin(), ratios.end());
  std::size_t used = static_cast<std::size_t>(
      std::count_if(ratios.begin(), ratios.end(), [](double v) { return std::isfinite(v); }));
  for (const auto& pt : opts.probe_points) {
    if (pt.size() != d) throw DimensionError("probe point dimension mismatch");
    double rr = ratio_at(pt);
    if (!std::isfinite(rr)) continue;
    ++used;
    result.probe_min_ratio = std::min(result.probe_min_ratio.value_or(rr), rr);
    measured = std::min(measured, rr);
  }

  auto& c = result.check;
  c.kind = InequalityKind::Gradient;
  c.exponent = report.predicted_theta;
  c.measured_constant = std::isfinite(measured) ? measured : 0.0;
  c.predicted_constant = result.constant_C;
  c.sample_count = used;
  c.sigma = R;
  c.delta = L;
  c.pass = constant_check_passes(c.measured_constant, c.predicted_constant);
  if (!report.verdict) c.note = "run on a negative generalized Morse-Bott verdict";
  return result;
}

}  // namespace loja
