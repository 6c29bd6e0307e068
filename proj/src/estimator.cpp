#include "loja/estimator.hpp"

#include "loja/errors.hpp"
#include "loja/parallel.hpp"
#include "loja/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace loja {

namespace {

constexpr std::size_t kRefineStarts = 4;
constexpr double kRefineMinStep = 1e-10;
constexpr std::size_t kRefineMaxEvals = 4000;

struct Probe {
  double ratio = -std::numeric_limits<double>::infinity();
  double le = 0.0;
  double lg = 0.0;
  bool usable = false;
};

Probe probe(const ScalarField& E, std::span<const double> x_star, double level, std::span<const double> dir,
            double r, std::vector<double>& buf) {
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = x_star[i] + r * dir[i];
  auto ev = E.log_eval(buf, level);
  Probe p;
  // Discarded: |dE| below the floor (log is -inf) or |dE| >= 1 (ratio sign flips).
  if (!std::isfinite(ev.log_abs_delta) || ev.log_abs_delta >= 0.0) return p;
  p.le = ev.log_abs_delta;
  p.lg = ev.log_grad_norm;
  p.ratio = std::isfinite(p.lg) ? p.lg / p.le : -std::numeric_limits<double>::infinity();
  p.usable = std::isfinite(p.lg);
  return p;
}

void normalize(std::vector<double>& v) {
  double n = norm(v);
  for (auto& c : v) c /= n;
}

// Coordinate pattern search on the unit sphere, maximizing the ratio.
Probe refine(const ScalarField& E, std::span<const double> x_star, double level, double r, std::vector<double> dir,
             Probe best) {
  const std::size_t d = dir.size();
  std::vector<double> buf(d), trial(d);
  double step = 0.25;
  std::size_t evals = 0;
  while (step >= kRefineMinStep && evals < kRefineMaxEvals) {
    bool improved = false;
    for (std::size_t i = 0; i < d && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        trial = dir;
        trial[i] += sgn * step;
        normalize(trial);
        auto p = probe(E, x_star, level, trial, r, buf);
        ++evals;
        if (p.usable && p.ratio > best.ratio) {
          best = p;
          dir = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

std::uint64_t radius_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double ls_slope(const std::vector<EnvelopePoint>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& p : pts) {
    sx += p.log_abs_delta;
    sy += p.log_grad_norm;
  }
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p.log_abs_delta - mx) * (p.log_abs_delta - mx);
    sxy += (p.log_abs_delta - mx) * (p.log_grad_norm - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("degenerate envelope: |E - E*| constant across radii");
  return sxy / sxx;
}

}  // namespace

ExponentEstimate estimate_theta(const ScalarField& E, std::span<const double> x_star, const EstimateOptions& opts) {
  const std::size_t d = E.dimension();
  if (x_star.size() != d) throw DimensionError("x_star dimension mismatch");
  if (!(opts.r_min > 0.0) || !(opts.r_max > opts.r_min)) throw PreconditionError("need 0 < r_min < r_max");
  if (opts.radius_count < 2) throw PreconditionError("need at least two radii");
  if (opts.samples_per_radius == 0) throw PreconditionError("need at least one sample per radius");
  if (E.gradient_norm(x_star) >= 1e-12) throw PreconditionError("x_star is not a critical point");

  const double level = E.value(x_star);
  ExponentEstimate out;
  const double step = std::log(opts.r_min / opts.r_max) / static_cast<double>(opts.radius_count - 1);
  for (std::size_t k = 0; k < opts.radius_count; ++k) {
    out.radii.push_back(k + 1 == opts.radius_count ? opts.r_min : opts.r_max * std::exp(step * static_cast<double>(k)));
  }

  std::vector<double> mean_le;
  for (std::size_t k = 0; k < opts.radius_count; ++k) {
    const double r = out.radii[k];
    PointSet dirs = d == 1 ? sphere_mesh(1, 2) : sample_sphere(d, 1.0, opts.samples_per_radius, radius_seed(opts.seed, k));
    std::vector<Probe> probes(dirs.size());
    parallel_for(dirs.size(), opts.workers, [&](std::size_t b, std::size_t e) {
      std::vector<double> buf(d);
      for (std::size_t i = b; i < e; ++i) probes[i] = probe(E, x_star, level, dirs[i], r, buf);
    });

    std::vector<std::size_t> order;
    double le_sum = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (probes[i].usable) {
        order.push_back(i);
        le_sum += probes[i].le;
      } else {
        ++out.discarded_samples;
      }
    }
    if (order.empty()) continue;
    mean_le.push_back(le_sum / static_cast<double>(order.size()));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probes[a].ratio > probes[b].ratio; });

    Probe best = probes[order.front()];
    if (opts.refine && d > 1) {
      std::size_t starts = std::min(kRefineStarts, order.size());
      std::vector<Probe> refined(starts);
      parallel_for(starts, opts.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
          auto dir0 = dirs[order[s]];
          refined[s] = refine(E, x_star, level, r, std::vector<double>(dir0.begin(), dir0.end()), probes[order[s]]);
        }
      });
      for (const auto& p : refined) {
        if (p.ratio > best.ratio) best = p;
      }
    }
    out.envelope.push_back({r, best.le, best.lg, best.ratio, order.size()});
  }

  if (out.envelope.empty()) throw PreconditionError("all samples discarded: E is constant near x_star");
  if (out.envelope.size() < 3) throw PreconditionError("fewer than three radii kept usable samples");

  for (std::size_t k = 1; k < out.envelope.size(); ++k) {
    double dle = out.envelope[k].log_abs_delta - out.envelope[k - 1].log_abs_delta;
    double dlg = out.envelope[k].log_grad_norm - out.envelope[k - 1].log_grad_norm;
    out.local_slopes.push_back(dle != 0.0 ? dlg / dle : std::numeric_limits<double>::quiet_NaN());
  }
  std::size_t rises = 0;
  for (std::size_t k = 1; k < mean_le.size(); ++k) {
    if (mean_le[k] > mean_le[k - 1]) ++rises;
  }
  out.interference_suspected = 2 * rises > mean_le.size() - 1;

  const std::size_t q = std::max<std::size_t>(3, (out.envelope.size() + 3) / 4);
  std::vector<EnvelopePoint> tail(out.envelope.end() - static_cast<std::ptrdiff_t>(q), out.envelope.end());
  out.fit_points = q;
  out.theta_hat = ls_slope(tail);
  out.band_low = out.band_high = out.theta_hat;
  for (const auto& p : tail) {
    out.band_low = std::min(out.band_low, p.ratio);
    out.band_high = std::max(out.band_high, p.ratio);
  }
  for (std::size_t k = out.envelope.size() - q; k < out.local_slopes.size(); ++k) {
    double s = out.local_slopes[k];
    if (std::isfinite(s)) {
      out.band_low = std::min(out.band_low, s);
      out.band_high = std::max(out.band_high, s);
    }
  }
  out.failure_detected = out.theta_hat >= kFailureThreshold;
  return out;
}

ConsistencyVerdict compare_with_resolution_bound(const ExponentEstimate& estimate, const Rational& bound_low,
                                                 const Rational& bound_high) {
  if (bound_low > bound_high) throw PreconditionError("empty bound interval");
  ConsistencyVerdict v;
  v.bound_low = to_double(bound_low);
  v.bound_high = to_double(bound_high);
  double half = (estimate.band_high - estimate.band_low) / 2.0;
  v.slack_high = v.bound_high - (estimate.theta_hat - half);
  v.slack_low = (estimate.theta_hat + half) - v.bound_low;
  v.consistent = v.slack_high >= 0.0 && v.slack_low >= 0.0;
  return v;
}

std::vector<CounterexampleCase> haraux_counterexample_check(const EstimateOptions& opts) {
  std::vector<CounterexampleCase> out;
  auto run = [&](const std::string& id, const ScalarField& E, bool expected) {
    std::vector<double> origin(E.dimension(), 0.0);
    CounterexampleCase c;
    c.id = id;
    c.expected_failure = expected;
    c.estimate = estimate_theta(E, origin, opts);
    c.pass = c.estimate.failure_detected == expected;
    out.push_back(std::move(c));
  };
  run("haraux", *make_builtin("haraux"), true);
  run("delellis", *make_builtin("delellis"), true);
  run("x^2", PolynomialField(parse("x^2")), false);
  return out;
}

std::string envelope_csv(const ExponentEstimate& estimate) {
  std::ostringstream out;
  out << std::setprecision(17) << "radius,min_ratio\n";
  for (const auto& p : estimate.envelope) out << p.radius << ',' << p.ratio << '\n';
  return out.str();
}

}  // namespace loja
