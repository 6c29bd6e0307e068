#include "loja/flow.hpp"

#include "loja/errors.hpp"
#include "loja/parallel.hpp"
#include "loja/snc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loja {

CriticalSetDescriptor CriticalSetDescriptor::subspace(std::size_t dimension, std::vector<std::size_t> free_coordinates) {
  return subspaces(dimension, {std::move(free_coordinates)});
}

CriticalSetDescriptor CriticalSetDescriptor::subspaces(std::size_t dimension,
                                                       std::vector<std::vector<std::size_t>> free_sets) {
  if (free_sets.empty()) throw PreconditionError("subspace union must not be empty");
  for (auto& f : free_sets) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    for (auto i : f) {
      if (i >= dimension) throw DimensionError("subspace coordinate out of range");
    }
  }
  CriticalSetDescriptor c;
  c.subspace_ = true;
  c.dim_ = dimension;
  c.free_ = std::move(free_sets);
  return c;
}

CriticalSetDescriptor CriticalSetDescriptor::points(std::vector<std::vector<double>> pts) {
  if (pts.empty()) throw PreconditionError("point list must not be empty");
  for (const auto& p : pts) {
    if (p.size() != pts[0].size()) throw DimensionError("points of different dimensions");
  }
  CriticalSetDescriptor c;
  c.subspace_ = false;
  c.dim_ = pts[0].size();
  c.points_ = std::move(pts);
  return c;
}

std::vector<double> CriticalSetDescriptor::nearest(std::span<const double> x) const {
  if (x.size() != dim_) throw DimensionError("point dimension does not match the critical set");
  std::vector<double> best_point;
  double best_d = std::numeric_limits<double>::infinity();
  std::vector<double> candidate(dim_), diff(dim_);
  auto consider = [&] {
    for (std::size_t i = 0; i < dim_; ++i) diff[i] = x[i] - candidate[i];
    double dk = norm(diff);
    if (dk < best_d) {
      best_d = dk;
      best_point = candidate;
    }
  };
  if (subspace_) {
    for (const auto& f : free_) {
      std::fill(candidate.begin(), candidate.end(), 0.0);
      for (auto i : f) candidate[i] = x[i];
      consider();
    }
  } else {
    for (const auto& p : points_) {
      candidate = p;
      consider();
    }
  }
  return best_point;
}

double CriticalSetDescriptor::distance(std::span<const double> x) const {
  auto n = nearest(x);
  std::vector<double> diff(dim_);
  for (std::size_t i = 0; i < dim_; ++i) diff[i] = x[i] - n[i];
  return norm(diff);
}

std::string CriticalSetDescriptor::describe() const {
  std::ostringstream out;
  if (subspace_) {
    for (std::size_t s = 0; s < free_.size(); ++s) {
      out << (s ? " u " : "") << "span{";
      for (std::size_t k = 0; k < free_[s].size(); ++k) out << (k ? "," : "") << "e" << free_[s][k];
      out << "}";
    }
  } else {
    out << "points(" << points_.size() << ")";
  }
  return out.str();
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::GradientBelowTol: return "gradient-below-tol";
    case StopReason::MaxTime: return "max-time";
    case StopReason::LeftDomain: return "left-domain";
  }
  return "unknown";
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct Rhs {
  const ScalarField& E;
  std::size_t d;
  // y = (x, s); returns ||grad E(x)||.
  double operator()(const std::vector<double>& y, std::vector<double>& out) const {
    std::span<const double> x(y.data(), d);
    std::span<double> g(out.data(), d);
    E.gradient(x, g);
    double gn = norm(g);
    if (!std::isfinite(gn)) throw NumericalError("non-finite gradient during flow integration");
    for (std::size_t i = 0; i < d; ++i) out[i] = -out[i];
    out[d] = gn;
    return gn;
  }
};

}  // namespace

Trajectory integrate_flow(const ScalarField& E, std::span<const double> x0, const FlowOptions& opts) {
  const std::size_t d = E.dimension();
  if (x0.size() != d) throw DimensionError("initial point dimension mismatch");
  if (!(opts.tol > 0.0)) throw PreconditionError("tol must be positive");
  if (norm(x0) > opts.sigma) throw PreconditionError("initial point lies outside the working ball");

  Rhs f{E, d};
  const std::size_t n = d + 1;
  std::vector<double> y(x0.begin(), x0.end());
  y.push_back(0.0);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n);

  Trajectory traj;
  auto record = [&](double t, const std::vector<double>& state, double gn) {
    TrajectorySample s;
    s.t = t;
    s.x.assign(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(d));
    s.energy = E.value(s.x);
    s.grad_norm = gn;
    s.arc_length = state[d];
    traj.samples.push_back(std::move(s));
  };

  double t = 0.0;
  double gn = f(y, k1);
  record(t, y, gn);
  double h = std::min(opts.initial_step, opts.max_step);
  bool done = false;
  if (gn < opts.tol) {
    traj.stop_reason = StopReason::GradientBelowTol;
    traj.converged = true;
    done = true;
  }

  std::size_t steps = 0;
  while (!done) {
    if (++steps > opts.max_steps) {
      traj.stop_reason = StopReason::MaxTime;
      break;
    }
    h = std::min({h, opts.max_step, opts.t_max - t});
    auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (const auto& [a, k] : terms) acc += h * a * (*k)[i];
        tmp[i] = acc;
      }
      f(tmp, out);
    };
    stage(k2, {{a21, &k1}});
    stage(k3, {{a31, &k1}, {a32, &k2}});
    stage(k4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    stage(k5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    stage(k6, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    for (std::size_t i = 0; i < n; ++i) {
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    double gn_new = f(y5, k7);
    // Absolute tolerance shrinks with the speed so decaying modes stay resolved.
    const double abs_tol = opts.atol * std::min(1.0, k1[d]);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double scale = abs_tol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      y.swap(y5);
      k1.swap(k7);
      record(t, y, gn_new);
      std::span<const double> x(y.data(), d);
      if (gn_new < opts.tol) {
        traj.stop_reason = StopReason::GradientBelowTol;
        traj.converged = true;
        done = true;
      } else if (norm(x) > opts.sigma) {
        traj.stop_reason = StopReason::LeftDomain;
        done = true;
      } else if (t >= opts.t_max) {
        traj.stop_reason = StopReason::MaxTime;
        done = true;
      }
    } else {
      ++traj.rejected_steps;
    }
    double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (!(h > 0.0) || h < 1e-300) throw NumericalError("step size underflow");
  }

  traj.arc_length = traj.samples.back().arc_length;
  if (traj.converged) {
    const auto& last = traj.samples.back().x;
    if (opts.critical_set) {
      traj.limit_point = opts.critical_set->nearest(last);
      traj.snap_distance = opts.critical_set->distance(last);
    } else {
      traj.limit_point = last;
    }
  }
  return traj;
}

bool energy_monotone(const Trajectory& traj, double slack) {
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    if (traj.samples[k].energy > traj.samples[k - 1].energy + slack) return false;
  }
  return true;
}

LengthBoundCheck verify_length_bound(const Trajectory& traj, const Rational& theta, double C) {
  if (!traj.converged) throw PreconditionError("trajectory did not converge");
  if (!(C > 0.0)) throw PreconditionError("gradient-inequality constant must be positive");
  if (theta < Rational(1, 2) || theta >= 1) throw PreconditionError("theta must lie in [1/2, 1)");
  double th = to_double(theta);
  double drop = traj.samples.front().energy - traj.samples.back().energy;
  LengthBoundCheck out;
  out.arc_length = traj.arc_length;
  out.bound = std::pow(std::max(drop, 0.0), 1.0 - th) / ((1.0 - th) * C);
  out.margin = out.bound - out.arc_length;
  out.pass = out.arc_length <= out.bound * (1.0 + kConstantSlack);
  return out;
}

namespace {

// Weights of the derivative at z[k] of the interpolant through z[0..4].
std::array<double, 5> derivative_weights(const std::array<double, 5>& z, std::size_t k) {
  std::array<double, 5> w{};
  for (std::size_t j = 0; j < 5; ++j) {
    if (j == k) {
      double s = 0.0;
      for (std::size_t m = 0; m < 5; ++m) {
        if (m != k) s += 1.0 / (z[k] - z[m]);
      }
      w[j] = s;
    } else {
      double num = 1.0, den = 1.0;
      for (std::size_t m = 0; m < 5; ++m) {
        if (m != j) den *= z[j] - z[m];
        if (m != j && m != k) num *= z[k] - z[m];
      }
      w[j] = num / den;
    }
  }
  return w;
}

}  // namespace

ArcLengthIdentityCheck check_arc_length_identities(const Trajectory& traj, double tol, double tail_fraction) {
  ArcLengthIdentityCheck out;
  const auto& S = traj.samples;
  if (S.size() < 5) {
    out.pass = false;
    return out;
  }
  const double e_final = S.back().energy;
  const double drop = S.front().energy - e_final;
  const std::size_t d = S.front().x.size();
  for (std::size_t k = 2; k + 2 < S.size(); ++k) {
    bool usable = true;
    std::array<double, 5> z{};
    for (std::size_t j = 0; j < 5; ++j) {
      const auto& s = S[k - 2 + j];
      z[j] = s.arc_length;
      if (s.energy - e_final < tail_fraction * drop) usable = false;
      if (j > 0 && !(z[j] > z[j - 1])) usable = false;
    }
    if (!usable || !(S[k].grad_norm > 0.0)) continue;
    auto w = derivative_weights(z, 2);
    double dq = 0.0;
    std::vector<double> dy(d, 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
      const auto& s = S[k - 2 + j];
      dq += w[j] * s.energy;
      for (std::size_t i = 0; i < d; ++i) dy[i] += w[j] * s.x[i];
    }
    ++out.interior_samples;
    out.max_speed_error = std::max(out.max_speed_error, std::abs(norm(dy) - 1.0));
    out.max_q_relative_error = std::max(out.max_q_relative_error, std::abs(dq + S[k].grad_norm) / S[k].grad_norm);
  }
  out.pass = out.interior_samples > 0 && out.max_speed_error <= tol && out.max_q_relative_error <= tol;
  return out;
}

namespace {

InequalityCheckReport distance_check(InequalityKind kind, const Rational& exponent, const PointSet& pts,
                                     const std::vector<double>& lhs, const CriticalSetDescriptor& target,
                                     const DistanceCheckOptions& opts) {
  const double ex = to_double(exponent);
  std::vector<double> ratio(pts.size(), std::numeric_limits<double>::infinity());
  parallel_for(pts.size(), opts.sampling.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      double dist = target.distance(pts[k]);
      if (!(dist > 0.0)) continue;
      ratio[k] = lhs[k] <= 0.0 ? 0.0 : std::exp(std::log(lhs[k]) - ex * std::log(dist));
    }
  });
  InequalityCheckReport r;
  r.kind = kind;
  r.exponent = exponent;
  r.sigma = opts.sigma;
  r.delta = opts.delta;
  r.sample_count = static_cast<std::size_t>(
      std::count_if(ratio.begin(), ratio.end(), [](double v) { return std::isfinite(v); }));
  double m = *std::min_element(ratio.begin(), ratio.end());
  r.measured_constant = std::isfinite(m) ? m : 0.0;
  r.pass = constant_check_passes(r.measured_constant, std::nullopt);
  if (r.sample_count == 0) r.note = "no sample off the target set";
  return r;
}

}  // namespace

std::vector<InequalityCheckReport> verify_distance_inequalities(const Polynomial& E, const CriticalSetDescriptor& crit,
                                                                const Rational& theta,
                                                                const DistanceCheckOptions& opts) {
  if (theta < Rational(1, 2) || theta >= 1) throw PreconditionError("theta must lie in [1/2, 1)");
  const std::size_t d = E.dimension();
  if (crit.dimension() != d) throw DimensionError("critical set dimension mismatch");
  const auto& zero = opts.zero_set ? *opts.zero_set : crit;

  const Rational one = 1;
  const Rational alpha = one / (one - theta);
  const Rational theta_sq = (one + theta) / 2;
  const Rational beta = one / (2 * (one - theta_sq));
  const Rational mu = theta / (one - theta);

  // F = ||grad E||^2 and its exponent.
  Polynomial F(E.variables());
  for (const auto& g : E.gradient()) F = F + g * g;
  std::optional<Rational> theta_F = opts.theta_F;
  std::string gamma_note;
  if (!theta_F && !F.is_zero()) {
    auto mf = detect_snc(F);
    if (mf.snc_at_origin) {
      try {
        theta_F = exponent_from_snc(mf).theta;
      } catch (const PreconditionError&) {
      }
    }
  }
  Rational gamma;
  if (theta_F) {
    // beta-check on F with theta'_F = (1 + theta_F)/2, then halve.
    Rational tF = (one + *theta_F) / 2;
    gamma = (one / (2 * (one - tF))) / 2;
  } else {
    gamma = mu;
    gamma_note = "exponent of ||grad E||^2 unavailable; gamma taken equal to mu";
  }

  PointSet pts = sample_ball(d, opts.delta, opts.sampling.samples, opts.sampling.seed);
  const std::vector<double> origin(d, 0.0);
  const double level = E.evaluate(origin);
  const auto grad = E.gradient();
  std::vector<double> dE(pts.size()), gnorm(pts.size());
  parallel_for(pts.size(), opts.sampling.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> g(d);
    for (std::size_t k = b; k < e; ++k) {
      dE[k] = E.evaluate(pts[k]) - level;
      for (std::size_t i = 0; i < d; ++i) g[i] = grad[i].evaluate(pts[k]);
      gnorm[k] = norm(g);
    }
  });

  std::vector<InequalityCheckReport> out;
  bool nonnegative = std::all_of(dE.begin(), dE.end(), [](double v) { return v >= 0.0; });
  if (nonnegative) {
    out.push_back(distance_check(InequalityKind::DistanceCritical, alpha, pts, dE, crit, opts));
  } else {
    InequalityCheckReport r;
    r.kind = InequalityKind::DistanceCritical;
    r.exponent = alpha;
    r.sigma = opts.sigma;
    r.delta = opts.delta;
    r.skipped = true;
    r.note = "E - E(0) takes negative values on the ball; hypothesis E >= 0 fails";
    out.push_back(std::move(r));
  }
  std::vector<double> absE(dE.size());
  std::transform(dE.begin(), dE.end(), absE.begin(), [](double v) { return std::abs(v); });
  out.push_back(distance_check(InequalityKind::DistanceZero, beta, pts, absE, zero, opts));
  out.push_back(distance_check(InequalityKind::GradientDistance, mu, pts, gnorm, crit, opts));
  auto g = distance_check(InequalityKind::GradientDistanceAnalytic, gamma, pts, gnorm, crit, opts);
  if (!gamma_note.empty()) g.note = gamma_note;
  out.push_back(std::move(g));
  return out;
}

}  // namespace loja
