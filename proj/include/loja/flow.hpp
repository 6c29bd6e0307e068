#pragma once

#include "loja/inequality_report.hpp"
#include "loja/polynomial.hpp"
#include "loja/sampling.hpp"
#include "loja/scalar_field.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loja {

/// A finite union of coordinate subspaces (each spanned by the listed
/// coordinates; an empty list is the origin) or a finite set of points.
/// Distances are exact.
class CriticalSetDescriptor {
 public:
  static CriticalSetDescriptor subspace(std::size_t dimension, std::vector<std::size_t> free_coordinates);
  static CriticalSetDescriptor subspaces(std::size_t dimension, std::vector<std::vector<std::size_t>> free_sets);
  static CriticalSetDescriptor points(std::vector<std::vector<double>> points);

  bool is_subspace() const { return subspace_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<std::vector<std::size_t>>& subspace_list() const { return free_; }
  const std::vector<std::vector<double>>& point_list() const { return points_; }

  double distance(std::span<const double> x) const;
  std::vector<double> nearest(std::span<const double> x) const;
  std::string describe() const;

 private:
  bool subspace_ = true;
  std::size_t dim_ = 0;
  std::vector<std::vector<std::size_t>> free_;
  std::vector<std::vector<double>> points_;
};

enum class StopReason { GradientBelowTol, MaxTime, LeftDomain };

std::string to_string(StopReason r);

struct TrajectorySample {
  double t = 0.0;
  std::vector<double> x;
  double energy = 0.0;
  double grad_norm = 0.0;
  double arc_length = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double arc_length = 0.0;
  std::optional<std::vector<double>> limit_point;
  std::optional<double> snap_distance;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxTime;
  std::size_t rejected_steps = 0;
};

struct FlowOptions {
  double tol = 1e-10;
  double t_max = 1e7;
  /// Radius of the working ball around the origin.
  double sigma = 1.0;
  double atol = 1e-11;
  double rtol = 1e-11;
  double initial_step = 1e-3;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
  std::optional<CriticalSetDescriptor> critical_set;
};

/// Integrates dx/dt = -grad E with an embedded Dormand-Prince 5(4) pair,
/// carrying the arc length ds/dt = ||grad E|| as an extra state component.
/// Throws NumericalError on a non-finite gradient.
Trajectory integrate_flow(const ScalarField& E, std::span<const double> x0, const FlowOptions& opts = {});

/// E must not increase by more than slack between consecutive samples.
bool energy_monotone(const Trajectory& traj, double slack = 1e-9);

struct LengthBoundCheck {
  double arc_length = 0.0;
  double bound = 0.0;
  /// bound - arc_length
  double margin = 0.0;
  bool pass = false;
};

/// arc_length <= (E(x0) - E(limit))^(1-theta) / ((1-theta) C), with 1% slack.
/// Throws PreconditionError unless the trajectory converged and 0 < C,
/// theta in [1/2, 1).
LengthBoundCheck verify_length_bound(const Trajectory& traj, const Rational& theta, double C);

struct ArcLengthIdentityCheck {
  std::size_t interior_samples = 0;
  /// max | ||dy/ds|| - 1 |
  double max_speed_error = 0.0;
  /// max |Q'(s) + ||grad E|| | / ||grad E||
  double max_q_relative_error = 0.0;
  bool pass = false;
};

/// Five-point finite differences in s over interior samples; the converged
/// tail (E - E_final below tail_fraction of the total drop) is excluded.
ArcLengthIdentityCheck check_arc_length_identities(const Trajectory& traj, double tol = 1e-6,
                                                   double tail_fraction = 1e-6);

struct DistanceCheckOptions {
  double sigma = 1.0;
  double delta = 0.25;
  SamplingOptions sampling;
  /// Exponent of F = ||grad E||^2 for the gamma check. When absent it is
  /// taken from F's normal-crossings form, else gamma falls back to mu.
  std::optional<Rational> theta_F;
  /// Zero set for the beta check; defaults to the critical set.
  std::optional<CriticalSetDescriptor> zero_set;
};

/// Sampled constants for, in order:
///   E >= C1 dist(x, Crit)^alpha,        alpha = 1/(1-theta)
///   |E| >= C2 dist(x, Zero)^beta,       beta = 1/(2(1-theta')), theta' = (1+theta)/2 for E^2
///   ||grad E|| >= C dist(x, Crit)^mu,   mu = theta/(1-theta)
///   ||grad E|| >= C dist(x, Crit)^gamma, gamma = half the beta exponent of F
/// over the ball of radius delta. The alpha check is skipped if E < E(0)
/// somewhere on the samples.
std::vector<InequalityCheckReport> verify_distance_inequalities(const Polynomial& E,
                                                                const CriticalSetDescriptor& crit,
                                                                const Rational& theta,
                                                                const DistanceCheckOptions& opts = {});

}  // namespace loja
