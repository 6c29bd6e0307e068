#pragma once

#include "loja/rational.hpp"
#include "loja/scalar_field.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loja {

struct EstimateOptions {
  double r_min = 1e-6;
  double r_max = 1e-1;
  std::size_t radius_count = 26;
  std::size_t samples_per_radius = 400;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Pattern search on the sphere from the best samples.
  bool refine = true;
};

/// Extremal point at one radius: the largest log||grad E|| / log|E - E*|.
struct EnvelopePoint {
  double radius = 0.0;
  double log_abs_delta = 0.0;
  double log_grad_norm = 0.0;
  double ratio = 0.0;
  std::size_t kept_samples = 0;
};

struct ExponentEstimate {
  double theta_hat = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  std::vector<double> radii;
  /// Radii with no usable sample are absent here.
  std::vector<EnvelopePoint> envelope;
  /// Slopes between consecutive envelope points, largest radius first.
  std::vector<double> local_slopes;
  std::size_t fit_points = 0;
  bool failure_detected = false;
  /// |E - E*| does not shrink with the radius on average.
  bool interference_suspected = false;
  std::size_t discarded_samples = 0;
};

inline constexpr double kFailureThreshold = 0.98;

ExponentEstimate estimate_theta(const ScalarField& E, std::span<const double> x_star,
                                const EstimateOptions& opts = {});

struct ConsistencyVerdict {
  bool consistent = false;
  double bound_low = 0.5;
  double bound_high = 1.0;
  /// bound_high - (theta_hat - half band)
  double slack_high = 0.0;
  /// (theta_hat + half band) - bound_low
  double slack_low = 0.0;
};

ConsistencyVerdict compare_with_resolution_bound(const ExponentEstimate& estimate, const Rational& bound_low,
                                                 const Rational& bound_high);

struct CounterexampleCase {
  std::string id;
  bool expected_failure = false;
  ExponentEstimate estimate;
  bool pass = false;
};

/// Both builtins must be flagged; the x^2 control must not.
std::vector<CounterexampleCase> haraux_counterexample_check(const EstimateOptions& opts = {});

/// "radius,min_ratio" rows for plotting; the ratio is the envelope ratio.
std::string envelope_csv(const ExponentEstimate& estimate);

}  // namespace loja
