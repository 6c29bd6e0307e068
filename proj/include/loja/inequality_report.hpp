#pragma once

#include "loja/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace loja {

enum class InequalityKind {
  Gradient,                  // ||grad E|| >= C |E|^theta
  DistanceCritical,          // E >= C dist(x, Crit)^alpha
  DistanceZero,              // |E| >= C dist(x, Zero)^beta
  GradientDistance,          // ||grad E|| >= C dist(x, Crit)^mu
  GradientDistanceAnalytic,  // ||grad E|| >= C dist(x, Crit)^gamma
};

std::string to_string(InequalityKind kind);

/// Evidence for one sampled inequality.
struct InequalityCheckReport {
  InequalityKind kind = InequalityKind::Gradient;
  Rational exponent;
  /// Largest constant for which the inequality holds at every sample.
  double measured_constant = 0.0;
  std::optional<double> predicted_constant;
  bool pass = false;
  /// Hypothesis not met on the samples; pass is false and means nothing.
  bool skipped = false;
  std::size_t sample_count = 0;
  double sigma = 0.0;
  double delta = 0.0;
  /// Free-form remark, e.g. why a sub-check was skipped.
  std::string note;
};

inline constexpr double kConstantSlack = 0.01;

/// measured > 0, and measured >= predicted up to 1% when a prediction exists.
bool constant_check_passes(double measured, const std::optional<double>& predicted);

}  // namespace loja
