#include "loja/inequality_report.hpp"

namespace loja {

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::Gradient: return "gradient";
    case InequalityKind::DistanceCritical: return "distance-critical";
    case InequalityKind::DistanceZero: return "distance-zero";
    case InequalityKind::GradientDistance: return "gradient-distance";
    case InequalityKind::GradientDistanceAnalytic: return "gradient-distance-analytic";
  }
  return "unknown";
}

bool constant_check_passes(double measured, const std::optional<double>& predicted) {
  if (!(measured > 0.0)) return false;
  if (!predicted) return true;
  return measured >= *predicted * (1.0 - kConstantSlack);
}

}  // namespace loja
