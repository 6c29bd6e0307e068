#pragma once

#include "loja/inequality_report.hpp"
#include "loja/polynomial.hpp"
#include "loja/sampling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace loja {

using RationalMatrix = std::vector<std::vector<Rational>>;

enum class MorseBottKind { MorseBott, Generalized };

/// K is a set of coordinate indices: the coordinate subspace spanned by them
/// is the claimed critical manifold through the origin.
struct MorseBottReport {
  MorseBottKind kind = MorseBottKind::MorseBott;
  std::vector<std::size_t> critical_subspace;

  /// grad p vanishes identically on K (exact).
  bool gradient_vanishes_on_K = false;
  /// No critical point off K was found by Newton refinement from samples in
  /// a small ball. Heuristic.
  bool no_critical_points_off_K = false;
  std::size_t off_K_critical_samples = 0;
  bool is_critical_set_exactly_K = false;

  RationalMatrix hessian;
  /// Basis of the kernel of the Hessian at the origin (exact).
  RationalMatrix hessian_kernel;
  bool kernel_equals_K = false;

  std::optional<unsigned> order_N;
  bool condition_a = false;
  bool condition_b = false;
  bool condition_c = false;
  /// First derivative violating condition (b), e.g. "d^2/dx^2", and its
  /// restriction to K.
  std::string condition_b_failure;
  std::string condition_b_restriction;

  /// Sampled minimum of |E^(N)(0) v^N| over the unit sphere of the normal space.
  std::optional<double> coercivity_zeta;
  std::optional<double> certified_zeta;
  /// min - L h > 0 for a Lipschitz bound L and mesh covering radius h.
  bool zeta_lipschitz_certified = false;

  Rational predicted_theta;
  bool verdict = false;
};

struct CriticalSetOptions {
  double radius = 0.25;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Hessian of p at the origin.
RationalMatrix hessian_at_origin(const Polynomial& p);

/// Basis of the null space, one vector per free column of the RREF.
RationalMatrix kernel_basis(const RationalMatrix& m);

/// Throws PreconditionError if the origin is not critical, DimensionError for
/// out-of-range indices.
MorseBottReport check_morse_bott(const Polynomial& p, const std::vector<std::size_t>& K,
                                 const CriticalSetOptions& opts = {});

/// Throws PreconditionError if the origin is not critical or N < 2.
MorseBottReport check_generalized_morse_bott(const Polynomial& p, const std::vector<std::size_t>& K, unsigned N,
                                             const CriticalSetOptions& opts = {});

struct GmbCheckOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double initial_R = 1.0;
  double initial_L = 1.0;
  /// Run even when the report's verdict is negative (to exhibit failures).
  bool allow_failed_verdict = false;
  /// Extra points evaluated in addition to the cylinder samples.
  std::vector<std::vector<double>> probe_points;
};

struct GmbCheckResult {
  InequalityCheckReport check;
  double constant_C = 0.0;
  double R = 0.0;
  double L = 0.0;
  unsigned halvings = 0;
  /// Smallest ratio among the probe points only.
  std::optional<double> probe_min_ratio;
};

/// Samples the cylinder {kappa + r v : kappa in K, |kappa| < L, r < R, v normal
/// unit} after halving R and L until the Taylor remainder conditions hold on
/// the samples, and checks ||grad E|| >= C |E|^(1-1/N) with
/// C = (N/4) inf_v ((2/N!) ||E^(N)(0) v^(N-1)||)^(1/N).
GmbCheckResult verify_gmb_gradient_inequality(const Polynomial& p, const MorseBottReport& report,
                                              const GmbCheckOptions& opts = {});

}  // namespace loja
