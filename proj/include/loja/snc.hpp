#pragma once

#include "loja/inequality_report.hpp"
#include "loja/polynomial.hpp"
#include "loja/sampling.hpp"

#include <span>

namespace loja {

/// p = x^exponents * residual with maximal monomial content.
struct MonomialFactorization {
  Exponents exponents;
  Polynomial residual;
  bool snc_at_origin = false;
};

/// Throws PreconditionError for the zero polynomial.
MonomialFactorization detect_snc(const Polynomial& p);

struct ExponentReport {
  Exponents exponents;
  Rational theta;
  unsigned total_degree_N = 0;
  unsigned active_count_c = 0;
  unsigned max_exponent_n = 0;
  bool optimal = false;

  // Filled by compute_constants.
  bool has_constants = false;
  double ball_radius_sigma = 0.0;
  double unit_min_m = 0.0;
  double unit_max_M = 0.0;
  double constant_C0 = 0.0;
  unsigned halvings = 0;
};

/// theta = 1 - 1/N. Rejects non-snc input, c = 0, and c = 1 with n1 = 1
/// (the origin is then not a critical point).
ExponentReport exponent_from_snc(const MonomialFactorization& mf);

inline constexpr unsigned kMaxSigmaHalvings = 40;

/// Shrinks sigma by halving until |x_j F_j| <= (n_j/2)|F| holds for every
/// active j at every sample, where F is the residual, then measures
/// m = min |F| and M = max |F| on the sampled ball and sets
/// C0 = m/(2 M^theta) for c = 1, m sqrt(N/n)/(2 M^theta) for c >= 2.
/// Throws NumericalError after kMaxSigmaHalvings halvings.
ExponentReport compute_constants(const MonomialFactorization& mf, double sigma, const SamplingOptions& opts = {});

/// Minimum of ||grad p|| / |p|^theta over samples of the report's ball
/// (zeros of p skipped), compared against C0.
InequalityCheckReport verify_gradient_inequality(const Polynomial& p, const ExponentReport& report,
                                                 const SamplingOptions& opts = {});

/// (prod a_j)^r <= r sum a_j^{p_j}/p_j with 1/r = sum 1/p_j, in doubles with a
/// relative tolerance.
bool generalized_young_holds(std::span<const double> a, std::span<const double> p, double rel_tol = 1e-12);

/// Exact version for integer p_j and positive rational a_j: with r = u/v in
/// lowest terms, compares (prod a_j)^u against (r sum a_j^{p_j}/p_j)^v.
bool generalized_young_holds_exact(std::span<const Rational> a, std::span<const unsigned> p);

/// prod x_i^{2n_i} sum_{n_j>0} x_j^{-2} >= (N/n) (prod x_i^{2n_i})^theta for
/// nonzero coordinates, theta = 1 - 1/N. Evaluated in log space.
bool monomial_inequality_holds(std::span<const double> x, std::span<const unsigned> n, double rel_tol = 1e-12);

}  // namespace loja
