#pragma once

#include "loja/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loja {

using Exponents = std::vector<unsigned>;

inline constexpr unsigned kMaxDegreePerVariable = 64;
inline constexpr std::size_t kMaxTerms = 1'000'000;

/// Ascending total degree, ties broken lexicographically with larger leading
/// exponents first: 1, x, y, x^2, x*y, y^2, ...
struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Exact sparse multivariate polynomial over the rationals.
///
/// Values are immutable once built: every constructor canonicalizes (drops
/// zero coefficients, checks exponent-vector lengths and the degree/term caps)
/// and precomputes a flat double-precision copy for fast numeric evaluation.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables);
  Polynomial(std::vector<std::string> variables, TermMap terms);

  static Polynomial constant(std::vector<std::string> variables, const Rational& value);
  static Polynomial variable(std::vector<std::string> variables, std::size_t index);
  static Polynomial monomial(std::vector<std::string> variables, Exponents exponents,
                             const Rational& coefficient = 1);

  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t dimension() const { return variables_.size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  Rational coefficient(const Exponents& exponents) const;
  Rational constant_term() const;
  /// Largest total degree of a term; 0 for the zero polynomial.
  unsigned total_degree() const;
  /// Smallest total degree of a term (order of vanishing at the origin).
  /// Throws PreconditionError for the zero polynomial.
  unsigned order() const;
  unsigned degree_in(std::size_t variable) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate(std::span<const Rational> point) const;

  Polynomial derivative(std::size_t variable) const;
  std::vector<Polynomial> gradient() const;
  /// Sum of the terms of exactly this total degree.
  Polynomial homogeneous_part(unsigned degree) const;
  /// Sets the listed variables to zero; the variable list is unchanged.
  Polynomial with_zeroed(std::span<const std::size_t> indices) const;
  /// Re-expresses the polynomial over a superset of its variables, in the
  /// given order. Throws DimensionError if a used variable is missing.
  Polynomial with_variables(std::vector<std::string> variables) const;
  Polynomial renamed(const std::map<std::string, std::string>& names) const;

  /// Canonical text: graded-lex order, explicit '*' and '^'.
  std::string to_string() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.variables_ == b.variables_ && a.terms_ == b.terms_;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);
  friend Polynomial operator-(const Polynomial& p);

 private:
  void canonicalize();

  std::vector<std::string> variables_;
  TermMap terms_;
  // Flat numeric copy: term t has coefficient numeric_coefficients_[t] and
  // exponents numeric_exponents_[t * dimension() + i].
  std::vector<double> numeric_coefficients_;
  std::vector<unsigned> numeric_exponents_;
  std::vector<unsigned> max_degree_;
};

Polynomial pow(const Polynomial& p, unsigned exponent);

/// Union of two variable lists, first list's order then new names from the second.
std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b);

/// Simultaneous substitution of polynomials for variables.
struct Substitution {
  std::map<std::string, Polynomial> images;
};

/// Composes p with the substitution. The result's variables are, in order, the
/// image variables of each substituted variable and the untouched variables.
/// Throws DimensionError if a key is not a variable of p, or if an image uses
/// the name of a variable of p that is not itself substituted.
Polynomial substitute(const Polynomial& p, const Substitution& s);

struct MonomialContent {
  Exponents exponents;
  Polynomial quotient;
};

/// Largest monomial x^m dividing every term, and the exact quotient p / x^m.
/// Throws PreconditionError for the zero polynomial.
MonomialContent extract_monomial_factor(const Polynomial& p);

/// Parses the input grammar: identifiers [a-zA-Z][a-zA-Z0-9_]*, integer and
/// p/q literals, + - * ^ and parentheses. Variables listed in `declared` come
/// first in the given order; others follow in order of first appearance.
/// Throws ParseError.
Polynomial parse(std::string_view text, std::vector<std::string> declared = {});

}  // namespace loja
