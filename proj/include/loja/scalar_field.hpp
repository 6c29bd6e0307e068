#pragma once

#include "loja/polynomial.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loja {

/// log|E(x) - level| and log||grad E(x)||; -inf where the quantity is zero.
struct LogEval {
  double log_abs_delta;
  double log_grad_norm;
};

/// A differentiable function on R^d, polynomial or black box.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::string name() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  /// Overridden by functions whose values underflow doubles near their zeros.
  virtual LogEval log_eval(std::span<const double> x, double level) const;
  /// Non-null for polynomial fields.
  virtual const Polynomial* polynomial() const { return nullptr; }

  std::vector<double> gradient(std::span<const double> x) const;
  double gradient_norm(std::span<const double> x) const;
};

class PolynomialField final : public ScalarField {
 public:
  explicit PolynomialField(Polynomial p);

  std::size_t dimension() const override { return p_.dimension(); }
  std::string name() const override { return p_.to_string(); }
  double value(std::span<const double> x) const override { return p_.evaluate(x); }
  void gradient(std::span<const double> x, std::span<double> out) const override;
  const Polynomial* polynomial() const override { return &p_; }
  using ScalarField::gradient;

 private:
  Polynomial p_;
  std::vector<Polynomial> grad_;
};

/// Caller-supplied callables. Without a gradient callable, central differences
/// with step 1e-7 * max(||x - reference||, 1e-300) are used.
class BlackBoxField final : public ScalarField {
 public:
  using Value = std::function<double(std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

  BlackBoxField(std::string name, std::size_t dimension, Value value, Gradient gradient = {},
                std::vector<double> reference = {});

  std::size_t dimension() const override { return dim_; }
  std::string name() const override { return name_; }
  double value(std::span<const double> x) const override { return value_(x); }
  void gradient(std::span<const double> x, std::span<double> out) const override;
  using ScalarField::gradient;

 private:
  std::string name_;
  std::size_t dim_;
  Value value_;
  Gradient gradient_;
  std::vector<double> reference_;
};

/// Registered non-polynomial functions: "haraux" (x^2+y^2) exp(-(x^2+y^2)/x^2)
/// and "delellis" exp(-1/|x|), both extended by 0.
std::vector<std::string> builtin_ids();
bool is_builtin(std::string_view id);
std::unique_ptr<ScalarField> make_builtin(std::string_view id);

/// Builtin by id, otherwise a parsed polynomial.
std::unique_ptr<ScalarField> make_field(std::string_view text_or_id);

}  // namespace loja
