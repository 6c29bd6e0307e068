#include "loja/scalar_field.hpp"

#include "loja/errors.hpp"
#include "loja/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loja {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// log(exp(a) + exp(b))
double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

LogEval ScalarField::log_eval(std::span<const double> x, double level) const {
  return {safe_log(std::abs(value(x) - level)), safe_log(gradient_norm(x))};
}

std::vector<double> ScalarField::gradient(std::span<const double> x) const {
  std::vector<double> g(dimension());
  gradient(x, g);
  return g;
}

double ScalarField::gradient_norm(std::span<const double> x) const {
  auto g = gradient(x);
  return norm(g);
}

PolynomialField::PolynomialField(Polynomial p) : p_(std::move(p)), grad_(p_.gradient()) {}

void PolynomialField::gradient(std::span<const double> x, std::span<double> out) const {
  if (out.size() != grad_.size()) throw DimensionError("gradient buffer has the wrong size");
  for (std::size_t i = 0; i < grad_.size(); ++i) out[i] = grad_[i].evaluate(x);
}

BlackBoxField::BlackBoxField(std::string name, std::size_t dimension, Value value, Gradient gradient,
                             std::vector<double> reference)
    : name_(std::move(name)),
      dim_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      reference_(std::move(reference)) {
  if (!reference_.empty() && reference_.size() != dim_) throw DimensionError("reference point dimension mismatch");
}

void BlackBoxField::gradient(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim_ || out.size() != dim_) throw DimensionError("black-box gradient dimension mismatch");
  if (gradient_) {
    gradient_(x, out);
    return;
  }
  std::vector<double> shifted(x.begin(), x.end());
  for (std::size_t i = 0; i < dim_; ++i) shifted[i] -= reference_.empty() ? 0.0 : reference_[i];
  double h = 1e-7 * std::max(norm(shifted), 1e-300);
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < dim_; ++i) {
    probe[i] = x[i] + h;
    double up = value_(probe);
    probe[i] = x[i] - h;
    double down = value_(probe);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * h);
  }
}

namespace {

// (x^2+y^2) exp(-(x^2+y^2)/x^2). With s = 1 + y^2/x^2:
//   E_x = exp(-s) (2x + 2 rho y^2 / x^3),  E_y = -exp(-s) 2 y^3 / x^2.
class HarauxField final : public ScalarField {
 public:
  std::size_t dimension() const override { return 2; }
  std::string name() const override { return "haraux"; }

  double value(std::span<const double> p) const override {
    check(p);
    double x = p[0], y = p[1];
    if (x == 0.0) return 0.0;
    double rho = x * x + y * y;
    return rho * std::exp(-rho / (x * x));
  }

  void gradient(std::span<const double> p, std::span<double> out) const override {
    check(p);
    double x = p[0], y = p[1];
    if (x == 0.0) {
      out[0] = out[1] = 0.0;
      return;
    }
    double rho = x * x + y * y;
    double e = std::exp(-rho / (x * x));
    out[0] = e * (2.0 * x + 2.0 * rho * y * y / (x * x * x));
    out[1] = -e * 2.0 * y * y * y / (x * x);
  }

  LogEval log_eval(std::span<const double> p, double level) const override {
    check(p);
    if (level != 0.0) return ScalarField::log_eval(p, level);
    double x = p[0], y = p[1];
    if (x == 0.0) return {kNegInf, kNegInf};
    double lx = std::log(std::abs(x));
    double ly = safe_log(std::abs(y));
    double rho = x * x + y * y;
    double s = 1.0 + std::exp(2.0 * (ly - lx));
    double log_e = std::log(rho) - s;
    // |E_x| = exp(-s) 2|x| (1 + rho y^2 / x^4); both summands share the sign of x.
    double log_a = std::log(2.0) + lx + log_add(0.0, std::log(rho) + 2.0 * ly - 4.0 * lx);
    double log_b = std::log(2.0) + 3.0 * ly - 2.0 * lx;
    double log_g = 0.5 * log_add(2.0 * log_a, 2.0 * log_b) - s;
    return {log_e, log_g};
  }

 private:
  static void check(std::span<const double> p) {
    if (p.size() != 2) throw DimensionError("haraux is a function of two variables");
  }
};

// exp(-1/|x|), E(0) = 0.
class DeLellisField final : public ScalarField {
 public:
  std::size_t dimension() const override { return 1; }
  std::string name() const override { return "delellis"; }

  double value(std::span<const double> p) const override {
    check(p);
    return p[0] == 0.0 ? 0.0 : std::exp(-1.0 / std::abs(p[0]));
  }

  void gradient(std::span<const double> p, std::span<double> out) const override {
    check(p);
    double x = p[0];
    out[0] = x == 0.0 ? 0.0 : std::copysign(std::exp(-1.0 / std::abs(x)) / (x * x), x);
  }

  LogEval log_eval(std::span<const double> p, double level) const override {
    check(p);
    if (level != 0.0) return ScalarField::log_eval(p, level);
    double ax = std::abs(p[0]);
    if (ax == 0.0) return {kNegInf, kNegInf};
    return {-1.0 / ax, -2.0 * std::log(ax) - 1.0 / ax};
  }

 private:
  static void check(std::span<const double> p) {
    if (p.size() != 1) throw DimensionError("delellis is a function of one variable");
  }
};

}  // namespace

std::vector<std::string> builtin_ids() { return {"haraux", "delellis"}; }

bool is_builtin(std::string_view id) {
  auto ids = builtin_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::unique_ptr<ScalarField> make_builtin(std::string_view id) {
  if (id == "haraux") return std::make_unique<HarauxField>();
  if (id == "delellis") return std::make_unique<DeLellisField>();
  throw PreconditionError("unknown builtin '" + std::string(id) + "'");
}

std::unique_ptr<ScalarField> make_field(std::string_view text_or_id) {
  if (is_builtin(text_or_id)) return make_builtin(text_or_id);
  return std::make_unique<PolynomialField>(parse(text_or_id));
}

}  // namespace loja
