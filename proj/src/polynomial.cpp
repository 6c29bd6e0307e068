#include "loja/polynomial.hpp"

#include "loja/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace loja {

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = std::accumulate(a.begin(), a.end(), 0u);
  unsigned db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  // Same degree: x^2 before x*y before y^2.
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::vector<std::string> variables) : variables_(std::move(variables)) {
  canonicalize();
}

Polynomial::Polynomial(std::vector<std::string> variables, TermMap terms)
    : variables_(std::move(variables)), terms_(std::move(terms)) {
  canonicalize();
}

Polynomial Polynomial::constant(std::vector<std::string> variables, const Rational& value) {
  TermMap t;
  t.emplace(Exponents(variables.size(), 0u), value);
  return Polynomial(std::move(variables), std::move(t));
}

Polynomial Polynomial::variable(std::vector<std::string> variables, std::size_t index) {
  if (index >= variables.size()) throw DimensionError("variable index out of range");
  Exponents e(variables.size(), 0u);
  e[index] = 1;
  return monomial(std::move(variables), std::move(e));
}

Polynomial Polynomial::monomial(std::vector<std::string> variables, Exponents exponents,
                                const Rational& coefficient) {
  TermMap t;
  t.emplace(std::move(exponents), coefficient);
  return Polynomial(std::move(variables), std::move(t));
}

void Polynomial::canonicalize() {
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (!seen.insert(v).second) throw DimensionError("duplicate variable '" + v + "'");
  }
  const std::size_t d = variables_.size();
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.size() != d) throw DimensionError("exponent vector length does not match variable count");
    for (unsigned e : it->first) {
      if (e > kMaxDegreePerVariable) {
        throw LimitError("degree " + std::to_string(e) + " exceeds the per-variable cap of " +
                         std::to_string(kMaxDegreePerVariable));
      }
    }
    if (it->second == 0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  if (terms_.size() > kMaxTerms) throw LimitError("term count exceeds cap");

  numeric_coefficients_.clear();
  numeric_exponents_.clear();
  max_degree_.assign(d, 0u);
  numeric_coefficients_.reserve(terms_.size());
  numeric_exponents_.reserve(terms_.size() * d);
  for (const auto& [e, c] : terms_) {
    numeric_coefficients_.push_back(to_double(c));
    for (std::size_t i = 0; i < d; ++i) {
      numeric_exponents_.push_back(e[i]);
      max_degree_[i] = std::max(max_degree_[i], e[i]);
    }
  }
}

std::optional<std::size_t> Polynomial::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == name) return i;
  }
  return std::nullopt;
}

Rational Polynomial::coefficient(const Exponents& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(Exponents(dimension(), 0u)); }

unsigned Polynomial::total_degree() const {
  if (terms_.empty()) return 0;
  const auto& e = terms_.rbegin()->first;
  return std::accumulate(e.begin(), e.end(), 0u);
}

unsigned Polynomial::order() const {
  if (terms_.empty()) throw PreconditionError("order of the zero polynomial is undefined");
  const auto& e = terms_.begin()->first;
  return std::accumulate(e.begin(), e.end(), 0u);
}

unsigned Polynomial::degree_in(std::size_t variable) const {
  if (variable >= dimension()) throw DimensionError("variable index out of range");
  return max_degree_[variable];
}

double Polynomial::evaluate(std::span<const double> point) const {
  const std::size_t d = dimension();
  if (point.size() != d) {
    throw DimensionError("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                         std::to_string(d) + " variables");
  }
  // Power tables, one row per variable. Scratch space is per thread so
  // concurrent evaluation of a shared polynomial is safe.
  thread_local std::vector<double> powers;
  thread_local std::vector<std::size_t> offset;
  offset.assign(d + 1, 0);
  for (std::size_t i = 0; i < d; ++i) offset[i + 1] = offset[i] + max_degree_[i] + 1;
  powers.resize(offset[d]);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 1.0;
    for (unsigned k = 0; k <= max_degree_[i]; ++k) {
      powers[offset[i] + k] = acc;
      acc *= point[i];
    }
  }
  double sum = 0.0;
  const std::size_t n = numeric_coefficients_.size();
  for (std::size_t t = 0; t < n; ++t) {
    double term = numeric_coefficients_[t];
    const unsigned* e = numeric_exponents_.data() + t * d;
    for (std::size_t i = 0; i < d; ++i) {
      if (e[i]) term *= powers[offset[i] + e[i]];
    }
    sum += term;
  }
  return sum;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  const std::size_t d = dimension();
  if (point.size() != d) throw DimensionError("point dimension does not match variable count");
  std::vector<std::vector<Rational>> powers(d);
  for (std::size_t i = 0; i < d; ++i) {
    powers[i].resize(max_degree_[i] + 1);
    powers[i][0] = 1;
    for (unsigned k = 1; k <= max_degree_[i]; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < d; ++i) {
      if (e[i]) term *= powers[i][e[i]];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t variable) const {
  if (variable >= dimension()) throw DimensionError("variable index out of range");
  TermMap out;
  for (const auto& [e, c] : terms_) {
    if (e[variable] == 0) continue;
    Exponents f = e;
    f[variable] -= 1;
    out[f] += c * e[variable];
  }
  return Polynomial(variables_, std::move(out));
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) g.push_back(derivative(i));
  return g;
}

Polynomial Polynomial::homogeneous_part(unsigned degree) const {
  TermMap out;
  for (const auto& [e, c] : terms_) {
    if (std::accumulate(e.begin(), e.end(), 0u) == degree) out.emplace(e, c);
  }
  return Polynomial(variables_, std::move(out));
}

Polynomial Polynomial::with_zeroed(std::span<const std::size_t> indices) const {
  for (auto i : indices) {
    if (i >= dimension()) throw DimensionError("variable index out of range");
  }
  TermMap out;
  for (const auto& [e, c] : terms_) {
    bool keep = std::all_of(indices.begin(), indices.end(), [&](std::size_t i) { return e[i] == 0; });
    if (keep) out.emplace(e, c);
  }
  return Polynomial(variables_, std::move(out));
}

Polynomial Polynomial::with_variables(std::vector<std::string> variables) const {
  std::vector<std::size_t> target(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) {
    auto it = std::find(variables.begin(), variables.end(), variables_[i]);
    if (it == variables.end()) {
      if (max_degree_[i] > 0) throw DimensionError("variable '" + variables_[i] + "' is used but not in the new list");
      target[i] = variables.size();  // unused, dropped
    } else {
      target[i] = static_cast<std::size_t>(it - variables.begin());
    }
  }
  TermMap out;
  for (const auto& [e, c] : terms_) {
    Exponents f(variables.size(), 0u);
    for (std::size_t i = 0; i < dimension(); ++i) {
      if (target[i] < variables.size()) f[target[i]] = e[i];
    }
    out.emplace(std::move(f), c);
  }
  return Polynomial(std::move(variables), std::move(out));
}

Polynomial Polynomial::renamed(const std::map<std::string, std::string>& names) const {
  std::vector<std::string> vars = variables_;
  for (auto& v : vars) {
    auto it = names.find(v);
    if (it != names.end()) v = it->second;
  }
  return Polynomial(std::move(vars), terms_);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    bool negative = c < 0;
    Rational magnitude = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;

    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += variables_[i];
      if (e[i] > 1) mono += '^' + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out << loja::to_string(magnitude);
    } else if (magnitude == 1) {
      out << mono;
    } else {
      out << loja::to_string(magnitude) << '*' << mono;
    }
  }
  return out.str();
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& v : b) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

namespace {

std::pair<Polynomial, Polynomial> aligned(const Polynomial& a, const Polynomial& b) {
  if (a.variables() == b.variables()) return {a, b};
  auto vars = merge_variables(a.variables(), b.variables());
  return {a.with_variables(vars), b.with_variables(vars)};
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.variables_ != b.variables_) {
    auto [x, y] = aligned(a, b);
    return x + y;
  }
  Polynomial::TermMap out = a.terms_;
  for (const auto& [e, c] : b.terms_) out[e] += c;
  return Polynomial(a.variables_, std::move(out));
}

Polynomial operator-(const Polynomial& p) {
  Polynomial::TermMap out = p.terms_;
  for (auto& [e, c] : out) c = -c;
  return Polynomial(p.variables_, std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Rational& k, const Polynomial& p) {
  Polynomial::TermMap out;
  if (k != 0) {
    out = p.terms_;
    for (auto& [e, c] : out) c *= k;
  }
  return Polynomial(p.variables_, std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.variables_ != b.variables_) {
    auto [x, y] = aligned(a, b);
    return x * y;
  }
  const std::size_t d = a.dimension();
  Polynomial::TermMap out;
  Exponents e(d);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < d; ++i) {
        e[i] = ea[i] + eb[i];
        if (e[i] > kMaxDegreePerVariable) throw LimitError("product exceeds the per-variable degree cap");
      }
      out[e] += ca * cb;
    }
    if (out.size() > kMaxTerms) throw LimitError("product exceeds the term cap");
  }
  return Polynomial(a.variables_, std::move(out));
}

Polynomial pow(const Polynomial& p, unsigned exponent) {
  Polynomial result = Polynomial::constant(p.variables(), 1);
  Polynomial base = p;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

Polynomial substitute(const Polynomial& p, const Substitution& s) {
  const auto& src = p.variables();
  for (const auto& [name, image] : s.images) {
    if (!p.index_of(name)) throw DimensionError("substituted variable '" + name + "' is not a variable of the polynomial");
  }

  std::vector<std::string> vars;
  auto add = [&](const std::string& v) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  };
  for (const auto& v : src) {
    auto it = s.images.find(v);
    if (it == s.images.end()) {
      add(v);
    } else {
      for (const auto& w : it->second.variables()) add(w);
    }
  }
  for (const auto& [name, image] : s.images) {
    for (const auto& w : image.variables()) {
      if (w != name && p.index_of(w) && !s.images.count(w)) {
        throw DimensionError("variable name collision: '" + w + "' is both an image variable and an untouched source variable");
      }
    }
  }

  // Per-variable images in the result ring, with cached powers.
  const std::size_t d = src.size();
  std::vector<Polynomial> images(d);
  std::vector<std::vector<Polynomial>> powers(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto it = s.images.find(src[i]);
    images[i] = it == s.images.end()
                    ? Polynomial::variable(vars, static_cast<std::size_t>(
                                                     std::find(vars.begin(), vars.end(), src[i]) - vars.begin()))
                    : it->second.with_variables(vars);
    powers[i].push_back(Polynomial::constant(vars, 1));
  }
  auto power = [&](std::size_t i, unsigned k) -> const Polynomial& {
    while (powers[i].size() <= k) powers[i].push_back(powers[i].back() * images[i]);
    return powers[i][k];
  };

  Polynomial result(vars);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(vars, c);
    for (std::size_t i = 0; i < d; ++i) {
      if (e[i]) term = term * power(i, e[i]);
    }
    result = result + term;
  }
  return result;
}

MonomialContent extract_monomial_factor(const Polynomial& p) {
  if (p.is_zero()) throw PreconditionError("monomial content of the zero polynomial is undefined");
  const std::size_t d = p.dimension();
  Exponents m = p.terms().begin()->first;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < d; ++i) m[i] = std::min(m[i], e[i]);
  }
  Polynomial::TermMap q;
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    for (std::size_t i = 0; i < d; ++i) f[i] -= m[i];
    q.emplace(std::move(f), c);
  }
  return {m, Polynomial(p.variables(), std::move(q))};
}

}  // namespace loja
