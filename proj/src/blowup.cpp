#include "loja/blowup.hpp"

#include "loja/errors.hpp"
#include "loja/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace loja {

namespace {

std::string path_digits(const std::string& chart_id) {
  std::string out;
  for (char c : chart_id) {
    if (c >= '0' && c <= '9') out += c;
  }
  return out;
}

Rational bound_from_N(unsigned N) {
  Rational half(1, 2);
  if (N <= 2) return half;
  return Rational(1) - Rational(1, N);
}

// ---- univariate helpers over Q; c[i] is the coefficient of t^i ----

using Uni = std::vector<Rational>;

void trim(Uni& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Rational eval(const Uni& c, const Rational& t) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Uni derivative(const Uni& c) {
  Uni d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<unsigned>(i));
  trim(d);
  return d;
}

// Quotient by (t - root); assumes root is a root.
Uni deflate(const Uni& c, const Rational& root) {
  std::size_t n = c.size();
  Uni q(n - 1);
  Rational carry = 0;
  for (std::size_t i = n - 1; i >= 1; --i) {
    carry = c[i] + carry * root;
    q[i - 1] = carry;
  }
  trim(q);
  return q;
}

Uni remainder(Uni a, const Uni& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

int sign(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

unsigned sign_changes(const std::vector<Uni>& seq, const Rational& t) {
  unsigned changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = sign(eval(p, t));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Positive divisors of |n| by trial division; empty when |n| exceeds the cap.
std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> small, large;
  if (n > Integer(1'000'000'000'000LL)) return {};
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

struct RootScan {
  std::vector<std::pair<Rational, unsigned>> rational;  // nonzero roots with multiplicity
  std::vector<double> irrational;                       // approximate distinct real roots
  bool search_capped = false;
};

RootScan scan_nonzero_real_roots(Uni c) {
  RootScan out;
  trim(c);
  if (c.empty()) return out;
  // Drop the factor t^j.
  std::size_t j = 0;
  while (j < c.size() && c[j] == 0) ++j;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(j));
  if (c.size() <= 1) return out;

  Integer lcm = 1;
  for (const auto& q : c) {
    Integer den = boost::multiprecision::denominator(q);
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  std::vector<Integer> ic;
  for (const auto& q : c) ic.push_back(boost::multiprecision::numerator(Rational(q * lcm)));

  auto ps = divisors(ic.front());
  auto qs = divisors(ic.back());
  if (ps.empty() || qs.empty()) {
    out.search_capped = true;
  } else {
    std::vector<Rational> candidates;
    for (const auto& p : ps) {
      for (const auto& q : qs) {
        Rational r(p, q);
        if (std::find(candidates.begin(), candidates.end(), r) == candidates.end()) candidates.push_back(r);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& base : candidates) {
      for (Rational r : {Rational(-base), base}) {
        unsigned mult = 0;
        while (c.size() > 1 && eval(c, r) == 0) {
          c = deflate(c, r);
          ++mult;
        }
        if (mult > 0) out.rational.emplace_back(r, mult);
      }
    }
    std::sort(out.rational.begin(), out.rational.end());
  }
  if (c.size() <= 1) return out;

  // Remaining real roots are irrational (or unsearched): isolate by Sturm.
  std::vector<Uni> seq{c, derivative(c)};
  while (seq.back().size() > 1) {
    Uni r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& v : r) v = -v;
    seq.push_back(std::move(r));
  }
  Rational bound = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    Rational ratio = c[i] / c.back();
    if (ratio < 0) ratio = -ratio;
    bound = std::max(bound, ratio);
  }
  bound += 1;
  struct Interval {
    Rational lo, hi;
    int level;
  };
  std::deque<Interval> work{{-bound, bound, 0}};
  while (!work.empty()) {
    auto [lo, hi, level] = work.front();
    work.pop_front();
    unsigned count = sign_changes(seq, lo) - sign_changes(seq, hi);
    if (count == 0) continue;
    if (level >= 60 || (count == 1 && to_double(hi - lo) < 1e-12)) {
      out.irrational.push_back(to_double((lo + hi) / 2));
      continue;
    }
    Rational mid = (lo + hi) / 2;
    work.push_back({lo, mid, level + 1});
    work.push_back({mid, hi, level + 1});
  }
  std::sort(out.irrational.begin(), out.irrational.end());
  return out;
}

}  // namespace

std::string ExceptionalPoint::label() const {
  return leaf_path + "@" + translated_variable + ":" + to_string(location);
}

BlowupNode make_root_node(const Polynomial& p) {
  if (p.dimension() != 2) throw DimensionError("blow-ups need a polynomial in exactly two variables");
  BlowupNode root;
  root.variables = {p.variables()[0], p.variables()[1]};
  root.total_transform = p;
  root.snc = !p.is_zero() && detect_snc(p).snc_at_origin;
  root.composite = {Polynomial::variable(p.variables(), 0), Polynomial::variable(p.variables(), 1)};
  return root;
}

std::pair<BlowupNode, BlowupNode> blowup_once(const BlowupNode& parent) {
  const Polynomial& p = parent.total_transform;
  if (p.dimension() != 2) throw DimensionError("blow-ups need a polynomial in exactly two variables");
  const auto& [x, y] = parent.variables;
  const unsigned ord = p.is_zero() ? 0 : p.order();

  auto make = [&](int chart) {
    BlowupNode child;
    child.chart_id = parent.chart_id + "/" + std::to_string(chart);
    std::string digits = path_digits(child.chart_id);
    child.variables = {"u_" + digits, "v_" + digits};
    std::vector<std::string> vars{child.variables[0], child.variables[1]};
    Polynomial u = Polynomial::variable(vars, 0);
    Polynomial v = Polynomial::variable(vars, 1);
    if (chart == 1) {
      child.transform.images = {{x, u * v}, {y, v}};
      child.exceptional_multiplicities = {parent.exceptional_multiplicities[0], ord};
    } else {
      child.transform.images = {{x, u}, {y, u * v}};
      child.exceptional_multiplicities = {ord, parent.exceptional_multiplicities[1]};
    }
    child.total_transform = substitute(p, child.transform).with_variables(vars);
    child.snc = !child.total_transform.is_zero() && detect_snc(child.total_transform).snc_at_origin;
    child.depth = parent.depth + 1;
    for (const auto& c : parent.composite) child.composite.push_back(substitute(c, child.transform).with_variables(vars));
    return child;
  };
  return {make(1), make(2)};
}

std::pair<BlowupNode, BlowupNode> blowup_once(const Polynomial& p) { return blowup_once(make_root_node(p)); }

const BlowupNode* ChartTree::find(const std::string& chart_id) const {
  for (const auto& n : nodes) {
    if (n.chart_id == chart_id) return &n;
  }
  return nullptr;
}

std::vector<std::size_t> ChartTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) out.push_back(i);
  }
  return out;
}

namespace {

void analyze_exceptional_points(const BlowupNode& leaf, ResolutionResult& result) {
  auto mf = detect_snc(leaf.total_transform);
  const auto& vars = leaf.total_transform.variables();
  for (std::size_t axis = 0; axis < 2; ++axis) {
    if (leaf.exceptional_multiplicities[axis] == 0) continue;
    const std::size_t other = 1 - axis;
    // Residual along {vars[axis] = 0} as a polynomial in vars[other].
    std::size_t zeroed[] = {axis};
    Polynomial line = mf.residual.with_zeroed(zeroed);
    Uni c(line.degree_in(other) + 1);
    for (const auto& [e, coef] : line.terms()) c[e[other]] = coef;
    RootScan scan = scan_nonzero_real_roots(c);

    for (const auto& [rho, mult] : scan.rational) {
      ExceptionalPoint pt;
      pt.leaf_path = leaf.chart_id;
      pt.zero_axis = axis;
      pt.location = rho;
      pt.root_multiplicity = mult;
      pt.translated_variable = "w_" + path_digits(leaf.chart_id);
      std::vector<std::string> new_vars = vars;
      new_vars[other] = pt.translated_variable;
      Substitution shift;
      shift.images = {{vars[axis], Polynomial::variable(new_vars, axis)},
                      {vars[other], Polynomial::constant(new_vars, rho) - Polynomial::variable(new_vars, other)}};
      pt.translated = substitute(leaf.total_transform, shift).with_variables(new_vars);
      for (const auto& comp : leaf.composite) pt.composite.push_back(substitute(comp, shift).with_variables(new_vars));
      pt.factorization = detect_snc(pt.translated);
      pt.snc = pt.factorization.snc_at_origin;
      if (pt.snc) {
        for (unsigned e : pt.factorization.exponents) pt.N += e;
        pt.theta_bound = bound_from_N(pt.N);
      } else {
        result.unanalyzed.push_back(
            {leaf.chart_id, axis, to_double(rho), "not simple normal crossings after translation"});
        result.complete = false;
      }
      result.points.push_back(std::move(pt));
    }
    for (double t : scan.irrational) {
      result.unanalyzed.push_back({leaf.chart_id, axis, t, "irrational root of the residual"});
      result.complete = false;
    }
    if (scan.search_capped) result.complete = false;
  }
}

}  // namespace

ResolutionResult resolve(const Polynomial& p, const ResolveOptions& opts) {
  if (p.dimension() != 2) throw DimensionError("resolve needs a polynomial in exactly two variables");
  if (p.is_zero()) throw PreconditionError("cannot resolve the zero polynomial");
  if (p.constant_term() != 0) throw PreconditionError("p(0,0) != 0: nothing to resolve at the origin");

  ResolutionResult result;
  result.tree.root = p;
  result.tree.nodes.push_back(make_root_node(p));

  std::vector<std::size_t> level{0};
  while (!level.empty()) {
    std::vector<std::size_t> expand;
    for (auto i : level) {
      auto& node = result.tree.nodes[i];
      bool wants = opts.mode == ResolveMode::Uniform || !node.snc;
      if (!wants) continue;
      if (node.depth >= opts.max_depth) {
        node.depth_capped = !node.snc;
        continue;
      }
      expand.push_back(i);
    }
    std::vector<std::pair<BlowupNode, BlowupNode>> kids(expand.size());
    parallel_for(expand.size(), opts.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) kids[k] = blowup_once(result.tree.nodes[expand[k]]);
    });
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < expand.size(); ++k) {
      for (auto* child : {&kids[k].first, &kids[k].second}) {
        child->parent = expand[k];
        result.tree.nodes.push_back(std::move(*child));
        std::size_t idx = result.tree.nodes.size() - 1;
        result.tree.nodes[expand[k]].children.push_back(idx);
        result.tree.depth = std::max(result.tree.depth, result.tree.nodes[idx].depth);
        next.push_back(idx);
      }
    }
    level = std::move(next);
  }

  Rational half(1, 2);
  result.theta_interval = {half, half};
  for (auto i : result.tree.leaves()) {
    const auto& node = result.tree.nodes[i];
    LeafReport leaf;
    leaf.node = i;
    leaf.chart_path = node.chart_id;
    leaf.depth_capped = node.depth_capped;
    auto mf = detect_snc(node.total_transform);
    leaf.monomial = mf.exponents;
    leaf.residual = mf.residual;
    for (unsigned e : mf.exponents) leaf.N += e;
    leaf.theta_bound = bound_from_N(leaf.N);
    if (leaf.depth_capped) {
      result.complete = false;
    } else {
      result.theta_interval[1] = std::max(result.theta_interval[1], leaf.theta_bound);
      analyze_exceptional_points(node, result);
    }
    result.leaves.push_back(std::move(leaf));
  }
  for (const auto& pt : result.points) {
    if (pt.snc) result.theta_interval[1] = std::max(result.theta_interval[1], pt.theta_bound);
  }
  return result;
}

const PointBound* BoundResult::find(const std::string& label) const {
  for (const auto& p : points) {
    if (p.label == label) return &p;
  }
  return nullptr;
}

namespace {

// Largest singular value of the 2x2 Jacobian of the composite map, sampled
// over the ball of radius sigma.
double jacobian_sup(const std::vector<Polynomial>& composite, double sigma, const SamplingOptions& opts) {
  std::vector<std::vector<Polynomial>> J;
  for (const auto& c : composite) J.push_back(c.gradient());
  PointSet pts = sample_ball(2, sigma, opts.samples, opts.seed);
  std::vector<double> best(pts.size(), 0.0);
  parallel_for(pts.size(), opts.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      double a = J[0][0].evaluate(pts[k]), bb = J[0][1].evaluate(pts[k]);
      double c = J[1][0].evaluate(pts[k]), d = J[1][1].evaluate(pts[k]);
      double s = a * a + bb * bb + c * c + d * d;
      double det = a * d - bb * c;
      double disc = std::sqrt(std::max(0.0, s * s - 4.0 * det * det));
      best[k] = std::sqrt(0.5 * (s + disc));
    }
  });
  return *std::max_element(best.begin(), best.end());
}

PointBound bound_point(const std::string& label, unsigned N, const MonomialFactorization& mf,
                       const std::vector<Polynomial>& composite, const SamplingOptions& opts, double sigma) {
  PointBound pb;
  pb.label = label;
  pb.N = N;
  pb.theta_interval = {Rational(1, 2), bound_from_N(N)};
  try {
    auto report = compute_constants(mf, sigma, opts);
    pb.has_constants = true;
    pb.sigma = report.ball_radius_sigma;
    pb.C0 = report.constant_C0;
    pb.M = jacobian_sup(composite, pb.sigma, opts);
    pb.transported_constant = pb.M > 0.0 ? pb.C0 / pb.M : 0.0;
  } catch (const PreconditionError& e) {
    pb.note = e.what();
  }
  return pb;
}

}  // namespace

BoundResult pull_back_and_bound(const Polynomial& p, const ResolutionResult& result, const SamplingOptions& opts,
                                double sigma) {
  if (!(result.tree.root == p)) throw PreconditionError("resolution result belongs to a different polynomial");
  BoundResult out;
  Rational half(1, 2);
  out.covering = {half, half};
  out.complete = result.complete;
  bool any = false;
  for (const auto& leaf : result.leaves) {
    if (leaf.depth_capped) continue;
    any = true;
    const auto& node = result.tree.nodes[leaf.node];
    auto pb = bound_point(leaf.chart_path, leaf.N, detect_snc(node.total_transform), node.composite, opts, sigma);
    out.covering[1] = std::max(out.covering[1], pb.theta_interval[1]);
    out.points.push_back(std::move(pb));
  }
  if (!any) throw PreconditionError("every leaf is depth-capped");
  for (const auto& pt : result.points) {
    if (!pt.snc) continue;
    auto pb = bound_point(pt.label(), pt.N, pt.factorization, pt.composite, opts, sigma);
    out.covering[1] = std::max(out.covering[1], pb.theta_interval[1]);
    out.points.push_back(std::move(pb));
  }
  return out;
}

}  // namespace loja
