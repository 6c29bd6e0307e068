#pragma once

#include "loja/polynomial.hpp"
#include "loja/sampling.hpp"
#include "loja/snc.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace loja {

/// One chart of one point blow-up of the plane.
///
/// Chart 1 of a node with variables (x, y) is (x, y) = (u v, v); chart 2 is
/// (x, y) = (u, u v). Child variables are named u_<digits>, v_<digits> where
/// the digits are the chart choices along the path ("root/1/2" -> "12").
struct BlowupNode {
  std::string chart_id = "root";
  std::array<std::string, 2> variables;
  /// Parent variables in terms of this chart's variables; empty at the root.
  Substitution transform;
  /// The original polynomial pulled back into this chart.
  Polynomial total_transform;
  std::array<unsigned, 2> exceptional_multiplicities{0, 0};
  bool snc = false;
  bool depth_capped = false;
  unsigned depth = 0;
  /// Root variables expressed in this chart's variables.
  std::vector<Polynomial> composite;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;

  bool is_leaf() const { return children.empty(); }
};

/// Root node for a polynomial in two variables.
BlowupNode make_root_node(const Polynomial& p);

/// Blows up the chart origin of `parent`. Throws DimensionError unless the
/// node has two variables.
std::pair<BlowupNode, BlowupNode> blowup_once(const BlowupNode& parent);
std::pair<BlowupNode, BlowupNode> blowup_once(const Polynomial& p);

struct ChartTree {
  Polynomial root;
  std::vector<BlowupNode> nodes;
  unsigned depth = 0;

  const BlowupNode* find(const std::string& chart_id) const;
  std::vector<std::size_t> leaves() const;
};

enum class ResolveMode {
  Adaptive,  // stop a branch once its chart origin is snc
  Uniform,   // blow up every chart until max_depth
};

struct ResolveOptions {
  unsigned max_depth = 8;
  ResolveMode mode = ResolveMode::Adaptive;
  unsigned workers = 1;
};

struct LeafReport {
  std::size_t node = 0;
  std::string chart_path;
  Exponents monomial;
  Polynomial residual;
  unsigned N = 0;
  /// max(1/2, 1 - 1/N); meaningless when depth_capped.
  Rational theta_bound;
  bool depth_capped = false;
  bool origin_local = true;
};

/// A point (away from the chart origin) of an exceptional axis of a leaf
/// where the residual vanishes, moved to the origin by the translation
/// variable = location - w.
struct ExceptionalPoint {
  std::string leaf_path;
  /// Index of the coordinate that is zero along the exceptional axis.
  std::size_t zero_axis = 0;
  Rational location;
  unsigned root_multiplicity = 1;
  std::string translated_variable;
  Polynomial translated;
  std::vector<Polynomial> composite;
  MonomialFactorization factorization;
  bool snc = false;
  unsigned N = 0;
  Rational theta_bound;

  std::string label() const;
};

/// A residual zero on an exceptional axis that the engine cannot analyze
/// exactly (irrational location) or that stays singular after translation.
struct UnanalyzedPoint {
  std::string leaf_path;
  std::size_t zero_axis = 0;
  double approx_location = 0.0;
  std::string reason;
};

struct ResolutionResult {
  ChartTree tree;
  std::vector<LeafReport> leaves;
  std::vector<ExceptionalPoint> points;
  std::vector<UnanalyzedPoint> unanalyzed;
  /// [1/2, largest bound over non-capped leaves and snc exceptional points].
  std::array<Rational, 2> theta_interval;
  /// False when a leaf is capped or some exceptional point is unanalyzed.
  bool complete = true;
};

/// Throws PreconditionError if p is zero or p(0,0) != 0, DimensionError
/// unless p has two variables.
ResolutionResult resolve(const Polynomial& p, const ResolveOptions& opts = {});

struct PointBound {
  std::string label;
  unsigned N = 0;
  std::array<Rational, 2> theta_interval;
  bool has_constants = false;
  double sigma = 0.0;
  double C0 = 0.0;
  /// sup of the composite map's Jacobian operator norm over the sigma-ball.
  double M = 0.0;
  double transported_constant = 0.0;
  std::string note;
};

struct BoundResult {
  std::array<Rational, 2> covering;
  std::vector<PointBound> points;
  bool complete = true;

  const PointBound* find(const std::string& label) const;
};

/// Per-point bounds with transported constants C0/M, and the covering
/// interval. Throws PreconditionError when every leaf is depth-capped.
BoundResult pull_back_and_bound(const Polynomial& p, const ResolutionResult& result, const SamplingOptions& opts = {},
                                double sigma = 0.5);

}  // namespace loja
