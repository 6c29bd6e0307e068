#include "loja/report_json.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace loja {

namespace {

Json rational_pair(const std::array<Rational, 2>& r) { return Json::array({to_string(r[0]), to_string(r[1])}); }

Json polynomials(const std::vector<Polynomial>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

Json matrix(const RationalMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(to_string(v));
    out.push_back(std::move(r));
  }
  return out;
}

// JSON has no infinities; they become null like NaN.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const InequalityCheckReport& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["exponent"] = to_string(r.exponent);
  j["measured_constant"] = number(r.measured_constant);
  j["predicted_constant"] = r.predicted_constant ? number(*r.predicted_constant) : Json(nullptr);
  j["pass"] = r.pass;
  j["skipped"] = r.skipped;
  j["sample_count"] = r.sample_count;
  j["sigma"] = r.sigma;
  j["delta"] = r.delta;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const MonomialFactorization& mf, const ExponentReport& e, const InequalityCheckReport* check) {
  Json j;
  j["snc"] = mf.snc_at_origin;
  j["exponents"] = mf.exponents;
  j["residual"] = mf.residual.to_string();
  j["theta"] = to_string(e.theta);
  j["N"] = e.total_degree_N;
  j["c"] = e.active_count_c;
  j["n"] = e.max_exponent_n;
  j["optimal"] = e.optimal;
  if (e.has_constants) {
    j["sigma"] = e.ball_radius_sigma;
    j["m"] = e.unit_min_m;
    j["M"] = e.unit_max_M;
    j["C0"] = e.constant_C0;
    j["halvings"] = e.halvings;
  }
  if (check) {
    j["min_ratio"] = number(check->measured_constant);
    j["sample_count"] = check->sample_count;
    j["pass"] = check->pass;
  }
  return j;
}

Json to_json(const ResolutionResult& r) {
  Json j;
  j["root"] = r.tree.root.to_string();
  j["depth"] = r.tree.depth;
  Json nodes = Json::array();
  for (const auto& n : r.tree.nodes) {
    Json nj;
    nj["chart_id"] = n.chart_id;
    nj["variables"] = n.variables;
    nj["total_transform"] = n.total_transform.to_string();
    nj["exceptional_multiplicities"] = n.exceptional_multiplicities;
    nj["snc"] = n.snc;
    nj["leaf"] = n.is_leaf();
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  Json leaves = Json::array();
  for (const auto& l : r.leaves) {
    const auto& node = r.tree.nodes[l.node];
    Json lj;
    lj["chart_path"] = l.chart_path;
    lj["composite_map"] = polynomials(node.composite);
    lj["total_transform"] = node.total_transform.to_string();
    lj["monomial"] = l.monomial;
    lj["residual"] = l.residual.to_string();
    lj["N"] = l.N;
    lj["theta_bound"] = to_string(l.theta_bound);
    lj["origin_local"] = l.origin_local;
    lj["depth_capped"] = l.depth_capped;
    leaves.push_back(std::move(lj));
  }
  j["leaves"] = std::move(leaves);
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json pj;
    pj["label"] = p.label();
    pj["leaf"] = p.leaf_path;
    pj["location"] = to_string(p.location);
    pj["root_multiplicity"] = p.root_multiplicity;
    pj["translated_variable"] = p.translated_variable;
    pj["translated"] = p.translated.to_string();
    pj["composite_map"] = polynomials(p.composite);
    pj["monomial"] = p.factorization.exponents;
    pj["residual"] = p.factorization.residual.to_string();
    pj["snc"] = p.snc;
    pj["N"] = p.N;
    pj["theta_bound"] = to_string(p.theta_bound);
    points.push_back(std::move(pj));
  }
  j["exceptional_points"] = std::move(points);
  Json un = Json::array();
  for (const auto& u : r.unanalyzed) {
    un.push_back({{"leaf", u.leaf_path}, {"zero_axis", u.zero_axis}, {"approx_location", u.approx_location},
                  {"reason", u.reason}});
  }
  j["unanalyzed"] = std::move(un);
  j["theta_interval"] = rational_pair(r.theta_interval);
  j["complete"] = r.complete;
  return j;
}

Json to_json(const BoundResult& b) {
  Json j;
  j["covering"] = rational_pair(b.covering);
  Json pts = Json::array();
  for (const auto& p : b.points) {
    Json pj;
    pj["label"] = p.label;
    pj["N"] = p.N;
    pj["theta_interval"] = rational_pair(p.theta_interval);
    pj["has_constants"] = p.has_constants;
    if (p.has_constants) {
      pj["sigma"] = p.sigma;
      pj["C0"] = p.C0;
      pj["M"] = p.M;
      pj["transported_constant"] = p.transported_constant;
    }
    if (!p.note.empty()) pj["note"] = p.note;
    pts.push_back(std::move(pj));
  }
  j["points"] = std::move(pts);
  j["complete"] = b.complete;
  return j;
}

Json to_json(const MorseBottReport& r) {
  Json j;
  j["kind"] = r.kind == MorseBottKind::MorseBott ? "morse-bott" : "generalized";
  j["K"] = r.critical_subspace;
  j["N"] = r.order_N ? Json(*r.order_N) : Json(nullptr);
  j["zeta"] = r.coercivity_zeta ? number(*r.coercivity_zeta) : Json(nullptr);
  j["certified_zeta"] = r.certified_zeta ? number(*r.certified_zeta) : Json(nullptr);
  j["zeta_lipschitz_certified"] = r.zeta_lipschitz_certified;
  j["theta"] = to_string(r.predicted_theta);
  j["conditions"] = {{"a", r.condition_a}, {"b", r.condition_b}, {"c", r.condition_c}};
  if (!r.condition_b_failure.empty()) {
    j["condition_b_failure"] = {{"derivative", r.condition_b_failure}, {"restriction", r.condition_b_restriction}};
  }
  j["gradient_vanishes_on_K"] = r.gradient_vanishes_on_K;
  j["no_critical_points_off_K"] = r.no_critical_points_off_K;
  j["off_K_critical_samples"] = r.off_K_critical_samples;
  j["hessian"] = matrix(r.hessian);
  j["hessian_kernel"] = matrix(r.hessian_kernel);
  j["kernel_equals_K"] = r.kernel_equals_K;
  j["pass"] = r.verdict;
  return j;
}

Json to_json(const GmbCheckResult& r) {
  Json j = to_json(r.check);
  j["constant_C"] = r.constant_C;
  j["R"] = r.R;
  j["L"] = r.L;
  j["halvings"] = r.halvings;
  j["probe_min_ratio"] = r.probe_min_ratio ? number(*r.probe_min_ratio) : Json(nullptr);
  return j;
}

Json to_json(const ExponentEstimate& e) {
  Json j;
  j["theta_hat"] = e.theta_hat;
  j["band"] = {e.band_low, e.band_high};
  j["radii"] = e.radii;
  Json env = Json::array();
  Json ratios = Json::array();
  for (const auto& p : e.envelope) {
    env.push_back({p.log_abs_delta, p.log_grad_norm});
    ratios.push_back(p.ratio);
  }
  j["envelope"] = std::move(env);
  j["envelope_ratios"] = std::move(ratios);
  Json slopes = Json::array();
  for (double s : e.local_slopes) slopes.push_back(number(s));
  j["local_slopes"] = std::move(slopes);
  j["fit_points"] = e.fit_points;
  j["failure_detected"] = e.failure_detected;
  j["interference_suspected"] = e.interference_suspected;
  j["discarded_samples"] = e.discarded_samples;
  return j;
}

Json to_json(const ConsistencyVerdict& v) {
  return {{"bound", {v.bound_low, v.bound_high}},
          {"slack_low", v.slack_low},
          {"slack_high", v.slack_high},
          {"consistent", v.consistent}};
}

Json to_json(const Trajectory& t) {
  Json j;
  j["samples"] = t.samples.size();
  j["arc_length"] = t.arc_length;
  j["converged"] = t.converged;
  j["stop_reason"] = to_string(t.stop_reason);
  j["final_time"] = t.samples.empty() ? 0.0 : t.samples.back().t;
  j["final_point"] = t.samples.empty() ? Json(nullptr) : Json(t.samples.back().x);
  j["final_energy"] = t.samples.empty() ? Json(nullptr) : Json(t.samples.back().energy);
  j["limit_point"] = t.limit_point ? Json(*t.limit_point) : Json(nullptr);
  j["snap_distance"] = t.snap_distance ? Json(*t.snap_distance) : Json(nullptr);
  j["rejected_steps"] = t.rejected_steps;
  return j;
}

Json to_json(const LengthBoundCheck& c) {
  return {{"arc_length", c.arc_length}, {"bound", c.bound}, {"margin", c.margin}, {"pass", c.pass}};
}

Json to_json(const ArcLengthIdentityCheck& c) {
  return {{"interior_samples", c.interior_samples},
          {"max_speed_error", c.max_speed_error},
          {"max_q_relative_error", c.max_q_relative_error},
          {"pass", c.pass}};
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << std::setprecision(17) << "t";
  const std::size_t d = t.samples.empty() ? 0 : t.samples.front().x.size();
  for (std::size_t i = 1; i <= d; ++i) out << ",x_" << i;
  out << ",E,grad_norm,arc_length\n";
  for (const auto& s : t.samples) {
    out << s.t;
    for (double v : s.x) out << ',' << v;
    out << ',' << s.energy << ',' << s.grad_norm << ',' << s.arc_length << '\n';
  }
  return out.str();
}

}  // namespace loja
