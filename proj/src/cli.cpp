#include "loja/cli.hpp"

#include "loja/errors.hpp"
#include "loja/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace loja {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Section {
  Json json;
  bool pass = false;
};

SamplingOptions sampling(const RunConfig& c, std::size_t default_samples = 10000) {
  return {c.samples.value_or(default_samples), c.seed, c.workers};
}

std::unique_ptr<ScalarField> load_field(const RunConfig& c) {
  if (is_builtin(c.polynomial_text)) return make_builtin(c.polynomial_text);
  return std::make_unique<PolynomialField>(parse(c.polynomial_text, c.variables));
}

Polynomial load_polynomial(const RunConfig& c) {
  if (is_builtin(c.polynomial_text)) {
    throw PreconditionError("'" + c.polynomial_text + "' is a builtin function; this command needs a polynomial");
  }
  return parse(c.polynomial_text, c.variables);
}

std::vector<double> point_or_origin(const RunConfig& c, std::size_t dim) {
  if (c.point.empty()) return std::vector<double>(dim, 0.0);
  if (c.point.size() != dim) throw DimensionError("--point has " + std::to_string(c.point.size()) +
                                                  " coordinates, the function has " + std::to_string(dim));
  return c.point;
}

CriticalSetDescriptor parse_crit(const std::string& text, std::size_t dim) {
  if (text == "origin" || text.empty()) return CriticalSetDescriptor::subspace(dim, {});
  std::vector<std::vector<std::size_t>> sets;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<std::size_t> free;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        unsigned long v = std::stoul(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        free.push_back(v);
      } catch (const std::logic_error&) {
        throw PreconditionError("bad --crit entry '" + item + "'");
      }
    }
    sets.push_back(std::move(free));
  }
  return CriticalSetDescriptor::subspaces(dim, std::move(sets));
}

Json config_json(const RunConfig& c) {
  // Worker count is left out: reports must not depend on it.
  Json j;
  j["command"] = c.command;
  j["input"] = c.polynomial_text;
  j["variables"] = c.variables;
  j["point"] = c.point;
  j["sigma"] = c.sigma ? Json(*c.sigma) : Json(nullptr);
  j["delta"] = c.delta;
  j["tol"] = c.tol;
  j["t_max"] = c.t_max;
  j["samples"] = c.samples ? Json(*c.samples) : Json(nullptr);
  j["seed"] = c.seed;
  j["max_depth"] = c.max_depth;
  j["mode"] = c.uniform ? "uniform" : "adaptive";
  j["crit"] = c.crit;
  j["theta"] = c.theta ? Json(*c.theta) : Json(nullptr);
  j["constant"] = c.constant ? Json(*c.constant) : Json(nullptr);
  j["order"] = c.order ? Json(*c.order) : Json(nullptr);
  j["radii"] = {{"r_min", c.r_min}, {"r_max", c.r_max}, {"count", c.radius_count}};
  j["bound_from"] = c.bound_from;
  j["format"] = c.format;
  j["output_path"] = c.output_path;
  return j;
}

Section analyze_polynomial(const Polynomial& p, const RunConfig& c) {
  auto mf = detect_snc(p);
  Json base;
  base["snc"] = mf.snc_at_origin;
  base["exponents"] = mf.exponents;
  base["residual"] = mf.residual.to_string();
  if (!mf.snc_at_origin) {
    base["note"] = "not in normal-crossings form at the origin; try resolve";
    base["pass"] = false;
    return {base, false};
  }
  ExponentReport e;
  try {
    e = exponent_from_snc(mf);
    e = compute_constants(mf, c.sigma.value_or(1.0), sampling(c));
  } catch (const std::exception& ex) {
    base["note"] = ex.what();
    base["pass"] = false;
    return {base, false};
  }
  auto check = verify_gradient_inequality(p, e, sampling(c));
  Json j = to_json(mf, e, &check);
  j["check"] = to_json(check);
  return {j, check.pass};
}

struct ResolveSection {
  Section section;
  std::optional<std::array<Rational, 2>> interval;
  ResolutionResult result;
};

ResolveSection resolve_polynomial(const Polynomial& p, const RunConfig& c, ResolveMode mode) {
  ResolveOptions ro;
  ro.max_depth = c.max_depth;
  ro.mode = mode;
  ro.workers = c.workers;
  ResolveSection out;
  out.result = resolve(p, ro);
  Json j = to_json(out.result);
  j["mode"] = mode == ResolveMode::Uniform ? "uniform" : "adaptive";
  try {
    j["bounds"] = to_json(pull_back_and_bound(p, out.result, sampling(c), c.sigma.value_or(0.5)));
  } catch (const PreconditionError& ex) {
    j["bounds"] = nullptr;
    j["bounds_note"] = ex.what();
  }
  out.section.pass = out.result.complete;
  j["pass"] = out.section.pass;
  out.section.json = std::move(j);
  if (out.result.complete) out.interval = out.result.theta_interval;
  return out;
}

std::optional<std::array<Rational, 2>> read_bound(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error(path + " is not valid JSON");
  const Json* node = nullptr;
  if (j.contains("theta_interval")) {
    node = &j["theta_interval"];
  } else if (j.contains("resolution") && j["resolution"].contains("theta_interval")) {
    node = &j["resolution"]["theta_interval"];
  }
  if (!node || !node->is_array() || node->size() != 2) throw std::runtime_error(path + " has no theta_interval");
  return std::array<Rational, 2>{parse_rational((*node)[0].get<std::string>()),
                                 parse_rational((*node)[1].get<std::string>())};
}

Section estimate_section(const ScalarField& E, const RunConfig& c, std::span<const double> x_star,
                         const std::optional<std::array<Rational, 2>>& bound, std::string* csv) {
  EstimateOptions eo;
  eo.r_min = c.r_min;
  eo.r_max = c.r_max;
  eo.radius_count = c.radius_count;
  eo.samples_per_radius = c.samples.value_or(400);
  eo.seed = c.seed;
  eo.workers = c.workers;
  auto est = estimate_theta(E, x_star, eo);
  Json j = to_json(est);
  bool pass = !est.failure_detected;
  if (bound) {
    auto v = compare_with_resolution_bound(est, (*bound)[0], (*bound)[1]);
    j["consistency"] = to_json(v);
    pass = pass && v.consistent;
  }
  j["pass"] = pass;
  if (csv) *csv = envelope_csv(est);
  return {j, pass};
}

// Smallest ||grad E|| / (E - E_final)^theta along the path.
double trajectory_constant(const Trajectory& t, double theta) {
  const double ef = t.samples.back().energy;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : t.samples) {
    double de = s.energy - ef;
    if (!(de > 0.0) || !(s.grad_norm > 0.0)) continue;
    best = std::min(best, std::exp(std::log(s.grad_norm) - theta * std::log(de)));
  }
  return best;
}

std::optional<Rational> flow_theta(const RunConfig& c, const Polynomial* p, std::string& source) {
  if (c.theta) {
    source = "given";
    return parse_rational(*c.theta);
  }
  if (!p) return std::nullopt;
  auto mf = detect_snc(*p);
  if (mf.snc_at_origin) {
    try {
      source = "normal-crossings";
      return exponent_from_snc(mf).theta;
    } catch (const PreconditionError&) {
    }
  }
  if (p->dimension() == 2 && p->constant_term() == 0) {
    ResolveOptions ro;
    ro.max_depth = c.max_depth;
    ro.workers = c.workers;
    auto r = resolve(*p, ro);
    if (r.complete) {
      source = "resolution upper bound";
      return r.theta_interval[1];
    }
  }
  return std::nullopt;
}

Section flow_section(const ScalarField& E, const RunConfig& c, std::string* csv) {
  if (c.point.empty()) throw PreconditionError("flow needs a start point (--point)");
  auto x0 = point_or_origin(c, E.dimension());
  FlowOptions fo;
  fo.tol = c.tol;
  fo.t_max = c.t_max;
  fo.sigma = c.sigma.value_or(1.0);
  fo.critical_set = parse_crit(c.crit, E.dimension());
  auto traj = integrate_flow(E, x0, fo);
  if (csv) *csv = trajectory_csv(traj);

  Json j;
  j["trajectory"] = to_json(traj);
  j["critical_set"] = fo.critical_set->describe();
  bool pass = true;
  bool monotone = energy_monotone(traj);
  j["energy_monotone"] = monotone;
  pass = pass && monotone;
  auto ids = check_arc_length_identities(traj);
  j["arc_length_identities"] = to_json(ids);
  // Too few interior samples is not evidence against the identities.
  if (ids.interior_samples > 0) pass = pass && ids.pass;

  std::string theta_source;
  auto theta = flow_theta(c, E.polynomial(), theta_source);
  j["theta"] = theta ? Json(to_string(*theta)) : Json(nullptr);
  if (theta) j["theta_source"] = theta_source;
  if (theta && traj.converged && traj.samples.size() > 1) {
    double C = c.constant ? *c.constant : trajectory_constant(traj, to_double(*theta));
    j["constant"] = number_or_null(C);
    j["constant_source"] = c.constant ? "given" : "trajectory minimum";
    if (std::isfinite(C) && C > 0.0) {
      auto lb = verify_length_bound(traj, *theta, C);
      j["length_bound"] = to_json(lb);
      pass = pass && lb.pass;
    } else {
      j["length_bound"] = nullptr;
    }
  } else {
    j["length_bound"] = nullptr;
    j["length_bound_note"] = theta ? "trajectory did not converge" : "no exponent available (pass --theta)";
  }

  if (theta && E.polynomial() && *theta < 1 && *theta >= Rational(1, 2)) {
    DistanceCheckOptions d;
    d.sigma = fo.sigma;
    d.delta = c.delta;
    d.sampling = sampling(c);
    Json checks = Json::array();
    for (const auto& r : verify_distance_inequalities(*E.polynomial(), *fo.critical_set, *theta, d)) {
      checks.push_back(to_json(r));
      if (!r.skipped) pass = pass && r.pass;
    }
    j["distance_checks"] = std::move(checks);
  }
  j["pass"] = pass;
  return {j, pass};
}

struct Golden {
  const char* chart;
  const char* reference;
  std::array<const char*, 2> names;
};

constexpr Golden kCuspGolden[] = {
    {"root/1", "u^2*v^2 - v^3", {"u", "v"}},
    {"root/2", "a^2 - a^3*b^3", {"a", "b"}},
    {"root/1/2", "r^4*s^2 - r^3*s^3", {"r", "s"}},
    {"root/1/2/2", "alpha^6*beta^2 - alpha^6*beta^3", {"alpha", "beta"}},
    {"root/2/1", "c^2*d^2 - c^3*d^6", {"c", "d"}},
    {"root/2/1/1", "g^2*h^4 - g^3*h^9", {"g", "h"}},
};

Polynomial to_chart_names(const char* text, const std::array<const char*, 2>& names, const BlowupNode& node) {
  auto p = parse(text, {names[0], names[1]});
  return p.renamed({{names[0], node.variables[0]}, {names[1], node.variables[1]}});
}

RunResult demo_cusp(const RunConfig& c) {
  RunResult out;
  const auto p = parse("x^2 - y^3");
  RunConfig rc = c;
  rc.max_depth = 3;
  auto rs = resolve_polynomial(p, rc, ResolveMode::Uniform);
  const auto& tree = rs.result.tree;
  bool pass = rs.result.complete;

  Json renaming = Json::array();
  Json golden = Json::array();
  for (const auto& g : kCuspGolden) {
    const BlowupNode* node = tree.find(g.chart);
    Json gj;
    gj["chart"] = g.chart;
    gj["reference"] = g.reference;
    if (!node) {
      gj["match"] = false;
      pass = false;
      golden.push_back(std::move(gj));
      continue;
    }
    renaming.push_back({{"chart", g.chart},
                        {g.names[0], node->variables[0]},
                        {g.names[1], node->variables[1]}});
    auto expected = to_chart_names(g.reference, g.names, *node);
    bool match = (expected - node->total_transform).is_zero();
    gj["expected"] = expected.to_string();
    gj["actual"] = node->total_transform.to_string();
    gj["match"] = match;
    pass = pass && match;
    golden.push_back(std::move(gj));
  }

  Json leaf_check;
  const LeafReport* leaf = nullptr;
  for (const auto& l : rs.result.leaves) {
    if (l.chart_path == "root/1/2/2") leaf = &l;
  }
  if (leaf) {
    const auto& node = tree.nodes[leaf->node];
    auto residual = to_chart_names("1 - beta", {"alpha", "beta"}, node);
    bool ok = leaf->monomial == Exponents{6, 2} && (leaf->residual - residual).is_zero() && leaf->N == 8 &&
              leaf->theta_bound == Rational(7, 8);
    leaf_check = {{"chart", leaf->chart_path},
                  {"monomial", leaf->monomial},
                  {"residual", leaf->residual.to_string()},
                  {"N", leaf->N},
                  {"theta_bound", to_string(leaf->theta_bound)},
                  {"expected", {{"monomial", {6, 2}}, {"residual", residual.to_string()}, {"N", 8}, {"theta_bound", "7/8"}}},
                  {"match", ok}};
    pass = pass && ok;
  } else {
    leaf_check = {{"chart", "root/1/2/2"}, {"match", false}};
    pass = false;
  }

  Json point_check;
  const ExceptionalPoint* point = nullptr;
  for (const auto& pt : rs.result.points) {
    if (pt.leaf_path == "root/1/2/2" && pt.location == 1) point = &pt;
  }
  if (point) {
    bool ok = point->snc && point->N == 7 && point->theta_bound == Rational(6, 7);
    point_check = {{"label", point->label()},
                   {"translated", point->translated.to_string()},
                   {"monomial", point->factorization.exponents},
                   {"N", point->N},
                   {"theta_bound", to_string(point->theta_bound)},
                   {"expected", {{"N", 7}, {"theta_bound", "6/7"}}},
                   {"match", ok}};
    pass = pass && ok;
  } else {
    point_check = {{"label", "root/1/2/2 at beta = 1"}, {"match", false}};
    pass = false;
  }

  PolynomialField field(p);
  std::vector<double> origin{0.0, 0.0};
  auto est = estimate_section(field, c, origin, std::array<Rational, 2>{Rational(1, 2), Rational(7, 8)},
                              &out.envelope_csv);
  pass = pass && est.pass;

  Json j;
  j["renaming"] = std::move(renaming);
  j["golden"] = std::move(golden);
  j["leaf"] = std::move(leaf_check);
  j["translated_point"] = std::move(point_check);
  j["leaf_interval"] = {"1/2", "7/8"};
  j["translated_interval"] = {"1/2", "6/7"};
  j["covering_interval"] = rs.section.json["theta_interval"];
  j["covering_note"] =
      "covering interval takes the largest bound over every leaf and exceptional point of the tower";
  j["resolution"] = rs.section.json;
  j["estimate"] = est.json;
  j["pass"] = pass;
  out.report = std::move(j);
  out.exit_code = pass ? kExitPass : kExitCheckFailure;
  return out;
}

Json summary_of(const std::string& command, const Json& r) {
  Json s;
  s["command"] = command;
  s["pass"] = r.value("pass", false);
  auto copy = [&](const char* key, const Json& from, const char* as) {
    if (from.contains(key)) s[as] = from[key];
  };
  if (command == "analyze") {
    const Json& a = r.contains("analysis") ? r["analysis"] : r;
    copy("theta", a, "theta");
    copy("N", a, "N");
    copy("optimal", a, "optimal");
    copy("C0", a, "C0");
    copy("min_ratio", a, "min_ratio");
    copy("note", a, "note");
    if (r.contains("estimate")) copy("theta_hat", r["estimate"], "theta_hat");
    if (r.contains("estimate")) copy("failure_detected", r["estimate"], "failure_detected");
  } else if (command == "resolve") {
    copy("theta_interval", r, "theta_interval");
    copy("complete", r, "complete");
    if (r.contains("leaves")) s["leaves"] = r["leaves"].size();
  } else if (command == "flow") {
    if (r.contains("trajectory")) {
      copy("arc_length", r["trajectory"], "arc_length");
      copy("stop_reason", r["trajectory"], "stop_reason");
      copy("limit_point", r["trajectory"], "limit_point");
    }
    if (r.contains("length_bound") && !r["length_bound"].is_null()) copy("bound", r["length_bound"], "length_bound");
  } else if (command == "estimate") {
    copy("theta_hat", r, "theta_hat");
    copy("band", r, "band");
    copy("failure_detected", r, "failure_detected");
  } else if (command == "verify") {
    for (const char* k : {"analysis", "resolution", "morse_bott", "estimate", "flow"}) {
      if (r.contains(k) && r[k].contains("pass")) s[std::string(k) + "_pass"] = r[k]["pass"];
    }
  } else if (command == "demo-cusp") {
    copy("covering_interval", r, "covering_interval");
    copy("translated_interval", r, "translated_interval");
    if (r.contains("estimate")) copy("theta_hat", r["estimate"], "theta_hat");
  }
  return s;
}

}  // namespace

RunResult run(const RunConfig& c) {
  RunResult out;
  Json body;
  bool pass = false;
  const std::string& cmd = c.command;

  if (cmd == "demo-cusp") {
    out = demo_cusp(c);
    body = std::move(out.report);
    pass = out.exit_code == kExitPass;
  } else if (cmd == "analyze") {
    if (is_builtin(c.polynomial_text)) {
      auto field = make_builtin(c.polynomial_text);
      auto x = point_or_origin(c, field->dimension());
      auto est = estimate_section(*field, c, x, std::nullopt, &out.envelope_csv);
      body["builtin"] = true;
      body["estimate"] = est.json;
      body["note"] = "non-polynomial input: the gradient inequality is tested empirically";
      pass = est.pass;
    } else {
      auto a = analyze_polynomial(load_polynomial(c), c);
      body = std::move(a.json);
      pass = a.pass;
    }
  } else if (cmd == "resolve") {
    auto rs = resolve_polynomial(load_polynomial(c), c, c.uniform ? ResolveMode::Uniform : ResolveMode::Adaptive);
    body = std::move(rs.section.json);
    pass = rs.section.pass;
  } else if (cmd == "flow") {
    auto field = load_field(c);
    auto f = flow_section(*field, c, &out.trajectory_csv);
    body = std::move(f.json);
    pass = f.pass;
  } else if (cmd == "estimate") {
    auto field = load_field(c);
    auto x = point_or_origin(c, field->dimension());
    std::optional<std::array<Rational, 2>> bound;
    if (!c.bound_from.empty()) {
      bound = read_bound(c.bound_from);
    } else if (const Polynomial* p = field->polynomial();
               p && p->dimension() == 2 && c.point.empty() && p->constant_term() == 0) {
      RunConfig quiet = c;
      bound = resolve_polynomial(*p, quiet, ResolveMode::Adaptive).interval;
    }
    auto e = estimate_section(*field, c, x, bound, &out.envelope_csv);
    body = std::move(e.json);
    body["bound_source"] = bound ? (c.bound_from.empty() ? "resolve" : "file") : "none";
    pass = e.pass;
  } else if (cmd == "verify") {
    auto field = load_field(c);
    pass = true;
    const Polynomial* p = field->polynomial();
    std::optional<std::array<Rational, 2>> bound;
    if (p) {
      auto a = analyze_polynomial(*p, c);
      body["analysis"] = a.json;
      if (a.json.value("snc", false)) pass = pass && a.pass;
      if (p->dimension() == 2 && p->constant_term() == 0) {
        auto rs = resolve_polynomial(*p, c, c.uniform ? ResolveMode::Uniform : ResolveMode::Adaptive);
        body["resolution"] = rs.section.json;
        bound = rs.interval;
        pass = pass && rs.section.pass;
      }
      auto crit = parse_crit(c.crit, p->dimension());
      if (crit.subspace_list().size() == 1 && p->constant_term() == 0) {
        CriticalSetOptions co;
        co.seed = c.seed;
        co.workers = c.workers;
        const auto& K = crit.subspace_list().front();
        try {
          auto mb = c.order ? check_generalized_morse_bott(*p, K, *c.order, co) : check_morse_bott(*p, K, co);
          Json mj = to_json(mb);
          mj["informational"] = true;
          if (c.order && mb.verdict) {
            GmbCheckOptions go;
            go.samples = c.samples.value_or(10000);
            go.seed = c.seed;
            go.workers = c.workers;
            auto g = verify_gmb_gradient_inequality(*p, mb, go);
            mj["gradient_check"] = to_json(g);
            pass = pass && g.check.pass;
          }
          body["morse_bott"] = std::move(mj);
        } catch (const PreconditionError& ex) {
          body["morse_bott"] = {{"note", ex.what()}};
        }
      }
    }
    auto x = point_or_origin(c, field->dimension());
    if (c.point.empty() || !p) {
      auto e = estimate_section(*field, c, std::vector<double>(field->dimension(), 0.0), bound, &out.envelope_csv);
      body["estimate"] = e.json;
      pass = pass && e.pass;
    }
    if (!c.point.empty()) {
      auto f = flow_section(*field, c, &out.trajectory_csv);
      body["flow"] = f.json;
      pass = pass && f.pass;
    }
    body["pass"] = pass;
  } else {
    throw PreconditionError("unknown command '" + cmd + "'");
  }

  body["pass"] = pass;
  Json report;
  report["schema"] = kSchema;
  report["config"] = config_json(c);
  report["summary"] = summary_of(cmd, body);
  for (auto& [k, v] : body.items()) report[k] = v;
  out.report = std::move(report);
  out.exit_code = pass ? kExitPass : kExitCheckFailure;
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string human(const Json& report) {
  std::ostringstream out;
  for (const auto& [k, v] : report["summary"].items()) {
    out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  return out.str();
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"loja-lab: Lojasiewicz exponents, blow-ups and gradient flows for polynomials"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  double sigma = 0.0;
  std::size_t samples = 0;
  std::string theta;
  double constant = 0.0;
  unsigned order = 0;
  std::string vars;

  auto* o_sigma = app.add_option("--sigma", sigma, "Ball radius (analyze 1, resolve 0.5, flow 1)");
  app.add_option("--delta", c.delta, "Sampling radius for distance checks")->capture_default_str();
  app.add_option("--tol", c.tol, "Flow stops when ||grad E|| < tol")->capture_default_str();
  app.add_option("--t-max", c.t_max, "Flow time limit")->capture_default_str();
  auto* o_samples = app.add_option("--samples", samples, "Sample count (estimate: per radius)");
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--max-depth", c.max_depth, "Blow-up depth limit")->capture_default_str();
  app.add_flag("--uniform", c.uniform, "Blow up every chart to --max-depth");
  app.add_option("--output-path", c.output_path, "Directory for report.json and CSV files");
  app.add_option("--format", c.format, "Standard output format")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
  c.workers = default_workers();
  app.add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--point", c.point, "Start point (flow) or base point (estimate), comma separated")
      ->delimiter(',');
  app.add_option("--vars", vars, "Variable order, comma separated");
  app.add_option("--crit", c.crit, "Critical set: origin, or subspaces like 0;1")->capture_default_str();
  auto* o_theta = app.add_option("--theta", theta, "Exponent for flow checks, e.g. 3/4");
  auto* o_constant = app.add_option("--constant", constant, "Gradient-inequality constant for the length bound");
  auto* o_order = app.add_option("--order", order, "Generalized Morse-Bott order N for verify");
  app.add_option("--r-min", c.r_min, "Smallest estimator radius")->capture_default_str();
  app.add_option("--r-max", c.r_max, "Largest estimator radius")->capture_default_str();
  app.add_option("--radii", c.radius_count, "Number of estimator radii")->capture_default_str();
  app.add_option("--bound-from", c.bound_from, "report.json of an earlier resolve run");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"analyze", "Normal-crossings exponent, constants and gradient-inequality check"},
      {"resolve", "Blow-up tree and exponent interval for a plane polynomial"},
      {"flow", "Gradient-flow trajectory, length bound and distance checks"},
      {"estimate", "Empirical exponent from sphere sampling"},
      {"verify", "Every applicable check on one input"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", c.polynomial_text, "Polynomial, builtin id (haraux, delellis) or - for stdin")
        ->required();
  }
  app.add_subcommand("demo-cusp", "Worked example x^2 - y^3 with golden comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (o_sigma->count()) c.sigma = sigma;
  if (o_samples->count()) c.samples = samples;
  if (o_theta->count()) c.theta = theta;
  if (o_constant->count()) c.constant = constant;
  if (o_order->count()) c.order = order;
  if (!vars.empty()) {
    std::stringstream vs(vars);
    std::string v;
    while (std::getline(vs, v, ',')) {
      if (!trim(v).empty()) c.variables.push_back(trim(v));
    }
  }

  try {
    if (c.polynomial_text == "-") {
      std::ostringstream buf;
      buf << in.rdbuf();
      c.polynomial_text = trim(buf.str());
      if (c.polynomial_text.empty()) throw PreconditionError("empty input on stdin");
    }
    if (c.format == "csv" && c.command != "flow" && c.command != "estimate") {
      err << "error: csv output is available for flow and estimate\n";
      return kExitUsage;
    }
    auto result = run(c);
    if (!c.output_path.empty()) {
      std::filesystem::path dir(c.output_path);
      std::filesystem::create_directories(dir);
      write_file(dir / "report.json", result.report.dump(2) + "\n");
      if (!result.trajectory_csv.empty()) write_file(dir / "trajectory.csv", result.trajectory_csv);
      if (!result.envelope_csv.empty()) write_file(dir / "envelope.csv", result.envelope_csv);
    }
    if (c.format == "json") {
      out << result.report.dump(2) << '\n';
    } else if (c.format == "csv") {
      out << (c.command == "flow" ? result.trajectory_csv : result.envelope_csv);
    } else {
      out << human(result.report);
    }
    return result.exit_code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace loja
