#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bkc/suite.hpp"

namespace bkc {

inline constexpr std::uint64_t kDefaultSeed = 0;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

/// Bad arguments or unparsable input; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace cli {

/// BKC_SEED if set, otherwise the default.
inline std::uint64_t seed_from_env() {
  const char* s = std::getenv("BKC_SEED");
  if (!s || !*s) return kDefaultSeed;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("BKC_SEED is not a non-negative integer: ") + s);
  }
}

template <class F>
auto input(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const ParseError& err) {
    throw UsageError(what + ": " + err.what());
  } catch (const std::invalid_argument& err) {
    throw UsageError(what + ": " + err.what());
  }
}

inline Domain parse_domain(const std::string& text) {
  if (text == "plane") return Domain::plane();
  if (text == "right") return Domain::right_half();
  if (text == "left") return Domain::left_half();
  if (text == "upper") return Domain::upper_half();
  if (text.rfind("strip:", 0) == 0) {
    const auto colon = text.find(':', 6);
    if (colon != std::string::npos) return Domain::strip(std::stod(text.substr(6, colon - 6)), std::stod(text.substr(colon + 1)));
  }
  throw std::invalid_argument("unknown domain '" + text + "' (plane, right, left, upper, strip:lo:hi)");
}

inline json point_json(Point p) { return json{{"x", p.x}, {"y", p.y}}; }

inline json envelope(const std::string& command, std::uint64_t seed) {
  return json{{"schema", kSchemaVersion}, {"command", command}, {"seed", seed}};
}

/// Aligned "key  value" lines for the top-level fields of a JSON object.
inline std::string as_text(const json& j) {
  std::size_t width = 0;
  for (auto it = j.begin(); it != j.end(); ++it) width = std::max(width, it.key().size());
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "schema") continue;
    os << std::left << std::setw(static_cast<int>(width) + 2) << it.key();
    if (it.value().is_string()) os << it.value().get<std::string>();
    else os << it.value().dump();
    os << "\n";
  }
  return os.str();
}

inline std::string reports_text(const std::vector<VerificationReport>& reports) {
  std::size_t width = 0;
  for (const auto& r : reports) width = std::max(width, r.check_name.size());
  std::ostringstream os;
  int failed = 0;
  for (const auto& r : reports) {
    if (!r.passed()) ++failed;
    std::string status = to_string(r.status);
    for (auto& c : status) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    os << std::left << std::setw(9) << status << std::setw(static_cast<int>(width) + 2) << r.check_name
       << "max_error=" << fmt(r.max_error) << "  tol=" << fmt(r.tolerance) << "\n";
    for (const auto& d : r.details) {
      if (r.passed() && d.description.rfind("note: ", 0) != 0 && r.status != Status::Skipped) continue;
      os << "         - " << d.description;
      if (!d.where.empty()) os << " @ " << d.where;
      if (!d.observed.empty()) os << ": " << d.observed;
      if (!d.expected.empty()) os << " (expected " << d.expected << ")";
      os << "\n";
    }
  }
  os << reports.size() << " reports, " << failed << " not passing\n";
  return os.str();
}

}  // namespace cli

/// Runs one command line (without the program name).
inline CliResult dispatch(const std::vector<std::string>& args) {
  using namespace cli;
  CLI::App app{"Calculus of complex b^k-structures on the plane: checks, catalogs, flows and norms.", "bkc"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON instead of aligned text")->configurable(false);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string k_list = "1,2,3";
  auto* verify = app.add_subcommand("verify-all", "Run the full verification suite");
  verify->add_option("--k", k_list, "Comma-separated k values")->capture_default_str();

  int k = 1;
  std::string map_text, vf_text, target_text, inverse_text, domain_text = "plane";
  double tol = kCrossTol, nv = kNonvanishing;
  auto* check = app.add_subcommand("check-aut", "Test whether a map is an automorphism of the b^k-structure");
  check->add_option("--k", k, "Order of tangency")->required();
  check->add_option("--map", map_text, "Map as \"(u, v)\"")->required();
  check->add_option("--tol", tol, "Cross-determinant tolerance")->capture_default_str();
  check->add_option("--nv", nv, "Lower bound on |lambda| (and 1/nv upper bound)")->capture_default_str();

  auto* cat = app.add_subcommand("catalog", "List the automorphism families for k");
  cat->add_option("--k", k, "Order of tangency")->required();

  std::string family;
  double t = 0.0;
  std::vector<double> y0s{0.0, 1.0};
  std::string expect;
  auto* probe = app.add_subcommand("probe-extend", "Tabulate a map as x -> 0+ and classify extendability");
  probe->add_option("--k", k, "Order of tangency")->required();
  probe->add_option("--family", family, "Catalog family name, or elliptic (k >= 2)")->required();
  probe->add_option("--t", t, "Family parameter")->required();
  probe->add_option("--y0", y0s, "Heights at which to probe")->delimiter(',')->capture_default_str();
  probe->add_option("--expect", expect, "Fail unless every probe is classified so")
      ->check(CLI::IsMember({"extends", "diverges"}));

  std::string p0_text, trace_path;
  double h = 1e-3;
  auto* flow = app.add_subcommand("flow", "Integrate a real vector field with fixed-step RK4");
  flow->set_help_flag("--help", "Print this help message and exit");
  flow->add_option("--vf", vf_text, "Field as \"(a, b)\"")->required();
  flow->add_option("--p0", p0_text, "Start point x,y")->required();
  flow->add_option("--t", t, "Time")->required();
  flow->add_option("--h", h, "Step size")->capture_default_str();
  flow->add_option("--domain", domain_text, "plane, right, left, upper or strip:lo:hi")->capture_default_str();
  flow->add_option("--trace", trace_path, "Write t,x,y rows to this CSV file");

  std::string f_text, grid_text;
  double residual_tol = 1e-10;
  auto* residual = app.add_subcommand("residual", "Sup of |x^k f_x + i f_y| over a grid");
  residual->add_option("--k", k, "Order of tangency")->required();
  residual->add_option("--f", f_text, "Function of x, y")->required();
  residual->add_option("--grid", grid_text, "xmin:xmax:step,ymin:ymax:step")->required();
  residual->add_option("--tol", residual_tol, "Pass threshold for the sup")->capture_default_str();

  std::string entire_text, bfunc_text;
  int nodes = 64;
  auto* norm_cmd = app.add_subcommand("norm", "Squared b-Segal-Bargmann norm by Gauss-Hermite quadrature");
  auto* entire_opt = norm_cmd->add_option("--entire", entire_text, "Entire function of w (or x, y)");
  auto* bfunc_opt = norm_cmd->add_option("--bfunc", bfunc_text, "b-holomorphic function of x, y");
  entire_opt->excludes(bfunc_opt);
  norm_cmd->add_option("--nodes", nodes, "Nodes per axis; 2N is used as the convergence check")->capture_default_str();

  auto* push = app.add_subcommand("pushforward", "Push a vector field forward along a map");
  push->add_option("--map", map_text, "Map as \"(u, v)\"")->required();
  push->add_option("--vf", vf_text, "Field as \"(a, b)\"")->required();
  push->add_option("--target", target_text, "Field expected as the pushforward");
  push->add_option("--inverse", inverse_text, "Inverse map, for the symbolic pushforward");
  push->add_option("--domain", domain_text, "Domain of the map")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  CliResult res;
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    res.out = sub->help();
    return res;
  } catch (const CLI::CallForAllHelp&) {
    res.out = app.help("", CLI::AppFormatMode::All);
    return res;
  } catch (const CLI::ParseError& err) {
    res.code = 2;
    res.err = std::string("error: ") + err.what() + "\n";
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    res.err += sub->help();
    return res;
  }

  const auto emit = [&](const json& j, const std::string& text) {
    res.out = as_json ? j.dump(2) + "\n" : text;
  };

  try {
    const std::uint64_t seed = seed_from_env();
    if (verify->parsed()) {
      std::vector<int> ks;
      std::stringstream ss(k_list);
      for (std::string item; std::getline(ss, item, ',');) {
        const int v = input("--k", [&] { return std::stoi(item); });
        if (v < 1) throw UsageError("--k: values must be >= 1");
        ks.push_back(v);
      }
      if (ks.empty()) throw UsageError("--k: no values");
      const auto reports = run_suite(ks, seed);
      bool ok = true;
      for (const auto& r : reports) ok = ok && r.passed();
      json j = envelope("verify-all", seed);
      j["k"] = ks;
      j["reports"] = reports;
      j["passed"] = ok;
      emit(j, cli::reports_text(reports));
      res.code = ok ? 0 : 1;
    } else if (check->parsed()) {
      if (k < 0) throw UsageError("--k must be >= 0");
      const PlanarMap m = input("--map", [&] { return parse_map(map_text, ParseOptions{.k = k, .allow_w = false}); });
      const auto v = is_bk_automorphism(m, k, bk_sampler(seed), tol, nv);
      json j = envelope("check-aut", seed);
      j["k"] = k;
      j["map"] = m.to_string();
      j["tol"] = tol;
      j["nv"] = nv;
      j["verdict"] = v;
      json text = j;
      text.erase("verdict");
      text["holds"] = v.holds;
      text["reason"] = v.reason;
      text["max_cross"] = v.max_cross;
      text["abs_lambda_range"] = json::array({v.min_abs_lambda, v.max_abs_lambda});
      if (!v.lambda_samples.empty()) text["lambda_first_sample"] = fmt(v.lambda_samples.front().lambda);
      emit(j, as_text(text));
      res.code = v.holds ? 0 : 1;
    } else if (cat->parsed()) {
      const Catalog c = input("--k", [&] { return catalog(k); });
      json fams = json::array();
      std::string text;
      for (const auto& f : c.families) {
        fams.push_back({{"name", f.name}, {"formula", f.formula()}, {"target", f.target_counterpart.to_string()}});
        text += f.name + "  " + f.formula() + "\n";
      }
      const HalfPlaneIso iso = halfplane_iso(k);
      json j = envelope("catalog", seed);
      j["k"] = k;
      j["families"] = fams;
      j["flip"] = c.flip.to_string();
      j["halfplane_map"] = iso.map.to_string();
      j["halfplane_target"] = iso.target.name();
      text += "flip  " + c.flip.to_string() + "\n";
      text += "half-plane map  " + iso.map.to_string() + " onto " + iso.target.name() + "\n";
      emit(j, text);
    } else if (probe->parsed()) {
      PointMap m;
      std::string formula;
      if (family == "elliptic") {
        if (k < 2) throw UsageError("--family elliptic needs k >= 2");
        m = elliptic_pullback(k, t);
        formula = "elliptic pullback";
      } else {
        const Catalog c = input("--k", [&] { return catalog(k); });
        const PlanarMap pm = input("--family", [&] { return c.family(family).at(t); });
        m = [pm](Point p) { return pm(p); };
        formula = pm.to_string();
      }
      json probes = json::array();
      std::string text = "map  " + formula + "\n";
      bool ok = true;
      for (double y0 : y0s) {
        const ExtendabilityResult r = extendability_probe(m, y0);
        json pj = r;
        pj["y0"] = y0;
        probes.push_back(pj);
        const std::string cls = r.extends ? "extends" : "diverges";
        if (!expect.empty() && cls != expect) ok = false;
        text += "y0=" + fmt(y0) + "  " + cls + "  (" + r.trend + ")\n";
        for (const auto& row : r.table)
          text += "  x=" + fmt(row.x) + "  (" + fmt(row.value.x) + ", " + fmt(row.value.y) + ")\n";
      }
      json j = envelope("probe-extend", seed);
      j["k"] = k;
      j["family"] = family;
      j["t"] = t;
      j["map"] = formula;
      j["probes"] = probes;
      if (!expect.empty()) j["expect"] = expect;
      emit(j, text);
      res.code = ok ? 0 : 1;
    } else if (flow->parsed()) {
      FlowProblem fp;
      fp.V = input("--vf", [&] { return parse_field(vf_text); });
      fp.p0 = input("--p0", [&] { return parse_point(p0_text); });
      fp.domain = input("--domain", [&] { return parse_domain(domain_text); });
      if (!(h > 0.0)) throw UsageError("--h must be positive");
      fp.t = t;
      fp.h = h;
      fp.keep_trajectory = !trace_path.empty();
      const FlowResult r = integrate_flow(fp);
      if (!trace_path.empty()) {
        std::ofstream csv(trace_path);
        if (!csv) throw UsageError("--trace: cannot open " + trace_path);
        csv << std::setprecision(17) << "t,x,y\n";
        for (const auto& row : r.trajectory) csv << row.t << "," << row.p.x << "," << row.p.y << "\n";
      }
      json j = envelope("flow", seed);
      j["field"] = "(" + to_string(fp.V.a) + ", " + to_string(fp.V.b) + ")";
      j["p0"] = point_json(fp.p0);
      j["t"] = t;
      j["h"] = h;
      j["end"] = point_json(r.end);
      j["t_reached"] = r.t_reached;
      j["event"] = to_string(r.event);
      j["message"] = r.message;
      emit(j, as_text(j));
      res.code = r.completed() ? 0 : 1;
    } else if (residual->parsed()) {
      const Expr f = input("--f", [&] { return parse_expr(f_text, ParseOptions{.k = k, .allow_w = false}); });
      const Grid g = input("--grid", [&] { return Grid::parse(grid_text); });
      const ResidualResult r = residual_sup(f, k, g);
      const bool ok = r.sup <= residual_tol;
      json j = envelope("residual", seed);
      j["k"] = k;
      j["f"] = to_string(f);
      j["residual"] = to_string(r.residual);
      j["value"] = r.sup;
      j["worst"] = r.worst ? point_json(*r.worst) : json(nullptr);
      j["tol"] = residual_tol;
      j["passed"] = ok;
      emit(j, as_text(j));
      res.code = ok ? 0 : 1;
    } else if (norm_cmd->parsed()) {
      if (entire_text.empty() == bfunc_text.empty()) throw UsageError("norm: give exactly one of --entire, --bfunc");
      if (nodes < 16 || nodes > 200) throw UsageError("--nodes must be in [16, 200]");
      const QuadratureSpec q{nodes, true};
      MembershipVerdict v;
      if (!entire_text.empty()) {
        const Expr F = input("--entire", [&] { return entire_from_w(entire_text); });
        v = classify_entire(F, q);
      } else {
        const Expr f = input("--bfunc", [&] { return parse_expr(bfunc_text); });
        v = b_bargmann_member(f, q);
      }
      json j = envelope("norm", seed);
      j["entire"] = to_string(v.F);
      j["value"] = v.norm_sq ? json(*v.norm_sq) : json(nullptr);
      j["nodes"] = nodes;
      j["converged"] = v.verdict == Membership::Member;
      j["rel_change"] = v.rel_change ? json(*v.rel_change) : json(nullptr);
      j["verdict"] = to_string(v.verdict);
      j["evidence"] = v.evidence;
      emit(j, as_text(j));
      res.code = v.verdict == Membership::Member ? 0 : 1;
    } else if (push->parsed()) {
      PlanarMap m = input("--map", [&] { return parse_map(map_text); });
      m.domain = input("--domain", [&] { return parse_domain(domain_text); });
      const ComplexVectorField X = input("--vf", [&] { return parse_field(vf_text); });
      json j = envelope("pushforward", seed);
      j["map"] = m.to_string();
      j["field"] = "(" + to_string(X.a) + ", " + to_string(X.b) + ")";
      const Jacobian jac = jacobian(m);
      j["image_at_source"] = "(" + to_string(simplify(jac[0][0] * X.a + jac[0][1] * X.b)) + ", " +
                             to_string(simplify(jac[1][0] * X.a + jac[1][1] * X.b)) + ")";
      if (!inverse_text.empty()) {
        const PlanarMap inv = input("--inverse", [&] { return parse_map(inverse_text); });
        m.inverse = MapInverse{inv.u, inv.v, Domain::plane()};
        const ComplexVectorField Y = pushforward_symbolic(m, X);
        j["pushforward"] = "(" + to_string(Y.a) + ", " + to_string(Y.b) + ")";
      }
      bool ok = true;
      if (!target_text.empty()) {
        const ComplexVectorField Y = input("--target", [&] { return parse_field(target_text); });
        const ComplexVectorField r = pushforward_residual(m, X, Y);
        const Comparison c = relates(m, X, Y, m.domain.sampler(seed));
        ok = c.equal;
        j["target"] = "(" + to_string(Y.a) + ", " + to_string(Y.b) + ")";
        j["symbolic_residual"] = "(" + to_string(r.a) + ", " + to_string(r.b) + ")";
        j["max_error"] = c.max_error;
        j["worst"] = c.worst ? point_json(*c.worst) : json(nullptr);
        j["relates"] = ok;
      }
      emit(j, as_text(j));
      res.code = ok ? 0 : 1;
    }
  } catch (const UsageError& err) {
    res.code = 2;
    res.out.clear();
    res.err = std::string("error: ") + err.what() + "\n";
  } catch (const std::exception& err) {
    res.code = 1;
    res.out.clear();
    res.err = std::string("error: ") + err.what() + "\n";
  }
  return res;
}

}  // namespace bkc
