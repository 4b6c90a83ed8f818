#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "schema.hpp"
#include "solitonlab/dh.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/toricfunc.hpp"
#include "suite.hpp"

namespace solitonlab::cli {

namespace {

using report_json = nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string in, out, csv, family;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> grid;
  bool all = false;
  int criterion = 0;
};

struct Outcome {
  report_json result = report_json::object();
  report_json diagnostics = report_json::object();
  std::optional<Error> infeasible;  // result stays valid, exit 2
};

report_json conventions() {
  return {{"dh_measure", "n! * Lebesgue"},
          {"futaki", "Fut_g(zeta) = -n! int <x, zeta> g dx; normalized values divide by V_g"},
          {"reeb_volume", "vol(C^{n+1}) = 1 at (1, ..., 1)"},
          {"ode_gauge", "u'(0) = 0, int e^{-u} dx = V_g"},
          {"version", kVersion}};
}

report_json qjson(const Rational& q) { return to_string(q); }

report_json qjson(const RVec& v) {
  report_json out = report_json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

report_json qjson(const std::vector<RVec>& vs) {
  report_json out = report_json::array();
  for (const auto& v : vs) out.push_back(qjson(v));
  return out;
}

report_json vjson(const Vec& v) { return report_json(v); }

void put_exact(report_json& obj, const std::string& key, const std::optional<Rational>& q) {
  if (q) obj[key + "_exact"] = qjson(*q);
}

// ------------------------------------------------------------------ input

struct Input {
  Document doc;
  bool bare = false;  // the file is the geometric object itself
};

Input load_input(const Options& opt) {
  if (opt.in.empty()) throw SchemaError("", "--in FILE is required for '" + opt.command + "'");
  Input in{load_document(opt.in), false};
  return in;
}

bool has_any(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (obj.contains(k)) return true;
  return false;
}

const json& need(const json& obj, const char* key) {
  if (!obj.contains(key)) throw SchemaError(pointer("", key), "missing required key");
  return obj.at(key);
}

// A polytope document, or a job object with a "polytope" entry plus the
// listed keys.
PolytopePtr polytope_job(Input& in, std::initializer_list<const char*> keys) {
  const json& root = in.doc.root;
  if (has_any(root, {"vertices", "facets"})) {
    in.bare = true;
    return read_polytope(root, "", in.doc.base);
  }
  std::vector<const char*> allowed{"name", "polytope"};
  allowed.insert(allowed.end(), keys.begin(), keys.end());
  for (const auto& [key, value] : root.items())
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }) == allowed.end())
      throw SchemaError(pointer("", key), "unknown key");
  return read_polytope(need(root, "polytope"), "/polytope", in.doc.base);
}

FanoCone cone_job(Input& in, std::initializer_list<const char*> keys) {
  const json& root = in.doc.root;
  if (has_any(root, {"moment_generators", "reeb_rays"})) {
    in.bare = true;
    return read_cone(root, "", in.doc.base);
  }
  std::vector<const char*> allowed{"name", "cone"};
  allowed.insert(allowed.end(), keys.begin(), keys.end());
  for (const auto& [key, value] : root.items())
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }) == allowed.end())
      throw SchemaError(pointer("", key), "unknown key");
  return read_cone(need(root, "cone"), "/cone", in.doc.base);
}

Weight job_weight(const Input& in, const PolytopePtr& body) {
  if (in.bare || !in.doc.root.contains("weight")) return Weight::constant(body);
  return read_weight(in.doc.root["weight"], "/weight", body);
}

report_json polytope_json(const Polytope& p) { return {{"dim", p.dim()}, {"vertices", qjson(p.vertices())}}; }

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SchemaError("", "cannot write '" + path + "'");
  f.precision(17);
  return f;
}

// ------------------------------------------------------------------ commands

Outcome cmd_futaki(const Options& opt) {
  Input in = load_input(opt);
  auto body = polytope_job(in, {"weight", "zeta"});
  auto g = job_weight(in, body);
  std::vector<RVec> zetas;
  if (!in.bare && in.doc.root.contains("zeta")) {
    const auto& z = in.doc.root["zeta"];
    if (!z.is_array() || z.empty()) throw SchemaError("/zeta", "expected a nonempty array of vectors");
    for (std::size_t i = 0; i < z.size(); ++i) zetas.push_back(read_rvec(z[i], "/zeta/" + std::to_string(i), body->dim()));
  } else {
    for (std::size_t k = 0; k < body->dim(); ++k) {
      RVec e(body->dim(), Rational(0));
      e[k] = 1;
      zetas.push_back(e);
    }
  }
  auto m = moments(*body, g);
  Outcome o;
  o.result["polytope"] = polytope_json(*body);
  o.result["weight_family"] = std::string(to_string(g.family()));
  o.result["mass"] = m.mass.value;
  put_exact(o.result, "mass", m.mass.exact);
  o.result["barycenter"] = vjson(m.barycenter);
  if (m.barycenter_exact) o.result["barycenter_exact"] = qjson(*m.barycenter_exact);
  report_json rows = report_json::array();
  for (const auto& z : zetas) {
    auto f = futaki(*body, g, z);
    report_json row{{"zeta", qjson(z)}, {"futaki", f.value}};
    put_exact(row, "futaki", f.exact);
    row["futaki_normalized"] = f.value / m.mass.value;
    if (f.exact && m.mass.exact) {
      Rational n = *f.exact / *m.mass.exact;
      row["futaki_normalized_exact"] = qjson(n);
    }
    rows.push_back(row);
  }
  o.result["futaki"] = rows;
  return o;
}

void write_profile(const std::string& path, const PolytopePtr& body, SolitonFamily fam, const Vec& xi,
                   const SolitonOptions& sopt) {
  // V along xi* + s d, d = xi*/|xi*| (or e_1 at the origin)
  Vec d(xi.size(), 0.0);
  double norm = 0;
  for (double v : xi) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 1e-12)
    for (std::size_t k = 0; k < xi.size(); ++k) d[k] = xi[k] / norm;
  else
    d[0] = 1;
  auto f = open_csv(path);
  f << "s,value\n";
  for (int i = 0; i <= 200; ++i) {
    const double s = -1 + 0.01 * i;
    Vec p = xi;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += s * d[k];
    try {
      f << s << ',' << soliton_potential(body, fam, p, sopt).value << '\n';
    } catch (const Error&) {
    }
  }
}

Outcome cmd_soliton(const Options& opt) {
  Input in = load_input(opt);
  auto body = polytope_job(in, {"family", "b", "cone_n"});
  const json& root = in.doc.root;
  std::string family = opt.family;
  if (family.empty() && !in.bare && root.contains("family")) {
    if (!root["family"].is_string()) throw SchemaError("/family", "expected a string");
    family = root["family"].get<std::string>();
  }
  if (family.empty()) family = "kr";
  SolitonFamily fam;
  try {
    fam = parse_family(family);
  } catch (const Error& e) {
    throw SchemaError(opt.family.empty() ? "/family" : "", e.what());
  }
  SolitonOptions sopt;
  if (opt.tol) sopt.tol = *opt.tol;
  if (!in.bare && root.contains("cone_n")) {
    if (!root["cone_n"].is_number_unsigned()) throw SchemaError("/cone_n", "expected a nonnegative integer");
    sopt.cone_n = root["cone_n"].get<unsigned>();
  }
  if (fam == SolitonFamily::Composite) {
    if (in.bare || !root.contains("b")) throw SchemaError("/b", "the composite family needs an expression \"b\"");
    if (!root["b"].is_string()) throw SchemaError("/b", "expected an expression string");
    try {
      sopt.b = BExpr::parse(root["b"].get<std::string>());
    } catch (const Error& e) {
      throw SchemaError("/b", e.what());
    }
  } else if (!in.bare && root.contains("b")) {
    throw SchemaError("/b", "only used by the composite family");
  }
  auto s = solve_weight_vector(body, fam, sopt);
  Outcome o;
  o.result["polytope"] = polytope_json(*body);
  o.result["family"] = std::string(to_string(fam));
  o.result["xi_star"] = vjson(s.xi);
  if (s.xi_exact) o.result["xi_star_exact"] = qjson(*s.xi_exact);
  o.result["residual"] = s.residual;
  o.result["feasible"] = s.feasible;
  o.result["potential"] = s.potential;
  o.result["mass"] = s.mass;
  o.diagnostics["iterations"] = s.iterations;
  o.diagnostics["converged"] = s.converged;
  o.diagnostics["tol"] = sopt.tol;
  if (!opt.csv.empty()) write_profile(opt.csv, body, fam, s.xi, sopt);
  if (!s.feasible)
    o.infeasible = Error(ErrorCode::Infeasible, "the soliton weight is not positive on the polytope");
  return o;
}

Outcome cmd_msy(const Options& opt) {
  Input in = load_input(opt);
  auto cone = cone_job(in, {"level"});
  std::optional<Rational> level;
  if (!in.bare && in.doc.root.contains("level")) level = read_rational(in.doc.root["level"], "/level");
  auto r = msy_minimize(cone, level);
  Outcome o;
  o.result["n"] = cone.n;
  o.result["gorenstein"] = qjson(cone.gorenstein);
  o.result["reeb_rays"] = qjson(cone.reeb.generators());
  o.result["xi_star"] = vjson(r.xi);
  o.result["vol_star"] = r.vol;
  o.result["reduced_hessian_definite"] = r.reduced_hessian_definite;
  o.diagnostics["gradient_norm"] = r.gradient_norm;
  o.diagnostics["iterations"] = r.iterations;
  return o;
}

RVec read_chi(const Input& in, const FanoCone& cone) {
  if (in.bare || !in.doc.root.contains("chi")) throw SchemaError("/chi", "missing required key");
  return read_rvec(in.doc.root["chi"], "/chi", cone.n + 1);
}

report_json cone_soliton_json(const QuotientModel& q, const FanoCone& cone, const Options& opt) {
  SolitonOptions sopt;
  sopt.cone_n = cone.n;
  if (opt.tol) sopt.tol = *opt.tol;
  auto s = solve_weight_vector(q.polytope, SolitonFamily::Cone, sopt);
  return {{"theta_star", vjson(s.xi)},
          {"xi_star", vjson(q.reeb_vector(s.xi))},
          {"residual", s.residual},
          {"iterations", s.iterations}};
}

Outcome cmd_quotient(const Options& opt) {
  Input in = load_input(opt);
  auto cone = cone_job(in, {"chi"});
  auto chi = read_chi(in, cone);
  auto q = quotient(cone, chi);
  Outcome o;
  o.result["chi"] = qjson(q.chi);
  o.result["polytope"] = polytope_json(*q.polytope);
  report_json div = report_json::array();
  for (const auto& c : q.divisor_coefficients) div.push_back(qjson(c));
  o.result["divisor_coefficients"] = div;
  o.result["cone_soliton"] = cone_soliton_json(q, cone, opt);
  return o;
}

Outcome cmd_crosscheck(const Options& opt) {
  Input in = load_input(opt);
  auto cone = cone_job(in, {"chi", "xi", "monomials"});
  auto chi = read_chi(in, cone);
  const json& root = in.doc.root;
  const std::size_t m = cone.n + 1;
  if (!root.contains("xi")) throw SchemaError("/xi", "missing required key");
  RVec xi = read_rvec(root["xi"], "/xi", m);
  std::vector<std::vector<unsigned>> monos;
  if (root.contains("monomials")) {
    const auto& mj = root["monomials"];
    if (!mj.is_array() || mj.empty()) throw SchemaError("/monomials", "expected a nonempty array");
    for (std::size_t i = 0; i < mj.size(); ++i) {
      const std::string at = "/monomials/" + std::to_string(i);
      if (!mj[i].is_array() || mj[i].size() != m) throw SchemaError(at, "expected " + std::to_string(m) + " exponents");
      std::vector<unsigned> e;
      for (std::size_t k = 0; k < m; ++k) {
        if (!mj[i][k].is_number_unsigned()) throw SchemaError(at + "/" + std::to_string(k), "expected a nonnegative integer");
        e.push_back(mj[i][k].get<unsigned>());
      }
      monos.push_back(e);
    }
  } else {
    monos.emplace_back(m, 0u);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<unsigned> e(m, 0u);
      e[k] = 1;
      monos.push_back(e);
    }
  }
  Outcome o;
  report_json rows = report_json::array();
  double worst = 0;
  for (const auto& e : monos) {
    auto r = dh_invariance_check(cone, xi, chi, e);
    auto bad = dh_invariance_check(cone, xi, chi, e, false);
    report_json row{{"monomial", e}, {"lhs", r.lhs.value}};
    put_exact(row, "lhs", r.lhs.exact);
    row["rhs"] = r.rhs;
    row["error"] = std::abs(r.lhs.value - r.rhs);
    row["control_gap"] = std::abs(bad.lhs.value - bad.rhs);
    worst = std::max(worst, std::abs(r.lhs.value - r.rhs));
    rows.push_back(row);
  }
  o.result["xi"] = qjson(xi);
  o.result["chi"] = qjson(chi);
  o.result["dh_invariance"] = rows;
  o.result["dh_max_error"] = worst;

  auto msy = msy_minimize(cone);
  auto q = quotient(cone, chi);
  auto cs = cone_soliton_json(q, cone, opt);
  double gap = 0;
  const Vec lifted = cs["xi_star"].get<Vec>();
  for (std::size_t k = 0; k < m; ++k) gap = std::max(gap, std::abs(lifted[k] - msy.xi[k]));
  o.result["msy_xi_star"] = vjson(msy.xi);
  o.result["quotient_xi_star"] = cs["xi_star"];
  o.result["reeb_gap"] = gap;
  return o;
}

Outcome cmd_delta(const Options& opt) {
  Input in = load_input(opt);
  auto body = polytope_job(in, {"weight", "reduced", "subspace"});
  auto g = job_weight(in, body);
  DeltaOptions dopt;
  if (opt.seed) dopt.seed = *opt.seed;
  if (opt.grid) dopt.sphere_points = *opt.grid;
  const json& root = in.doc.root;
  if (!in.bare && root.contains("reduced")) {
    if (!root["reduced"].is_boolean()) throw SchemaError("/reduced", "expected true or false");
    dopt.reduced = root["reduced"].get<bool>();
  }
  if (!in.bare && root.contains("subspace")) {
    const auto& sj = root["subspace"];
    if (!sj.is_array()) throw SchemaError("/subspace", "expected an array of vectors");
    for (std::size_t i = 0; i < sj.size(); ++i)
      dopt.subspace.push_back(read_rvec(sj[i], "/subspace/" + std::to_string(i), body->dim()));
  }
  auto d = delta_estimate(*body, g, dopt);
  Outcome o;
  o.result["polytope"] = polytope_json(*body);
  o.result["weight_family"] = std::string(to_string(g.family()));
  o.result["reduced"] = dopt.reduced;
  o.result["delta"] = d.delta;
  o.result["witness_u"] = vjson(d.witness_u);
  if (d.witness_xi) o.result["witness_xi"] = vjson(*d.witness_xi);
  o.diagnostics["evaluations"] = d.evaluations;
  o.diagnostics["seed"] = dopt.seed;
  o.diagnostics["sphere_points"] = dopt.sphere_points;
  return o;
}

Outcome cmd_na(const Options& opt) {
  Input in = load_input(opt);
  if (has_any(in.doc.root, {"vertices", "facets"}))
    throw SchemaError("/filtration", "'na' needs a job object with \"polytope\" and \"filtration\"");
  auto body = polytope_job(in, {"weight", "filtration"});
  auto g = job_weight(in, body);
  auto f = read_filtration(need(in.doc.root, "filtration"), "/filtration", body);
  auto r = na_eval(*body, g, f);
  Outcome o;
  o.result["polytope"] = polytope_json(*body);
  o.result["weight_family"] = std::string(to_string(g.family()));
  o.result["energy"] = r.energy;
  put_exact(o.result, "energy", r.energy_exact);
  o.result["lambda_max"] = r.lambda_max;
  put_exact(o.result, "lambda_max", r.lambda_max_exact);
  o.result["lambda_min"] = r.lambda_min;
  put_exact(o.result, "lambda_min", r.lambda_min_exact);
  o.result["j"] = r.j;
  put_exact(o.result, "j", r.j_exact);
  const auto [lo, hi] = r.dh.support();
  report_json atoms = report_json::array();
  for (const auto& a : r.dh.atoms()) atoms.push_back({{"at", a.at}, {"mass", a.mass}});
  o.result["dh"] = {{"support", {lo, hi}}, {"total_mass", r.dh.total_mass()}, {"atoms", atoms}};
  o.diagnostics["exact"] = r.dh.is_exact();
  if (!opt.csv.empty()) {
    auto out = open_csv(opt.csv);
    out << "s,density\n";
    const int samples = opt.grid ? std::max(*opt.grid, 2) : 201;
    for (int i = 0; i < samples; ++i) {
      const double s = lo + (hi - lo) * i / (samples - 1);
      out << s << ',' << r.dh.density(s) << '\n';
    }
  }
  return o;
}

Outcome cmd_ode1d(const Options& opt) {
  Input in = load_input(opt);
  auto body = polytope_job(in, {"weight"});
  if (body->dim() != 1) throw SchemaError(in.bare ? "" : "/polytope", "ode1d needs an interval");
  auto g = job_weight(in, body);
  GridSpec grid;
  if (opt.grid) {
    if (*opt.grid < 17) throw SchemaError("", "--grid must be at least 17");
    grid.points = std::size_t(*opt.grid);
  }
  auto s = solve_gsoliton_1d(g, grid);
  const auto& u = s.potential;
  Outcome o;
  o.result["interval"] = {u.lower(), u.upper()};
  o.result["obstruction"] = s.obstruction;
  o.result["mass"] = s.mass;
  o.result["u_at_0"] = u.value(0.0);
  o.result["slope_range"] = {u.slopes().front(), u.slopes().back()};
  o.diagnostics["residual"] = s.residual;
  o.diagnostics["grid"] = {{"half_width", grid.half_width}, {"points", grid.points}};
  if (!opt.csv.empty()) {
    auto out = open_csv(opt.csv);
    out << "x,u,y,phi\n";
    for (std::size_t i = 0; i < u.x().size(); ++i) {
      const double x = u.x()[i], y = u.slopes()[i];
      out << x << ',' << u.values()[i] << ',' << y << ',' << x * y - u.values()[i] << '\n';
    }
  }
  return o;
}

Outcome cmd_check(const Options& opt, bool& failed) {
  Outcome o;
  report_json rows = report_json::array();
  failed = false;
  for (const auto& c : criteria()) {
    if (opt.criterion && c.id != opt.criterion) continue;
    auto r = c.run();
    rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) {
      failed = true;
      if (!opt.all) break;
    }
  }
  if (opt.criterion && rows.empty()) throw SchemaError("", "no criterion " + std::to_string(opt.criterion));
  o.result["criteria"] = rows;
  o.result["passed"] = !failed;
  return o;
}

// ------------------------------------------------------------------ report

report_json options_json(const Options& opt) {
  report_json o = report_json::object();
  if (!opt.family.empty()) o["family"] = opt.family;
  if (opt.seed) o["seed"] = *opt.seed;
  if (opt.tol) o["tol"] = *opt.tol;
  if (opt.grid) o["grid"] = *opt.grid;
  if (!opt.csv.empty()) o["csv"] = opt.csv;
  if (opt.command == "check") {
    o["all"] = opt.all;
    if (opt.criterion) o["criterion"] = opt.criterion;
  }
  return o;
}

report_json error_json(const Error& e) {
  report_json j{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (auto* s = dynamic_cast<const SchemaError*>(&e))
    j["pointer"] = s->pointer();
  else
    j["pointer"] = nullptr;
  return j;
}

int emit(const report_json& report, const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = report.dump(2) + "\n";
  if (opt.out.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(opt.out);
  if (!f) {
    err << "cannot write '" << opt.out << "'\n";
    return 1;
  }
  f << text;
  return 0;
}

int dispatch(const Options& opt, std::ostream& out, std::ostream& err) {
  report_json report;
  report["command"] = opt.command;
  report["input"] = opt.in.empty() ? report_json(nullptr) : report_json(opt.in);
  report["options"] = options_json(opt);
  report["conventions"] = conventions();
  int code = 0;
  try {
    Outcome o;
    bool failed = false;
    if (opt.command == "futaki") o = cmd_futaki(opt);
    else if (opt.command == "soliton") o = cmd_soliton(opt);
    else if (opt.command == "msy") o = cmd_msy(opt);
    else if (opt.command == "quotient") o = cmd_quotient(opt);
    else if (opt.command == "crosscheck") o = cmd_crosscheck(opt);
    else if (opt.command == "delta") o = cmd_delta(opt);
    else if (opt.command == "na") o = cmd_na(opt);
    else if (opt.command == "ode1d") o = cmd_ode1d(opt);
    else o = cmd_check(opt, failed);
    report["status"] = o.infeasible ? "infeasible" : failed ? "failed" : "ok";
    report["result"] = o.result;
    report["diagnostics"] = o.diagnostics;
    if (o.infeasible) {
      report["error"] = error_json(*o.infeasible);
      code = 2;
    } else if (failed) {
      code = 1;
    }
  } catch (const Error& e) {
    const bool infeasible = is_infeasibility(e.code());
    report["status"] = infeasible ? "infeasible" : "error";
    report["error"] = error_json(e);
    code = infeasible ? 2 : 1;
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = {{"code", "Internal"}, {"message", e.what()}, {"pointer", nullptr}};
    code = 1;
  }
  if (emit(report, opt, out, err)) return 1;
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted solitons, Reeb cones and non-Archimedean invariants on toric data", "solitonlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options opt;

  auto common = [&](CLI::App* sub, bool input) {
    if (input) sub->add_option("--in", opt.in, "input JSON file")->required();
    sub->add_option("--out", opt.out, "write the report here instead of stdout");
  };
  auto* futaki = app.add_subcommand("futaki", "weighted Futaki invariant and moments");
  common(futaki, true);
  auto* soliton = app.add_subcommand("soliton", "soliton vector of a weight family");
  common(soliton, true);
  soliton->add_option("--family", opt.family, "kr | mabuchi | cone | composite");
  soliton->add_option("--tol", opt.tol, "gradient tolerance relative to V_g");
  soliton->add_option("--csv", opt.csv, "profile of the potential along xi*");
  auto* msy = app.add_subcommand("msy", "Reeb volume minimization on a cone");
  common(msy, true);
  auto* quot = app.add_subcommand("quotient", "quotient polytope and cone soliton for a quasi-regular chi");
  common(quot, true);
  quot->add_option("--tol", opt.tol, "gradient tolerance");
  auto* cross = app.add_subcommand("crosscheck", "DH invariance and cone/quotient agreement");
  common(cross, true);
  cross->add_option("--tol", opt.tol, "gradient tolerance");
  auto* delta = app.add_subcommand("delta", "toric delta invariant estimate");
  common(delta, true);
  delta->add_option("--seed", opt.seed, "sampling seed");
  delta->add_option("--grid", opt.grid, "directions sampled on the sphere");
  auto* na = app.add_subcommand("na", "non-Archimedean functionals of a PL filtration");
  common(na, true);
  na->add_option("--csv", opt.csv, "DH density of the filtration");
  na->add_option("--grid", opt.grid, "density samples in the CSV");
  auto* ode = app.add_subcommand("ode1d", "one-dimensional soliton equation");
  common(ode, true);
  ode->add_option("--grid", opt.grid, "grid points");
  ode->add_option("--csv", opt.csv, "columns x, u, y = u', phi");
  auto* check = app.add_subcommand("check", "run the identity suite");
  common(check, false);
  check->add_flag("--all", opt.all, "keep going after a failure");
  check->add_option("--criterion", opt.criterion, "run one criterion")->check(CLI::Range(1, 10));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    report_json report{{"command", nullptr},
                       {"status", "error"},
                       {"error", {{"code", "InvalidInput"}, {"message", e.what()}, {"pointer", nullptr}}}};
    out << report.dump(2) << "\n";
    err << e.what() << "\n";
    return 1;
  }
  opt.command = app.get_subcommands().front()->get_name();
  return dispatch(opt, out, err);
}

}  // namespace solitonlab::cli
