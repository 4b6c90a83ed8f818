#include "schema.hpp"

#include <fstream>

#include "solitonlab/bexpr.hpp"
#include "solitonlab/dh.hpp"

namespace solitonlab::cli {

namespace fs = std::filesystem;

std::string pointer(const std::string& at, const std::string& key) { return at + "/" + key; }

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot open input file '" + path + "'");
  Document doc;
  try {
    doc.root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.root.is_object()) throw SchemaError("", "top level must be an object");
  doc.base = fs::path(path).parent_path();
  return doc;
}

void require_keys(const json& obj, const std::string& at, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(at, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || key == k;
    if (!known) throw SchemaError(pointer(at, key), "unknown key");
  }
}

namespace {

Rational from_decimal(const std::string& text, const std::string& at) {
  try {
    const auto e = text.find_first_of("eE");
    if (e == std::string::npos) return parse_rational(text);
    Rational q = parse_rational(text.substr(0, e));
    const long exp = std::stol(text.substr(e + 1));
    Rational p = 1;
    for (long i = 0; i < std::abs(exp); ++i) p *= 10;
    if (exp >= 0) {
      Rational r = q * p;
      return r;
    }
    Rational r = q / p;
    return r;
  } catch (const std::exception&) {
    throw SchemaError(at, "not a number: '" + text + "'");
  }
}

const json& child(const json& obj, const std::string& key, const std::string& at) {
  if (!obj.contains(key)) throw SchemaError(pointer(at, key), "missing required key");
  return obj.at(key);
}

}  // namespace

Rational read_rational(const json& v, const std::string& at) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rational(static_cast<unsigned long>(v.get<std::uint64_t>()));
    return Rational(static_cast<long>(v.get<std::int64_t>()));
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(at, "non-finite number");
    return from_decimal(v.dump(), at);
  }
  if (v.is_string()) return from_decimal(v.get<std::string>(), at);
  throw SchemaError(at, "expected a number or a \"p/q\" string");
}

RVec read_rvec(const json& v, const std::string& at, std::size_t size) {
  if (!v.is_array()) throw SchemaError(at, "expected an array");
  if (size && v.size() != size)
    throw SchemaError(at, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  RVec out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_rational(v[i], pointer(at, std::to_string(i))));
  return out;
}

Vec read_vec(const json& v, const std::string& at, std::size_t size) {
  if (!v.is_array()) throw SchemaError(at, "expected an array");
  if (size && v.size() != size)
    throw SchemaError(at, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  Vec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& x = v[i];
    if (x.is_number())
      out.push_back(x.get<double>());
    else
      out.push_back(read_rational(x, pointer(at, std::to_string(i))).get_d());
  }
  return out;
}

namespace {

std::vector<RVec> read_points(const json& v, const std::string& at, std::size_t size = 0) {
  if (!v.is_array() || v.empty()) throw SchemaError(at, "expected a nonempty array of points");
  std::vector<RVec> out;
  const std::size_t d = size ? size : (v[0].is_array() ? v[0].size() : 0);
  if (d == 0) throw SchemaError(pointer(at, "0"), "expected a nonempty array");
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_rvec(v[i], pointer(at, std::to_string(i)), d));
  return out;
}

}  // namespace

PolytopePtr read_polytope(const json& v, const std::string& at, const fs::path& base) {
  if (v.is_string()) {
    const fs::path file = base / v.get<std::string>();
    Document doc = load_document(file.string());
    return read_polytope(doc.root, "", doc.base);
  }
  require_keys(v, at, {"vertices", "facets", "name"});
  const bool has_v = v.contains("vertices"), has_f = v.contains("facets");
  if (has_v == has_f) throw SchemaError(at, "give exactly one of \"vertices\" or \"facets\"");
  if (has_v) return std::make_shared<const Polytope>(Polytope::from_vertices(read_points(v["vertices"], pointer(at, "vertices"))));
  const auto& fj = v["facets"];
  const std::string fat = pointer(at, "facets");
  if (!fj.is_array() || fj.empty()) throw SchemaError(fat, "expected a nonempty array of facets");
  std::vector<Facet> facets;
  std::size_t dim = 0;
  for (std::size_t i = 0; i < fj.size(); ++i) {
    const std::string fi = pointer(fat, std::to_string(i));
    require_keys(fj[i], fi, {"normal", "offset"});
    RVec normal = read_rvec(child(fj[i], "normal", fi), pointer(fi, "normal"), dim);
    dim = normal.size();
    facets.push_back({normal, read_rational(child(fj[i], "offset", fi), pointer(fi, "offset"))});
  }
  return std::make_shared<const Polytope>(Polytope::from_facets(dim, std::move(facets)));
}

Weight read_weight(const json& v, const std::string& at, const PolytopePtr& body) {
  require_keys(v, at, {"family", "xi", "xbar", "n", "b", "c"});
  std::string family = "constant";
  if (v.contains("family")) {
    if (!v["family"].is_string()) throw SchemaError(pointer(at, "family"), "expected a string");
    family = v["family"].get<std::string>();
  }
  const std::size_t d = body->dim();
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (v.contains(k)) throw SchemaError(pointer(at, k), "not used by the '" + family + "' family");
  };
  if (family == "constant") {
    forbid({"xi", "xbar", "n", "b"});
    return Weight::constant(body, v.contains("c") ? read_rational(v["c"], pointer(at, "c")) : Rational(1));
  }
  forbid({"c"});
  if (family == "kr") {
    forbid({"xbar", "n", "b"});
    return Weight::exponential(body, read_vec(child(v, "xi", at), pointer(at, "xi"), d));
  }
  if (family == "mabuchi") {
    forbid({"n", "b"});
    RVec xi = read_rvec(child(v, "xi", at), pointer(at, "xi"), d);
    RVec xbar;
    if (v.contains("xbar")) {
      xbar = read_rvec(v["xbar"], pointer(at, "xbar"), d);
    } else {
      auto m = moments(*body, Weight::constant(body));
      xbar = *m.barycenter_exact;
    }
    return Weight::affine_pinned(body, std::move(xi), std::move(xbar));
  }
  if (family == "cone") {
    forbid({"xbar", "b"});
    unsigned n = unsigned(d);
    if (v.contains("n")) {
      if (!v["n"].is_number_unsigned()) throw SchemaError(pointer(at, "n"), "expected a nonnegative integer");
      n = v["n"].get<unsigned>();
    }
    return Weight::cone_power(body, read_vec(child(v, "xi", at), pointer(at, "xi"), d), n);
  }
  if (family == "composite") {
    forbid({"xbar", "n"});
    const auto& b = child(v, "b", at);
    if (!b.is_string()) throw SchemaError(pointer(at, "b"), "expected an expression string");
    BExpr expr = [&] {
      try {
        return BExpr::parse(b.get<std::string>());
      } catch (const Error& e) {
        throw SchemaError(pointer(at, "b"), e.what());
      }
    }();
    return Weight::composite(body, expr, read_vec(child(v, "xi", at), pointer(at, "xi"), d));
  }
  throw SchemaError(pointer(at, "family"), "unknown weight family '" + family + "'");
}

FanoCone read_cone(const json& v, const std::string& at, const fs::path& base) {
  if (v.is_string()) {
    const fs::path file = base / v.get<std::string>();
    Document doc = load_document(file.string());
    return read_cone(doc.root, "", doc.base);
  }
  require_keys(v, at, {"n", "moment_generators", "reeb_rays", "name"});
  const bool has_m = v.contains("moment_generators"), has_r = v.contains("reeb_rays");
  if (has_m == has_r) throw SchemaError(at, "give exactly one of \"moment_generators\" or \"reeb_rays\"");
  std::size_t size = 0;
  if (v.contains("n")) {
    if (!v["n"].is_number_unsigned()) throw SchemaError(pointer(at, "n"), "expected a nonnegative integer");
    size = v["n"].get<std::size_t>() + 1;
  }
  if (has_m) return build_cone_from_generators(read_points(v["moment_generators"], pointer(at, "moment_generators"), size));
  return build_cone_from_rays(read_points(v["reeb_rays"], pointer(at, "reeb_rays"), size));
}

PLFiltration read_filtration(const json& v, const std::string& at, const PolytopePtr& body) {
  require_keys(v, at, {"affine_pieces", "combine"});
  std::string combine = "min";
  if (v.contains("combine")) {
    if (!v["combine"].is_string()) throw SchemaError(pointer(at, "combine"), "expected \"min\" or \"max\"");
    combine = v["combine"].get<std::string>();
    if (combine != "min" && combine != "max") throw SchemaError(pointer(at, "combine"), "expected \"min\" or \"max\"");
  }
  const auto& pj = child(v, "affine_pieces", at);
  const std::string pat = pointer(at, "affine_pieces");
  if (!pj.is_array() || pj.empty()) throw SchemaError(pat, "expected a nonempty array");
  std::vector<AffinePiece> pieces;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string pi = pointer(pat, std::to_string(i));
    require_keys(pj[i], pi, {"a", "b"});
    pieces.push_back({read_rvec(child(pj[i], "a", pi), pointer(pi, "a"), body->dim()),
                      pj[i].contains("b") ? read_rational(pj[i]["b"], pointer(pi, "b")) : Rational(0)});
  }
  return PLFiltration::from_pieces(body, std::move(pieces), combine);
}

}  // namespace solitonlab::cli
