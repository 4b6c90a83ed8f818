#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/fanocone.hpp"
#include "solitonlab/nastab.hpp"
#include "solitonlab/polytope.hpp"
#include "solitonlab/weight.hpp"

namespace solitonlab::cli {

using json = nlohmann::json;

// Input error with a JSON pointer to the offending value.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(ErrorCode::InvalidInput, pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct Document {
  json root;
  std::filesystem::path base;  // directory for relative references
};

Document load_document(const std::string& path);

void require_keys(const json& obj, const std::string& at, std::initializer_list<const char*> allowed);

// Integers, "p/q" or decimal strings, and JSON floats (read through their
// shortest decimal form).
Rational read_rational(const json& v, const std::string& at);
RVec read_rvec(const json& v, const std::string& at, std::size_t size = 0);
Vec read_vec(const json& v, const std::string& at, std::size_t size = 0);

// {"vertices": [[...]]} or {"facets": [{"normal": [...], "offset": q}]},
// either inline or as a path to such a file.
PolytopePtr read_polytope(const json& v, const std::string& at, const std::filesystem::path& base);

// {"family": "constant"|"kr"|"mabuchi"|"cone"|"composite", "xi", "xbar", "n", "b", "c"}
Weight read_weight(const json& v, const std::string& at, const PolytopePtr& body);

// {"n": n, "moment_generators": [[...]]} or {"n": n, "reeb_rays": [[...]]}
FanoCone read_cone(const json& v, const std::string& at, const std::filesystem::path& base);

// {"affine_pieces": [{"a": [...], "b": q}], "combine": "min"|"max"}
PLFiltration read_filtration(const json& v, const std::string& at, const PolytopePtr& body);

std::string pointer(const std::string& at, const std::string& key);

}  // namespace solitonlab::cli
