#pragma once

#include <string>

#include <json.hpp>

#include "dmu/certify.hpp"
#include "dmu/dirichlet.hpp"
#include "dmu/function.hpp"
#include "dmu/measure.hpp"
#include "dmu/quadrature.hpp"

namespace dmu {

using json = nlohmann::json;

/// Schema violation with a JSON-pointer-style path to the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parsers validate strictly: required fields must be present, unknown fields
/// are rejected, and errors carry the field path.
QuadratureSpec spec_from_json(const json& j, const std::string& path = "/quadrature");
json spec_to_json(const QuadratureSpec& spec);

/// Measures accept either a preset string ("lebesgue", "zero", "dirac(<angle>)")
/// or the structured form {"atoms": [...], "density": {...}}.
CircleMeasure measure_from_json(const json& j, const std::string& path = "/measure");
json measure_to_json(const CircleMeasure& mu);

/// Expression trees: {"kind": "power", "lambda": 1.0, "alpha": 1, "scale": 0.5},
/// {"kind": "gn_compose", "n": 2, "arg": {...}}, and so on.
AnalyticFn function_from_json(const json& j, const std::string& path = "/function");
json function_to_json(const AnalyticFn& f);

cplx complex_from_json(const json& j, const std::string& path);
json complex_to_json(const cplx& z);

json tail_profile_to_json(const TailProfile& t);
json certificate_to_json(const Certificate& c);
json inequality_report_to_json(const InequalityReport& r);
json local_dirichlet_to_json(const LocalDirichletResult& r);

}  // namespace dmu
