#include "dmu/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dmu {

namespace {

void check_keys(const json& j, const std::string& path,
                const std::vector<std::string>& allowed,
                const std::vector<std::string>& required) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw SchemaError(path + "/" + it.key(), "unknown field");
  }
  for (const auto& r : required) {
    if (!j.contains(r)) throw SchemaError(path + "/" + r, "missing required field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

}  // namespace

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  check_keys(j, path, {"re", "im"}, {"re"});
  double re = get_number(j.at("re"), path + "/re");
  double im = j.contains("im") ? get_number(j.at("im"), path + "/im") : 0.0;
  return cplx(re, im);
}

json complex_to_json(const cplx& z) {
  if (z.imag() == 0.0) return json(z.real());
  return json{{"re", z.real()}, {"im", z.imag()}};
}

QuadratureSpec spec_from_json(const json& j, const std::string& path) {
  check_keys(j, path,
             {"angular_nodes", "radial_levels", "refinement_factor", "rel_tol", "abs_tol",
              "singular_exclusion", "tail_annuli"},
             {});
  QuadratureSpec spec;
  if (j.contains("angular_nodes"))
    spec.angular_nodes = get_int(j.at("angular_nodes"), path + "/angular_nodes");
  if (j.contains("radial_levels"))
    spec.radial_levels = get_int(j.at("radial_levels"), path + "/radial_levels");
  if (j.contains("refinement_factor"))
    spec.refinement_factor = get_number(j.at("refinement_factor"), path + "/refinement_factor");
  if (j.contains("rel_tol")) spec.rel_tol = get_number(j.at("rel_tol"), path + "/rel_tol");
  if (j.contains("abs_tol")) spec.abs_tol = get_number(j.at("abs_tol"), path + "/abs_tol");
  if (j.contains("singular_exclusion"))
    spec.singular_exclusion =
        get_number(j.at("singular_exclusion"), path + "/singular_exclusion");
  if (j.contains("tail_annuli"))
    spec.tail_annuli = get_int(j.at("tail_annuli"), path + "/tail_annuli");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  return spec;
}

json spec_to_json(const QuadratureSpec& spec) {
  return json{{"angular_nodes", spec.angular_nodes},
              {"radial_levels", spec.radial_levels},
              {"refinement_factor", spec.refinement_factor},
              {"rel_tol", spec.rel_tol},
              {"abs_tol", spec.abs_tol},
              {"singular_exclusion", spec.singular_exclusion},
              {"tail_annuli", spec.tail_annuli}};
}

namespace {

CircleMeasure measure_from_preset(const std::string& preset, const std::string& path) {
  if (preset == "lebesgue") return CircleMeasure::lebesgue();
  if (preset == "zero") return CircleMeasure::zero();
  if (preset.rfind("dirac(", 0) == 0 && preset.back() == ')') {
    double angle = 0.0;
    if (std::sscanf(preset.c_str(), "dirac(%lf)", &angle) == 1)
      return CircleMeasure::dirac(angle);
    throw SchemaError(path, "could not parse dirac preset angle");
  }
  throw SchemaError(path, "unknown measure preset '" + preset + "'");
}

}  // namespace

CircleMeasure measure_from_json(const json& j, const std::string& path) {
  if (j.is_string()) return measure_from_preset(j.get<std::string>(), path);
  check_keys(j, path, {"preset", "atoms", "density"}, {});
  if (j.contains("preset")) {
    if (j.size() != 1) throw SchemaError(path, "preset measures take no other fields");
    if (!j.at("preset").is_string()) throw SchemaError(path + "/preset", "expected a string");
    return measure_from_preset(j.at("preset").get<std::string>(), path + "/preset");
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const auto& ja = j.at("atoms");
    if (!ja.is_array()) throw SchemaError(path + "/atoms", "expected an array");
    for (size_t i = 0; i < ja.size(); ++i) {
      std::string p = path + "/atoms/" + std::to_string(i);
      check_keys(ja[i], p, {"angle", "mass"}, {"angle", "mass"});
      atoms.push_back(
          {get_number(ja[i].at("angle"), p + "/angle"), get_number(ja[i].at("mass"), p + "/mass")});
    }
  }
  if (!j.contains("density")) {
    try {
      return CircleMeasure::from_atoms(std::move(atoms));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path + "/atoms", e.what());
    }
  }
  const auto& jd = j.at("density");
  std::string dp = path + "/density";
  check_keys(jd, dp, {"kind", "value", "values", "mean", "cos", "sin"}, {"kind"});
  if (!jd.at("kind").is_string()) throw SchemaError(dp + "/kind", "expected a string");
  std::string kind = jd.at("kind").get<std::string>();
  try {
    if (kind == "zero") {
      return CircleMeasure::from_atoms(std::move(atoms));
    } else if (kind == "constant") {
      if (!jd.contains("value")) throw SchemaError(dp + "/value", "missing required field");
      return CircleMeasure::constant_density(get_number(jd.at("value"), dp + "/value"),
                                             std::move(atoms));
    } else if (kind == "samples") {
      if (!jd.contains("values")) throw SchemaError(dp + "/values", "missing required field");
      const auto& jv = jd.at("values");
      if (!jv.is_array()) throw SchemaError(dp + "/values", "expected an array");
      std::vector<double> samples;
      for (size_t i = 0; i < jv.size(); ++i)
        samples.push_back(get_number(jv[i], dp + "/values/" + std::to_string(i)));
      return CircleMeasure::sampled_density(std::move(samples), std::move(atoms));
    } else if (kind == "trig_poly") {
      double mean = jd.contains("mean") ? get_number(jd.at("mean"), dp + "/mean") : 0.0;
      std::vector<double> cosv, sinv;
      if (jd.contains("cos")) {
        const auto& jc = jd.at("cos");
        if (!jc.is_array()) throw SchemaError(dp + "/cos", "expected an array");
        for (size_t i = 0; i < jc.size(); ++i)
          cosv.push_back(get_number(jc[i], dp + "/cos/" + std::to_string(i)));
      }
      if (jd.contains("sin")) {
        const auto& js = jd.at("sin");
        if (!js.is_array()) throw SchemaError(dp + "/sin", "expected an array");
        for (size_t i = 0; i < js.size(); ++i)
          sinv.push_back(get_number(js[i], dp + "/sin/" + std::to_string(i)));
      }
      return CircleMeasure::trig_poly_density(mean, std::move(cosv), std::move(sinv),
                                              std::move(atoms));
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(dp, e.what());
  }
  throw SchemaError(dp + "/kind", "unknown density kind '" + kind + "'");
}

json measure_to_json(const CircleMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back({{"angle", a.angle}, {"mass", a.mass}});
  json density;
  switch (mu.density_kind()) {
    case CircleMeasure::DensityKind::kZero:
      density = {{"kind", "zero"}};
      break;
    case CircleMeasure::DensityKind::kConstant:
      density = {{"kind", "constant"}, {"value", mu.constant_value()}};
      break;
    case CircleMeasure::DensityKind::kSamples:
      density = {{"kind", "samples"}, {"values", mu.density_samples()}};
      break;
    case CircleMeasure::DensityKind::kTrigPoly: {
      density = {{"kind", "samples"}, {"values", json::array()}};
      const int n = 512;
      json values = json::array();
      for (int j = 0; j < n; ++j) values.push_back(mu.density_value(kTwoPi * j / n));
      density["values"] = values;
      break;
    }
  }
  return json{{"atoms", atoms}, {"density", density}};
}

AnalyticFn function_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains("kind")) throw SchemaError(path + "/kind", "missing required field");
  if (!j.at("kind").is_string()) throw SchemaError(path + "/kind", "expected a string");
  std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") {
      check_keys(j, path, {"kind", "value"}, {"kind", "value"});
      return AnalyticFn::constant(complex_from_json(j.at("value"), path + "/value"));
    }
    if (kind == "identity") {
      check_keys(j, path, {"kind"}, {"kind"});
      return AnalyticFn::identity();
    }
    if (kind == "sum" || kind == "product") {
      const char* field = kind == "sum" ? "terms" : "factors";
      check_keys(j, path, {"kind", field}, {"kind", field});
      const auto& ja = j.at(field);
      if (!ja.is_array() || ja.empty())
        throw SchemaError(path + "/" + field, "expected a non-empty array");
      std::vector<AnalyticFn> kids;
      for (size_t i = 0; i < ja.size(); ++i)
        kids.push_back(
            function_from_json(ja[i], path + "/" + field + "/" + std::to_string(i)));
      return kind == "sum" ? AnalyticFn::sum(std::move(kids))
                           : AnalyticFn::product(std::move(kids));
    }
    if (kind == "quotient") {
      check_keys(j, path, {"kind", "num", "den"}, {"kind", "num", "den"});
      return AnalyticFn::quotient(function_from_json(j.at("num"), path + "/num"),
                                  function_from_json(j.at("den"), path + "/den"));
    }
    if (kind == "scale") {
      check_keys(j, path, {"kind", "factor", "arg"}, {"kind", "factor", "arg"});
      return AnalyticFn::scale(complex_from_json(j.at("factor"), path + "/factor"),
                               function_from_json(j.at("arg"), path + "/arg"));
    }
    if (kind == "power") {
      check_keys(j, path, {"kind", "lambda", "alpha", "scale"}, {"kind", "lambda", "alpha"});
      cplx scale = j.contains("scale") ? complex_from_json(j.at("scale"), path + "/scale")
                                       : cplx(1.0, 0.0);
      return AnalyticFn::power(complex_from_json(j.at("lambda"), path + "/lambda"),
                               get_number(j.at("alpha"), path + "/alpha"), scale);
    }
    if (kind == "exp") {
      check_keys(j, path, {"kind", "arg"}, {"kind", "arg"});
      return AnalyticFn::exp_of(function_from_json(j.at("arg"), path + "/arg"));
    }
    if (kind == "log") {
      check_keys(j, path, {"kind", "arg"}, {"kind", "arg"});
      return AnalyticFn::log_of(function_from_json(j.at("arg"), path + "/arg"));
    }
    if (kind == "gn_compose") {
      check_keys(j, path, {"kind", "n", "arg"}, {"kind", "n", "arg"});
      return AnalyticFn::gn_compose(get_int(j.at("n"), path + "/n"),
                                    function_from_json(j.at("arg"), path + "/arg"));
    }
    if (kind == "polynomial") {
      check_keys(j, path, {"kind", "coeffs"}, {"kind", "coeffs"});
      const auto& jc = j.at("coeffs");
      if (!jc.is_array()) throw SchemaError(path + "/coeffs", "expected an array");
      std::vector<cplx> coeffs;
      for (size_t i = 0; i < jc.size(); ++i)
        coeffs.push_back(complex_from_json(jc[i], path + "/coeffs/" + std::to_string(i)));
      return AnalyticFn::polynomial(std::move(coeffs));
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + "/kind", "unknown function kind '" + kind + "'");
}

namespace {

json node_to_json(const detail::NodePtr& node) {
  using detail::NodeKind;
  switch (node->kind) {
    case NodeKind::kConst:
      return json{{"kind", "constant"}, {"value", complex_to_json(node->c)}};
    case NodeKind::kIdentity:
      return json{{"kind", "identity"}};
    case NodeKind::kSum: {
      json terms = json::array();
      for (const auto& k : node->kids) terms.push_back(node_to_json(k));
      return json{{"kind", "sum"}, {"terms", terms}};
    }
    case NodeKind::kProduct: {
      json factors = json::array();
      for (const auto& k : node->kids) factors.push_back(node_to_json(k));
      return json{{"kind", "product"}, {"factors", factors}};
    }
    case NodeKind::kQuotient:
      return json{{"kind", "quotient"},
                  {"num", node_to_json(node->kids[0])},
                  {"den", node_to_json(node->kids[1])}};
    case NodeKind::kScale:
      return json{{"kind", "scale"},
                  {"factor", complex_to_json(node->c)},
                  {"arg", node_to_json(node->kids[0])}};
    case NodeKind::kPower:
      return json{{"kind", "power"},
                  {"lambda", complex_to_json(node->lambda)},
                  {"alpha", node->alpha},
                  {"scale", complex_to_json(node->c)}};
    case NodeKind::kExp:
      return json{{"kind", "exp"}, {"arg", node_to_json(node->kids[0])}};
    case NodeKind::kLog:
      return json{{"kind", "log"}, {"arg", node_to_json(node->kids[0])}};
    case NodeKind::kGn:
      return json{{"kind", "gn_compose"}, {"n", node->n}, {"arg", node_to_json(node->kids[0])}};
    case NodeKind::kGnDeriv:
      return json{{"kind", "gn_deriv"}, {"n", node->n}, {"arg", node_to_json(node->kids[0])}};
  }
  return json{};
}

}  // namespace

json function_to_json(const AnalyticFn& f) { return node_to_json(f.node()); }

json tail_profile_to_json(const TailProfile& t) {
  return json{{"verdict", to_string(t.verdict)},
              {"annulus_integrals", t.annulus_integrals},
              {"ratio_min", t.ratio_min},
              {"ratio_max", t.ratio_max},
              {"ratio_mean", t.ratio_mean},
              {"tail_estimate", t.tail_estimate},
              {"window", t.window},
              {"note", t.note}};
}

json certificate_to_json(const Certificate& c) {
  json pre = json::array();
  for (const auto& p : c.preconditions)
    pre.push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
  json q = json::array();
  for (const auto& x : c.quantities)
    q.push_back({{"name", x.name}, {"value", x.value}, {"tail", tail_profile_to_json(x.tail)}});
  return json{{"verdict", to_string(c.verdict)},
              {"rule", c.rule},
              {"preconditions", pre},
              {"quantities", q},
              {"membership_certified", c.membership_certified},
              {"equivalence_list_applies", c.equivalence_list_applies},
              {"detail", c.detail}};
}

json inequality_report_to_json(const InequalityReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples_lr) samples.push_back({{"lhs", s[0]}, {"rhs", s[1]}});
  return json{{"lemma", r.lemma},
              {"sample_description", r.sample_description},
              {"status", to_string(r.status)},
              {"samples", samples},
              {"max_violation", r.max_violation},
              {"tolerance", r.tolerance},
              {"notes", r.notes}};
}

json local_dirichlet_to_json(const LocalDirichletResult& r) {
  return json{{"area_value", r.area_value},
              {"area_divergent", r.area_divergent},
              {"area_error", r.area_error},
              {"area_tail", tail_profile_to_json(r.area_tail)},
              {"boundary_available", r.boundary_available},
              {"boundary_converged", r.boundary_converged},
              {"boundary_value", r.boundary_value},
              {"boundary_error", r.boundary_error},
              {"discrepancy", r.discrepancy},
              {"boundary_point", {{"re", r.boundary_point.real()}, {"im", r.boundary_point.imag()}}},
              {"limit_value_used", {{"re", r.limit_value_used.real()}, {"im", r.limit_value_used.imag()}}},
              {"limit_residual", r.limit_residual},
              {"note", r.note}};
}

}  // namespace dmu
