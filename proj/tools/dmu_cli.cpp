// Command-line front end: reads a JSON problem file, dispatches the requested
// computation, and writes a JSON report (CSV for curve data). Exit codes:
//   0  computed (including FAIL reports and decisive certificates)
//   1  input or schema errors
//   2  precondition failures, SKIP outcomes, inconclusive certificates
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "dmu/certify.hpp"
#include "dmu/iterlog.hpp"
#include "dmu/json_io.hpp"
#include "dmu/version.hpp"

namespace {

using dmu::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("could not open '" + path + "'");
  json j;
  in >> j;
  return j;
}

void check_problem_keys(const json& j, const std::vector<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw dmu::SchemaError("/" + it.key(), "unknown field");
  }
}

void require_fields(const json& j, const std::vector<std::string>& required) {
  for (const auto& k : required)
    if (!j.contains(k)) throw dmu::SchemaError("/" + k, "missing required field");
}

double get_number_at(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw dmu::SchemaError("/" + key, "expected a number");
  return j.at(key).get<double>();
}

int get_int_at(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer()) throw dmu::SchemaError("/" + key, "expected an integer");
  return j.at(key).get<int>();
}

dmu::cplx zeta_from_problem(const json& j) {
  if (j.contains("zeta_angle")) return std::polar(1.0, get_number_at(j, "zeta_angle"));
  if (j.contains("zeta")) {
    dmu::cplx z = dmu::complex_from_json(j.at("zeta"), "/zeta");
    if (std::abs(std::abs(z) - 1.0) > 1e-10)
      throw dmu::SchemaError("/zeta", "boundary point must satisfy |zeta| = 1");
    return z / std::abs(z);
  }
  throw dmu::SchemaError("/zeta_angle", "missing required field");
}

dmu::QuadratureSpec spec_for_run(const json& problem, const std::string& spec_path) {
  dmu::QuadratureSpec spec;
  if (problem.contains("quadrature")) spec = dmu::spec_from_json(problem.at("quadrature"));
  if (!spec_path.empty()) spec = dmu::spec_from_json(load_json(spec_path), "/");
  return spec;
}

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("could not open '" + out_path + "' for writing");
    out << text;
  }
}

json report_shell(const std::string& command, const dmu::QuadratureSpec& spec) {
  return json{{"command", command}, {"version", dmu::kVersion}, {"spec", dmu::spec_to_json(spec)}};
}

int exit_code_for_certificate(const dmu::Certificate& cert) {
  if (!cert.preconditions_ok()) return 2;
  return cert.verdict == dmu::Verdict::kInconclusive ? 2 : 0;
}

int exit_code_for_report(const dmu::InequalityReport& rep) { return rep.skipped() ? 2 : 0; }

void write_seed_corpus(const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (out_dir.empty()) throw std::runtime_error("--seed-corpus requires --out <directory>");
  fs::create_directories(out_dir);
  auto half = json{{"kind", "power"}, {"lambda", 1.0}, {"alpha", 1.0}, {"scale", 0.5}};
  auto half_sqrt = json{{"kind", "power"}, {"lambda", 1.0}, {"alpha", 0.5}, {"scale", 0.5}};
  auto halfplane = json{{"kind", "quotient"},
                        {"num", {{"kind", "polynomial"}, {"coeffs", {1.0, 1.0}}}},
                        {"den", {{"kind", "power"}, {"lambda", 1.0}, {"alpha", 1.0}}}};
  std::vector<std::pair<std::string, json>> files = {
      {"poisson_lebesgue.json", {{"measure", "lebesgue"}, {"z", {{"re", 0.5}, {"im", 0.0}}}}},
      {"norm_half_lebesgue.json", {{"function", half}, {"measure", "lebesgue"}}},
      {"localdir_half_at_pi.json", {{"function", half}, {"zeta_angle", dmu::kPi}}},
      {"certify_log_half_lebesgue.json", {{"function", half}, {"measure", "lebesgue"}}},
      {"certify_log_half_atom_pi.json",
       {{"function", half}, {"measure", "dirac(3.14159265358979324)"}}},
      {"certify_iterlog_half_lebesgue_n2.json",
       {{"function", half}, {"measure", "lebesgue"}, {"n", 2}}},
      {"certify_growth_half_n2.json", {{"function", half}, {"n", 2}}},
      {"verify_cutoff_half.json",
       {{"lemma", "cutoff"}, {"h", half}, {"zeta_angle", dmu::kPi}, {"n", 2.0}}},
      {"verify_cutoff_half_sqrt.json",
       {{"lemma", "cutoff"}, {"h", half_sqrt}, {"zeta_angle", dmu::kPi}, {"n", 10.0}}},
      {"verify_norm_half_atom.json",
       {{"lemma", "norm"},
        {"g", {{"kind", "constant"}, {"value", 1.0}}},
        {"h", half},
        {"measure", "dirac(3.14159265358979324)"},
        {"n", 2.0}}},
      {"verify_gn_bound_halfplane.json",
       {{"lemma", "gn-bound"}, {"f", halfplane}, {"n_max", 4}}},
      {"figure1.json", {{"count", 10000}, {"t_min", 1e-4}, {"t_max", 1e4}}},
  };
  for (const auto& [name, content] : files) {
    std::ofstream out(fs::path(out_dir) / name);
    out << content.dump(2) << "\n";
  }
  std::cout << "wrote " << files.size() << " problem files to " << out_dir << "\n";
}

int run_verify(const json& problem, const dmu::QuadratureSpec& spec,
               const std::string& out_path) {
  require_fields(problem, {"lemma"});
  if (!problem.at("lemma").is_string()) throw dmu::SchemaError("/lemma", "expected a string");
  std::string lemma = problem.at("lemma").get<std::string>();
  json report = report_shell("verify", spec);
  dmu::InequalityReport rep;
  if (lemma == "h1h2") {
    check_problem_keys(problem,
                       {"lemma", "g", "h1", "h2", "zeta_angle", "zeta", "c", "quadrature"});
    require_fields(problem, {"g", "h1", "h2", "c"});
    auto g = dmu::function_from_json(problem.at("g"), "/g");
    auto h1 = dmu::function_from_json(problem.at("h1"), "/h1");
    auto h2 = dmu::function_from_json(problem.at("h2"), "/h2");
    rep = dmu::verify_h1h2(g, h1, h2, zeta_from_problem(problem), get_number_at(problem, "c"),
                           spec);
  } else if (lemma == "cutoff") {
    check_problem_keys(problem, {"lemma", "h", "zeta_angle", "zeta", "n", "quadrature"});
    require_fields(problem, {"h", "n"});
    auto h = dmu::function_from_json(problem.at("h"), "/h");
    rep = dmu::verify_cutoff(h, zeta_from_problem(problem), get_number_at(problem, "n"), spec);
  } else if (lemma == "norm") {
    check_problem_keys(problem, {"lemma", "g", "h", "measure", "n", "quadrature"});
    require_fields(problem, {"g", "h", "measure", "n"});
    auto g = dmu::function_from_json(problem.at("g"), "/g");
    auto h = dmu::function_from_json(problem.at("h"), "/h");
    auto mu = dmu::measure_from_json(problem.at("measure"));
    rep = dmu::verify_norm_ineq(g, h, mu, get_number_at(problem, "n"), spec);
  } else if (lemma == "gn-bound") {
    check_problem_keys(
        problem, {"lemma", "f", "n_max", "radial_grid", "angular_grid", "r_max", "quadrature"});
    require_fields(problem, {"f", "n_max"});
    auto f = dmu::function_from_json(problem.at("f"), "/f");
    int rg = problem.contains("radial_grid") ? get_int_at(problem, "radial_grid") : 100;
    int ag = problem.contains("angular_grid") ? get_int_at(problem, "angular_grid") : 100;
    double rmax = problem.contains("r_max") ? get_number_at(problem, "r_max") : 1.0 - 1e-6;
    rep = dmu::verify_gn_bound(f, get_int_at(problem, "n_max"), spec, rg, ag, rmax);
  } else {
    throw dmu::SchemaError("/lemma", "unknown lemma '" + lemma + "'");
  }
  report["result"] = dmu::inequality_report_to_json(rep);
  emit(report, out_path);
  return exit_code_for_report(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerics for harmonically weighted Dirichlet spaces"};
  app.set_version_flag("--version", dmu::kVersion);

  std::string problem_path, out_path, spec_path;
  bool seed_corpus = false;
  app.add_option("--problem", problem_path, "problem file (JSON)");
  app.add_option("--out", out_path, "output path (JSON report; CSV for figure1)");
  app.add_option("--spec", spec_path, "quadrature spec file (overrides the problem's)");
  app.add_flag("--seed-corpus", seed_corpus, "write the built-in problem corpus to --out");

  const std::vector<std::string> commands = {"poisson",     "norm",            "localdir",
                                             "certify-log", "certify-iterlog", "certify-growth",
                                             "verify",      "figure1"};
  for (const auto& c : commands) app.add_subcommand(c, "")->fallthrough();
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (seed_corpus) {
      write_seed_corpus(out_path);
      return 0;
    }
    std::string command;
    for (const auto& c : commands)
      if (app.get_subcommand(c)->parsed()) command = c;
    if (command.empty()) {
      std::cerr << "error: no command given (see --help)\n";
      return 1;
    }

    json problem = json::object();
    if (!problem_path.empty()) problem = load_json(problem_path);
    if (!problem.is_object()) throw dmu::SchemaError("/", "problem file must hold a JSON object");
    dmu::QuadratureSpec spec = spec_for_run(problem, spec_path);

    if (command == "poisson") {
      check_problem_keys(problem, {"measure", "z", "quadrature"});
      require_fields(problem, {"measure", "z"});
      auto mu = dmu::measure_from_json(problem.at("measure"));
      dmu::cplx z = dmu::complex_from_json(problem.at("z"), "/z");
      json report = report_shell(command, spec);
      report["result"] = json{{"value", dmu::poisson_integral(mu, z, spec)},
                              {"total_mass", dmu::total_mass(mu, spec)}};
      emit(report, out_path);
      return 0;
    }
    if (command == "norm") {
      check_problem_keys(problem, {"function", "measure", "quadrature"});
      require_fields(problem, {"function", "measure"});
      auto f = dmu::function_from_json(problem.at("function"));
      auto mu = dmu::measure_from_json(problem.at("measure"));
      double h2 = dmu::h2_norm_sq(f, spec);
      auto semi = dmu::dmu_seminorm(f, mu, spec);
      json report = report_shell(command, spec);
      report["result"] = json{{"h2_norm_sq", h2},
                              {"seminorm_sq", semi.value},
                              {"norm_sq", h2 + semi.value},
                              {"seminorm_tail", dmu::tail_profile_to_json(semi.tail)}};
      emit(report, out_path);
      return 0;
    }
    if (command == "localdir") {
      check_problem_keys(problem, {"function", "zeta_angle", "zeta", "quadrature"});
      require_fields(problem, {"function"});
      auto f = dmu::function_from_json(problem.at("function"));
      auto r = dmu::local_dirichlet_boundary(f, zeta_from_problem(problem), spec);
      json report = report_shell(command, spec);
      report["result"] = dmu::local_dirichlet_to_json(r);
      emit(report, out_path);
      return 0;
    }
    if (command == "certify-log" || command == "certify-iterlog" ||
        command == "certify-growth") {
      dmu::Certificate cert;
      if (command == "certify-log") {
        check_problem_keys(problem, {"function", "measure", "quadrature"});
        require_fields(problem, {"function", "measure"});
        cert = dmu::certify_log(dmu::function_from_json(problem.at("function")),
                                dmu::measure_from_json(problem.at("measure")), spec);
      } else if (command == "certify-iterlog") {
        check_problem_keys(problem, {"function", "measure", "n", "quadrature"});
        require_fields(problem, {"function", "measure", "n"});
        cert = dmu::certify_iterlog(dmu::function_from_json(problem.at("function")),
                                    dmu::measure_from_json(problem.at("measure")),
                                    get_int_at(problem, "n"), spec);
      } else {
        check_problem_keys(problem, {"function", "n", "quadrature"});
        require_fields(problem, {"function", "n"});
        cert = dmu::certify_growth(dmu::function_from_json(problem.at("function")),
                                   get_int_at(problem, "n"), spec);
      }
      json report = report_shell(command, spec);
      report["result"] = dmu::certificate_to_json(cert);
      emit(report, out_path);
      return exit_code_for_certificate(cert);
    }
    if (command == "verify") return run_verify(problem, spec, out_path);
    if (command == "figure1") {
      check_problem_keys(problem, {"count", "t_min", "t_max", "quadrature"});
      int count = problem.contains("count") ? get_int_at(problem, "count") : 10000;
      double t_min = problem.contains("t_min") ? get_number_at(problem, "t_min") : 1e-4;
      double t_max = problem.contains("t_max") ? get_number_at(problem, "t_max") : 1e4;
      if (out_path.empty()) throw std::runtime_error("figure1 requires --out <csv path>");
      auto rows = dmu::iterlog_curves(count, t_min, t_max);
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("could not open '" + out_path + "' for writing");
      out << dmu::iterlog_curves_csv(rows);
      bool all_ok = true;
      for (const auto& r : rows) all_ok = all_ok && r.step_bound_ok;
      json report = report_shell(command, spec);
      report["result"] = json{{"rows", count}, {"csv", out_path}, {"step_bound_all_ok", all_ok}};
      std::cout << report.dump(2) << "\n";
      return 0;
    }
    std::cerr << "error: unknown command\n";
    return 1;
  } catch (const dmu::SchemaError& e) {
    std::cerr << "input error at " << e.what() << "\n";
    return 1;
  } catch (const dmu::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
