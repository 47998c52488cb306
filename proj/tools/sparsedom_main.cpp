// sparsedom command line: dyadic decompositions, shifts, weight constants,
// two-weight verification and the seeded property suites.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sparsedom/json_io.hpp"
#include "sparsedom/lerner.hpp"
#include "sparsedom/shifts.hpp"
#include "sparsedom/suites.hpp"
#include "sparsedom/two_weight.hpp"
#include "sparsedom/weights.hpp"

namespace {

using namespace sparsedom;

void write_output(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    save_json_file(j, path);
  }
}

// accepts "3" or "0..6"
std::pair<int, int> parse_k_range(const std::string& spec) {
  auto dots = spec.find("..");
  if (dots == std::string::npos) {
    int k = std::stoi(spec);
    return {k, k};
  }
  return {std::stoi(spec.substr(0, dots)), std::stoi(spec.substr(dots + 2))};
}

int cmd_lerner(const std::string& input, double lambda, const std::string& out_path) {
  StepFunction f = function_from_json(load_json_file(input));
  double lam = lambda > 0 ? lambda : lerner_lambda(f.grid().dim());
  LernerDecomposition dec = decompose(f, lam);
  DominationReport rep = verify_domination(f, dec);
  json j = decomposition_to_json(dec, f.grid(), rep.min_slack);
  j["sparseness_ok"] = rep.sparseness_ok;
  write_output(j, out_path);
  return 0;
}

int cmd_shift_apply(const std::string& coeffs_path, const std::string& input,
                    const std::string& out_path, const std::string& format) {
  ShiftCoefficients c = coefficients_from_json(load_json_file(coeffs_path));
  StepFunction f = function_from_json(load_json_file(input));
  StepFunction g = apply_shift(c, f);
  if (format == "csv") {
    if (out_path.empty() || out_path == "-") {
      write_function_csv(g, std::cout);
    } else {
      std::ofstream os(out_path);
      write_function_csv(g, os);
    }
    return 0;
  }
  write_output(function_to_json(g), out_path);
  return 0;
}

int cmd_sharpness(const std::string& krange, int depth) {
  auto [klo, khi] = parse_k_range(krange);
  std::printf("%2s  %-22s  %-22s  %s\n", "k", "l1_norm", "weak_l1_norm", "ratio");
  bool all_exact = true;
  for (int k = klo; k <= khi; ++k) {
    int d = depth > 0 ? depth : 2 * k;
    ExtremalPair pair = extremal_family(k, d);
    double l1 = l1_norm(pair.f);
    double wn = weak_l1_norm(apply_skplus_adjoint(pair.spec, pair.f));
    double ratio = wn / l1;
    all_exact = all_exact && l1 == 1.0 && wn == double(k + 1);
    std::printf("%2d  %-22s  %-22s  %s\n", k, format_double(l1).c_str(),
                format_double(wn).c_str(), format_double(ratio).c_str());
  }
  return all_exact ? 0 : 1;
}

int cmd_constants(const std::string& weight_path, const std::string& sigma_path, double p,
                  const std::string& out_path) {
  Weight w(function_from_json(load_json_file(weight_path)));
  Weight sigma = sigma_path.empty()
                     ? dual_weight(w, p)
                     : Weight(function_from_json(load_json_file(sigma_path)));
  json j;
  j["A_p"] = ap_constant(w, sigma, p);
  j["A_infty_w"] = ainfty_constant(w);
  j["A_infty_sigma"] = ainfty_constant(sigma);
  write_output(j, out_path);
  return 0;
}

int cmd_two_weight(const std::string& coeffs_path, const std::string& sigma_path,
                   const std::string& omega_path, double p, double q,
                   const std::string& out_path) {
  ShiftCoefficients c = coefficients_from_json(load_json_file(coeffs_path));
  Weight sigma(function_from_json(load_json_file(sigma_path)));
  Weight omega(function_from_json(load_json_file(omega_path)));
  LsuReport rep = verify_lsu(c, sigma, omega, p, q);
  json j;
  j["norm"] = rep.norm;
  j["norm_exact"] = rep.norm_exact;
  j["T"] = rep.test;
  j["Tstar"] = rep.test_dual;
  j["upper_ok"] = rep.upper_ok;
  j["lower_ok"] = rep.lower_ok;
  j["margins"] = {{"upper", rep.upper_margin}, {"lower", rep.lower_margin}};
  write_output(j, out_path);
  return (rep.upper_ok && rep.lower_ok) ? 0 : 1;
}

int cmd_suite(ExperimentConfig cfg, const std::string& out_path,
              const std::string& format) {
  if (cfg.selectors.empty()) cfg.selectors = suite_names();
  SuiteReport report = run_suite(cfg);
  if (format == "csv") {
    if (out_path.empty() || out_path == "-") {
      emit_csv(report, std::cout);
    } else {
      std::ofstream os(out_path);
      emit_csv(report, os);
    }
  } else {
    write_output(report_to_json(report), out_path);
  }
  long viol = report.total_violations();
  std::cerr << "suites: " << report.checks.size() << " checks, " << viol << " violations\n";
  return viol == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic sparse domination toolkit"};
  app.require_subcommand(1);

  // lerner
  std::string in_path, out_path, coeffs_path, sigma_path, omega_path, format = "json";
  double lambda = 0.0;
  auto* lerner_cmd = app.add_subcommand("lerner", "local oscillation decomposition");
  lerner_cmd->add_option("--input", in_path, "step function JSON")->required();
  lerner_cmd->add_option("--lambda", lambda, "oscillation fraction (default 2^-d-2)");
  lerner_cmd->add_option("--out", out_path, "output path (- for stdout)");

  // shift-apply
  auto* shift_cmd = app.add_subcommand("shift-apply", "apply a positive dyadic shift");
  shift_cmd->add_option("--coeffs", coeffs_path, "coefficients JSON")->required();
  shift_cmd->add_option("--input", in_path, "step function JSON")->required();
  shift_cmd->add_option("--out", out_path, "output path (- for stdout)");
  shift_cmd->add_option("--format", format, "json|csv");

  // sharpness
  std::string krange = "0..6";
  int depth = 0;
  auto* sharp_cmd = app.add_subcommand("sharpness", "adjoint shift identity table");
  sharp_cmd->add_option("--k", krange, "complexity, single value or A..B");
  sharp_cmd->add_option("--depth", depth, "grid depth (default 2k)");

  // constants
  double p = 2.0, q = 2.0;
  auto* const_cmd = app.add_subcommand("constants", "Muckenhoupt constants of a weight");
  const_cmd->add_option("--weight", in_path, "weight JSON")->required();
  const_cmd->add_option("--sigma", sigma_path, "second weight JSON (default dual w^{1-p'})");
  const_cmd->add_option("--p", p, "exponent");
  const_cmd->add_option("--out", out_path, "output path (- for stdout)");

  // two-weight
  auto* tw_cmd = app.add_subcommand("two-weight", "testing constants and norm sandwich");
  tw_cmd->add_option("--coeffs", coeffs_path, "coefficients JSON")->required();
  tw_cmd->add_option("--sigma", sigma_path, "weight JSON")->required();
  tw_cmd->add_option("--omega", omega_path, "weight JSON")->required();
  tw_cmd->add_option("--p", p, "exponent p");
  tw_cmd->add_option("--q", q, "exponent q");
  tw_cmd->add_option("--out", out_path, "output path (- for stdout)");

  // suite
  ExperimentConfig cfg;
  auto* suite_cmd = app.add_subcommand("suite", "seeded property suites");
  suite_cmd->add_option("selectors", cfg.selectors,
                        "suites to run (default all): " + [] {
                          std::string s;
                          for (const auto& n : sparsedom::suite_names()) s += n + " ";
                          return s;
                        }());
  suite_cmd->add_option("--seed", cfg.seed, "master seed");
  suite_cmd->add_option("--trials", cfg.trials, "trial count override (0 = default)");
  suite_cmd->add_option("--depth", cfg.depth, "depth override");
  suite_cmd->add_option("--d", cfg.dimension, "dimension override");
  suite_cmd->add_option("--p", cfg.p, "exponent p");
  suite_cmd->add_option("--q", cfg.q, "exponent q");
  suite_cmd->add_option("--threads", cfg.threads, "worker threads (or SPARSEDOM_THREADS)");
  suite_cmd->add_option("--out", out_path, "output path (- for stdout)");
  suite_cmd->add_option("--format", format, "json|csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lerner_cmd->parsed()) return cmd_lerner(in_path, lambda, out_path);
    if (shift_cmd->parsed()) return cmd_shift_apply(coeffs_path, in_path, out_path, format);
    if (sharp_cmd->parsed()) return cmd_sharpness(krange, depth);
    if (const_cmd->parsed()) return cmd_constants(in_path, sigma_path, p, out_path);
    if (tw_cmd->parsed())
      return cmd_two_weight(coeffs_path, sigma_path, omega_path, p, q, out_path);
    if (suite_cmd->parsed()) return cmd_suite(cfg, out_path, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
