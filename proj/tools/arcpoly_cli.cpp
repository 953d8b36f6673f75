// Command-line harness: runs one named experiment per invocation.
//
// Exit codes: 0 success, 1 unexpected error, 2 configuration error,
// 3 failed check under --assert, 4 numerical convergence failure.

#include <arcpoly/experiment.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
  using namespace arcpoly;

  CLI::App app{"Orthogonal polynomials on a circular arc: experiment harness", "arcpoly"};
  app.set_version_flag("--version", std::string(version));

  std::string experiment, alpha, degrees, function, k, pv_scheme, out, config_path;
  double p = 0.0;
  int quad_nodes = 0;
  std::uint64_t seed = 0;
  bool assert_checks = false, plot = false;

  std::string ids;
  for (const auto& id : experiment_ids()) ids += (ids.empty() ? "" : ", ") + id;
  auto* o_exp = app.add_option("--experiment", experiment, "Experiment id: " + ids);
  auto* o_alpha = app.add_option("--alpha", alpha, "Arc opening, e.g. 1.2, pi/2, 2pi/3");
  auto* o_p = app.add_option("--p", p, "Lebesgue exponent");
  auto* o_deg = app.add_option("--degrees", degrees, "Degrees: 8 | 4..256 (doubling) | 0:40 (contiguous) | lists");
  auto* o_quad = app.add_option("--quad-nodes", quad_nodes, "Quadrature resolution (0 selects the default)");
  auto* o_fun = app.add_option("--function", function,
                               "Test function: analytic, jump, singular, one, zero, poly3, bump, "
                               "endpoint-bump-<k>, trig, trig-<seed>");
  auto* o_k = app.add_option("--k", k, "Density of the perturbed measure: 1, 4, 2+sin, 2+abs");
  auto* o_pv = app.add_option("--pv-scheme", pv_scheme, "Principal value scheme: subtraction, exclusion, omega");
  auto* o_out = app.add_option("--out", out, "Output directory");
  auto* o_seed = app.add_option("--seed", seed, "Seed for randomized test functions");
  auto* o_assert = app.add_flag("--assert", assert_checks, "Exit with status 3 when a check fails");
  auto* o_plot = app.add_flag("--plot", plot, "Also write an SVG plot");
  app.add_option("--config", config_path, "JSON configuration file; flags override its entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (o_exp->count()) cfg.experiment_id = experiment;
    if (o_alpha->count()) cfg.alpha = parse_angle(alpha);
    if (o_p->count()) cfg.p = p;
    if (o_deg->count()) cfg.degrees = parse_degrees(degrees);
    if (o_quad->count()) cfg.quad_nodes = quad_nodes;
    if (o_fun->count()) cfg.function_id = function;
    if (o_k->count()) cfg.k_id = k;
    if (o_pv->count()) cfg.pv_scheme = pv_scheme;
    if (o_out->count()) cfg.output_dir = out;
    if (o_seed->count()) cfg.seed = seed;
    if (o_assert->count()) cfg.assert_checks = assert_checks;
    if (o_plot->count()) cfg.plot = plot;
    if (cfg.experiment_id.empty()) throw ConfigError("experiment_id", "no experiment given (use --experiment)");

    const ExperimentResult r = run_experiment(cfg);
    for (const auto& c : r.checks)
      std::printf("%-4s %s = %.6g (%s %.6g)\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.value,
                  c.inclusive ? "<=" : "<", c.threshold);
    for (const auto& f : r.files) std::printf("wrote %s/%s\n", cfg.output_dir.c_str(), f.c_str());
    if (cfg.assert_checks && !r.passed) return 3;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical convergence failure: " << e.what() << '\n';
    return 4;
  } catch (const IllConditionedError& e) {
    std::cerr << "numerical convergence failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
