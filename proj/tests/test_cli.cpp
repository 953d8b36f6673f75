#include <arcpoly/experiment.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace arcpoly;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "arcpoly_test_cli" / name;
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field_of(const ExperimentConfig& c) {
  try {
    c.validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

ExperimentConfig small_ortho(const fs::path& out) {
  ExperimentConfig c;
  c.experiment_id = "ortho-check";
  c.degrees = parse_degrees("0:10");
  c.quad_nodes = 256;
  c.output_dir = out.string();
  return c;
}

} // namespace

TEST(ParseDegrees, Forms) {
  EXPECT_EQ(parse_degrees("8"), (std::vector<int>{8}));
  EXPECT_EQ(parse_degrees("4..256"), (std::vector<int>{4, 8, 16, 32, 64, 128, 256}));
  EXPECT_EQ(parse_degrees("4..20"), (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(parse_degrees("0:3"), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(parse_degrees("5, 1,3:4,1"), (std::vector<int>{1, 3, 4, 5}));
}

TEST(ParseDegrees, RejectsMalformedInput) {
  for (const char* s : {"", "a", "-1", "4..x", "0..8", "8..4", "5:2", "1.5", "9999999"})
    EXPECT_THROW(parse_degrees(s), ConfigError) << s;
  try {
    parse_degrees("x");
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "degrees");
  }
}

TEST(ParseAngle, Expressions) {
  EXPECT_DOUBLE_EQ(parse_angle("2.5"), 2.5);
  EXPECT_DOUBLE_EQ(parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_angle("pi/6"), pi / 6);
  EXPECT_DOUBLE_EQ(parse_angle("2pi/3"), 2 * pi / 3);
  EXPECT_DOUBLE_EQ(parse_angle(" 2*PI / 3 "), 2 * pi / 3);
  for (const char* s : {"", "pie", "pi*2", "x/2", "pi/"}) EXPECT_THROW(parse_angle(s), ConfigError) << s;
}

TEST(Config, ValidationNamesTheField) {
  ExperimentConfig c;
  c.experiment_id = "converge-theorem1";
  EXPECT_EQ(field_of(c), "");
  auto with = [&](auto edit) {
    ExperimentConfig d = c;
    edit(d);
    return field_of(d);
  };
  EXPECT_EQ(with([](auto& d) { d.experiment_id = "nope"; }), "experiment_id");
  EXPECT_EQ(with([](auto& d) { d.alpha = 0.0; }), "alpha");
  EXPECT_EQ(with([](auto& d) { d.alpha = pi; }), "alpha");
  EXPECT_EQ(with([](auto& d) { d.p = 1.0; }), "p");
  EXPECT_EQ(with([](auto& d) { d.p = INFINITY; }), "p");
  EXPECT_EQ(with([](auto& d) { d.degrees = {8, 4}; }), "degrees");
  EXPECT_EQ(with([](auto& d) { d.degrees = {8}; }), "degrees");
  EXPECT_EQ(with([](auto& d) { d.degrees = {-1, 4}; }), "degrees");
  EXPECT_EQ(with([](auto& d) { d.quad_nodes = -3; }), "quad_nodes");
  EXPECT_EQ(with([](auto& d) { d.quad_nodes = 8; }), "quad_nodes");
  EXPECT_EQ(with([](auto& d) { d.function_id = "nope"; }), "function_id");
  EXPECT_EQ(with([](auto& d) { d.pv_scheme = "nope"; }), "pv_scheme");
  EXPECT_EQ(with([](auto& d) { d.output_dir = ""; }), "output_dir");
  EXPECT_EQ(with([](auto& d) {
              d.experiment_id = "converge-theorem42";
              d.k_id = "nope";
            }),
            "k_id");
  EXPECT_EQ(with([](auto& d) {
              d.experiment_id = "para-bound";
              d.degrees = {0, 5};
            }),
            "degrees");
  // p matters only where an exponent is used
  EXPECT_EQ(with([](auto& d) {
              d.experiment_id = "ortho-check";
              d.p = 0.5;
            }),
            "");
}

TEST(Config, JsonMirrorsTheFields) {
  const auto j = nlohmann::json::parse(R"({
    "experiment_id": "converge-theorem42", "alpha": "pi/3", "p": 3, "degrees": "4..64",
    "quad_nodes": 600, "function_id": "trig", "k_id": "2+abs", "pv_scheme": "omega",
    "output_dir": "somewhere", "seed": 9, "assert": true, "plot": true})");
  const ExperimentConfig c = config_from_json(j);
  EXPECT_EQ(c.experiment_id, "converge-theorem42");
  EXPECT_DOUBLE_EQ(c.alpha, pi / 3);
  EXPECT_EQ(c.p, 3.0);
  EXPECT_EQ(c.degrees, (std::vector<int>{4, 8, 16, 32, 64}));
  EXPECT_EQ(c.quad_nodes, 600);
  EXPECT_EQ(c.k_id, "2+abs");
  EXPECT_EQ(c.pv_scheme, "omega");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_TRUE(c.assert_checks);
  EXPECT_TRUE(c.plot);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(config_from_json(to_json(c)).degrees, c.degrees);
  EXPECT_EQ(config_from_json(nlohmann::json::parse(R"({"degrees": [1, 2, 3]})")).degrees,
            (std::vector<int>{1, 2, 3}));
}

TEST(Config, JsonRejectsUnknownKeysAndWrongTypes) {
  auto field = [](const char* text) {
    try {
      config_from_json(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  EXPECT_EQ(field(R"({"alpah": 1.0})"), "alpah");
  EXPECT_EQ(field(R"({"p": "two"})"), "p");
  EXPECT_EQ(field(R"({"degrees": [1, "b"]})"), "degrees");
  EXPECT_EQ(field(R"({"seed": -1})"), "seed");
  EXPECT_EQ(field(R"({"assert": 1})"), "assert");
  EXPECT_EQ(field(R"([1, 2])"), "config");
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(RunExperiment, WritesCsvManifestAndPlot) {
  const fs::path out = scratch("artifacts");
  ExperimentConfig c = small_ortho(out);
  c.plot = true;
  const ExperimentResult r = run_experiment(c);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.files, (std::vector<std::string>{"ortho-check.csv", "ortho-check.svg", "manifest.json"}));
  const std::string csv = slurp(out / "ortho-check.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,n,gram_defect,quad_nodes");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_EQ(slurp(out / "ortho-check.svg").rfind("<svg", 0), 0u);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["version"], version);
  EXPECT_EQ(m["quad_nodes"], 256);
  EXPECT_EQ(m["pv_scheme"], "singularity-subtraction");
  EXPECT_EQ(m["seed"], 1);
  EXPECT_EQ(m["config"]["experiment_id"], "ortho-check");
  EXPECT_TRUE(m["empirical_constants"].contains("max_gram_defect"));
  EXPECT_TRUE(m["passed"].get<bool>());
  EXPECT_EQ(m["checks"][0]["name"], "gram_defect");
}

TEST(RunExperiment, CsvIsByteIdenticalAcrossRuns) {
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  ExperimentConfig c;
  c.experiment_id = "hilbert-ratio";
  c.function_id = "trig";
  c.seed = 5;
  c.quad_nodes = 64;
  c.output_dir = a.string();
  run_experiment(c);
  c.output_dir = b.string();
  run_experiment(c);
  const std::string ca = slurp(a / "hilbert-ratio.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b / "hilbert-ratio.csv"));
}

TEST(RunExperiment, SeedSelectsTheTrigonometricFunction) {
  ExperimentConfig c;
  c.experiment_id = "pv-crosscheck";
  c.function_id = "trig";
  c.seed = 3;
  c.output_dir = scratch("seed").string();
  const auto r = run_experiment(c);
  EXPECT_EQ(r.manifest["config"]["function_id"], "trig-3");
  EXPECT_EQ(r.manifest["seed"], 3);
}

TEST(RunExperiment, FailedCheckIsReported) {
  ExperimentConfig c = small_ortho(scratch("fail"));
  c.degrees = parse_degrees("0:40");
  c.quad_nodes = 16;
  const auto r = run_experiment(c);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.checks.at(0).passed);
  EXPECT_FALSE(r.manifest["passed"].get<bool>());
}

TEST(RunExperiment, UnwritableOutputIsAConfigError) {
  const fs::path file = scratch("not-a-dir");
  fs::create_directories(file.parent_path());
  std::ofstream(file) << "x";
  ExperimentConfig c = small_ortho(file);
  EXPECT_THROW(run_experiment(c), ConfigError);
}

#ifdef ARCPOLY_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ARCPOLY_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(CliExitCodes, SuccessConfigAssertionAndConvergence) {
  const std::string out = " --out " + scratch("cli").string();
  EXPECT_EQ(run_cli("--experiment ortho-check --degrees 0:10 --quad-nodes 256 --assert" + out), 0);
  EXPECT_EQ(run_cli("--experiment nope" + out), 2);
  EXPECT_EQ(run_cli("--experiment ortho-check --alpha 4" + out), 2);
  EXPECT_EQ(run_cli("--experiment ortho-check --bogus-flag" + out), 2);
  EXPECT_EQ(run_cli(out), 2);
  EXPECT_EQ(run_cli("--experiment ortho-check --degrees 0:40 --quad-nodes 16" + out), 0);
  EXPECT_EQ(run_cli("--experiment ortho-check --degrees 0:40 --quad-nodes 16 --assert" + out), 3);
  EXPECT_EQ(run_cli("--experiment pv-crosscheck --function bump --quad-nodes 16" + out), 4);
}

TEST(CliExitCodes, FlagsOverrideConfigFile) {
  const fs::path dir = scratch("cli-config");
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"experiment_id": "ortho-check", "degrees": "0:40", "quad_nodes": 16, "assert": true})";
  const std::string base = "--config " + cfg.string() + " --out " + (dir / "out").string();
  EXPECT_EQ(run_cli(base), 3);
  EXPECT_EQ(run_cli(base + " --quad-nodes 512"), 0);
  std::ofstream(cfg) << R"({"experiment_id": "ortho-check", "typo": 1})";
  EXPECT_EQ(run_cli(base), 2);
}
#endif
