#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "burkholder/cli.hpp"
#include "burkholder/error.hpp"

namespace {

using namespace burkholder;

// Output stream for --out, or stdout when empty.
std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto out = std::make_unique<std::ofstream>(path);
  if (!*out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

Experiment load_experiment(const std::string& path, const std::optional<std::uint64_t>& seed) {
  Config config = Config::load(path);
  if (seed) config.set("seed", std::to_string(*seed));
  return build_experiment(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Burkholder-potential online learning: run, verify and compare."};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all", strategies = "linearized,randomized";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool negative_control = false;
  bool serial = false;

  auto* run = app.add_subcommand("run", "play a configured learner and write the regret report CSV");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_path, "CSV output path (default stdout)");
  run->add_option("--seed", seed, "override the config seed");

  auto* ver = app.add_subcommand("verify", "run a verification suite and write the check report CSV");
  ver->add_option("--suite", suite, "p1, p2, p3, khintchine, mgf, supermartingale, necessity or all");
  ver->add_option("--seed", seed, "seed for all sampled checks");
  ver->add_option("--trials", trials, "trials (sampled suites) or trees (tree suites)");
  ver->add_option("--out", out_path, "CSV output path (default stdout)");
  ver->add_flag("--negative-control", negative_control, "check a deliberately corrupted matrix potential");
  ver->add_flag("--serial", serial, "disable parallel trials");

  auto* cmp = app.add_subcommand("compare", "run several strategies on one sequence");
  cmp->add_option("--config", config_path, "config file")->required();
  cmp->add_option("--strategies", strategies, "comma-separated: linearized, convex, randomized");
  cmp->add_option("--out", out_path, "CSV output path (default stdout)");
  cmp->add_option("--seed", seed, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  try {
    const auto file = open_out(out_path);
    std::ostream& csv = file ? static_cast<std::ostream&>(*file) : std::cout;
    if (*run) return cli::cmd_run(load_experiment(config_path, seed), csv, std::cerr);
    if (*cmp) {
      const Experiment e = load_experiment(config_path, seed);
      return cli::cmd_compare(e, cli::parse_strategies(strategies), csv, std::cerr);
    }
    suites::SuiteOptions options;
    options.seed = seed.value_or(1);
    options.trials = trials;
    options.negative_control = negative_control;
    options.exec = serial ? verify::Exec::serial : verify::Exec::parallel;
    if (!suites::is_suite(suite)) {
      std::cerr << "error: unknown suite '" << suite << "'\n";
      return cli::kUsage;
    }
    return cli::cmd_verify(suite, options, csv, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kFail;
  }
}
