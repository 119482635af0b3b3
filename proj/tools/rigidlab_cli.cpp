// rigidlab: one subcommand per construction; writes CSV, JSON or a matrix file.
//
// Exit codes: 0 success, 1 I/O error, 2 configuration or domain error,
// 3 budget or cap exceeded.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rigidlab/errors.hpp"
#include "rigidlab/experiment.hpp"

namespace {

using rigidlab::ExperimentConfig;

struct Binding {
  CLI::Option* option;
  std::function<void(ExperimentConfig&, const ExperimentConfig&)> copy;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<Binding> add_options(CLI::App* sub, ExperimentConfig& flags, std::string& config_path) {
  std::vector<Binding> b;
  auto bind = [&](CLI::Option* opt, auto member) {
    b.push_back({opt, [member](ExperimentConfig& dst, const ExperimentConfig& src) { dst.*member = src.*member; }});
  };
  bind(sub->add_option("--in", flags.inputs, "input matrix file"), &ExperimentConfig::inputs);
  bind(sub->add_option("--base", flags.base, "named matrix: h<k>, m<k>, ones<N>, random<N>, lowrank<N>"),
       &ExperimentConfig::base);
  bind(sub->add_option("--p", flags.p, "prime modulus"), &ExperimentConfig::p);
  bind(sub->add_option("--rank", flags.rank, "target rank r"), &ExperimentConfig::rank);
  bind(sub->add_option("--n", flags.n, "power, size or order"), &ExperimentConfig::n);
  bind(sub->add_option("--k", flags.k, "prefix length or block order"), &ExperimentConfig::k);
  bind(sub->add_option("--seed", flags.seed, "64-bit rng seed"), &ExperimentConfig::seed);
  bind(sub->add_option("--samples", flags.samples, "sample count"), &ExperimentConfig::samples);
  bind(sub->add_flag("--exhaustive", flags.exhaustive, "enumerate instead of sampling"), &ExperimentConfig::exhaustive);
  bind(sub->add_option("--budget", flags.budget, "solver work budget"), &ExperimentConfig::budget);
  bind(sub->add_option("--out", flags.out, "output path (default stdout)"), &ExperimentConfig::out);
  bind(sub->add_option("--format", flags.format, "csv | json (gen also: mat)"), &ExperimentConfig::format);
  bind(sub->add_option("--mode", flags.mode, "rigidity: boolean|regular|search; schedule: kron|maj"),
       &ExperimentConfig::mode);
  bind(sub->add_option("--q", flags.q, "block size q"), &ExperimentConfig::q);
  bind(sub->add_option("--d", flags.d, "circuit depth"), &ExperimentConfig::d);
  bind(sub->add_option("--R", flags.rigidity, "rigidity value or lower bound"), &ExperimentConfig::rigidity);
  bind(sub->add_option("--eps", flags.eps, "rank exponent slack"), &ExperimentConfig::eps);
  bind(sub->add_option("--beta", flags.beta, "rank multiplier"), &ExperimentConfig::beta);
  bind(sub->add_option("--c", flags.c, "schedule exponent"), &ExperimentConfig::c);
  bind(sub->add_option("--delta", flags.delta, "entry error probability"), &ExperimentConfig::delta);
  sub->add_option("--config", config_path, "JSON config; explicit flags override it");
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix rigidity experiments"};
  app.set_version_flag("--version", std::string("rigidlab ") + rigidlab::version());
  app.require_subcommand(1);

  ExperimentConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::App*, std::vector<Binding>>> subs;
  const std::vector<std::pair<std::string, std::string>> help = {
      {"gen", "write a named matrix"},
      {"rank", "rank over F_p"},
      {"rigidity", "exact rigidity or rank-1 search"},
      {"lift", "lift low-rank F_p matrices to the cyclotomic field"},
      {"spectral-bound", "singular-value rigidity lower bound"},
      {"eigs", "eigenvalues of the distance matrix M_n"},
      {"amplify-kron", "Kronecker amplification with seed search"},
      {"amplify-maj", "Majority amplification via the prefix construction"},
      {"circuit-size", "synchronous circuit size exponent"},
      {"obstruction", "rigidity obstruction inequality"},
      {"schedule", "parameter schedule for the conditional statements"}};
  for (const auto& [name, text] : help) {
    CLI::App* sub = app.add_subcommand(name, text);
    subs.emplace_back(sub, add_options(sub, flags, config_path));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& [sub, bindings] : subs) {
      if (!sub->parsed()) continue;
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = rigidlab::config_from_json(read_file(config_path));
      if (!cfg.subcommand.empty() && cfg.subcommand != sub->get_name())
        throw rigidlab::ConfigError("config subcommand '" + cfg.subcommand + "' does not match '" + sub->get_name() + "'");
      cfg.subcommand = sub->get_name();
      for (const auto& b : bindings)
        if (b.option->count() > 0) b.copy(cfg, flags);
      const auto artifact = rigidlab::run_experiment(cfg);
      rigidlab::write_artifact(artifact, cfg, std::cout);
    }
  } catch (const rigidlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rigidlab::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rigidlab::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
