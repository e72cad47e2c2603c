// Command line driver: runs or validates experiment configurations.
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "orbitcount/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mapping class group orbit counting on hyperbolic surfaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string resume_path;
  std::string out_prefix;
  int threads = 0;
  double tolerance = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment configuration (JSON)")->required();
    cmd->add_option("--resume", resume_path, "checkpoint path prefix for resumable runs");
    cmd->add_option("--threads", threads, "worker threads (default: ORBITCOUNT_THREADS or 1)");
    cmd->add_option("--tolerance", tolerance, "numeric tolerance override");
    cmd->add_option("--out", out_prefix, "artifact path prefix override");
  };

  CLI::App* run = app.add_subcommand("run", "execute the experiment named in the config");
  add_common(run);
  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("--config", config_path, "experiment configuration (JSON)")->required();

  // experiment names as direct subcommands, checked against the config
  std::vector<std::string> experiment_names{"length",   "intersect", "orbit-count",      "m-estimate",
                                            "ratio",    "exponent",  "thurston-distance"};
  std::vector<CLI::App*> direct;
  for (const auto& name : experiment_names) {
    CLI::App* cmd = app.add_subcommand(name, "run the " + name + " experiment");
    add_common(cmd);
    direct.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      auto rep = orbitcount::validate_config(config_path);
      for (const auto& e : rep.errors) std::cout << "error: " << e << '\n';
      for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
      if (!rep.resource_estimate.empty()) std::cout << "estimate: " << rep.resource_estimate << '\n';
      std::cout << (rep.ok ? "ok" : "invalid") << '\n';
      return rep.ok ? 0 : 1;
    }

    orbitcount::RunOverrides ov;
    if (threads > 0) ov.threads = threads;
    if (tolerance > 0) ov.tolerance = tolerance;
    if (!resume_path.empty()) ov.resume = resume_path;
    if (!out_prefix.empty()) ov.out = out_prefix;

    for (std::size_t i = 0; i < direct.size(); ++i) {
      if (direct[i]->parsed()) {
        auto j = orbitcount::cfg::load(config_path);
        std::string configured = orbitcount::cfg::field(j, "experiment").get<std::string>();
        if (configured != experiment_names[i])
          throw orbitcount::config_error("config names experiment '" + configured +
                                         "' but the subcommand asked for '" + experiment_names[i] + "'");
        break;
      }
    }

    auto artifacts = orbitcount::run_experiment(config_path, ov);
    for (const auto& a : artifacts) std::cout << a << '\n';
    return 0;
  } catch (const orbitcount::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
}
