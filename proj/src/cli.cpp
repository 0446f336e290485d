#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "twrc/errors.hpp"
#include "twrc/harness.hpp"

namespace twrc {
namespace {

struct SubcommandSpec {
  const char* name;
  const char* kind;
  const char* blurb;
};

constexpr SubcommandSpec kSubcommands[] = {
    {"per-sweep", "per_sweep", "packet error rate across the uplink gain-ratio grid"},
    {"ser-sweep", "ser_sweep", "raw symbol error rate across Eb/N0"},
    {"theory-vs-sim", "theory_vs_sim", "simulated SER against the closed-form averages"},
    {"queue", "queue", "Markov queue averages against event simulation"},
    {"select-probs", "select_probs", "scheme selection frequencies against closed forms"},
};

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"two-way relay channel laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed = 0;
  long packets = 0;
  for (const auto& spec : kSubcommands) {
    auto* sub = app.add_subcommand(spec.name, spec.blurb);
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--seed", seed, "base RNG seed");
    sub->add_option("--packets", packets, "trials per sweep point");
    sub->add_option("--out", out_path, "output CSV path (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    std::string kind;
    for (const auto& spec : kSubcommands)
      if (sub->get_name() == spec.name) kind = spec.kind;

    ExperimentConfig cfg = default_config(kind);
    if (sub->count("--config") > 0) load_config_file(cfg, config_path);
    if (sub->count("--seed") > 0) cfg.seed = seed;
    if (sub->count("--packets") > 0) cfg.packets = packets;

    std::string csv = run_experiment(cfg);
    if (sub->count("--out") > 0) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file: " + out_path);
      f << csv;
      f.flush();
      if (!f.good()) throw ConfigError("failed writing output file: " + out_path);
    } else {
      std::fwrite(csv.data(), 1, csv.size(), stdout);
      std::fflush(stdout);
    }
    return 0;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace twrc
