#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace twrc {

// Flat experiment configuration; kind-specific defaults come from
// default_config and any key can be overridden by config file or flags.
struct ExperimentConfig {
  std::string kind = "per_sweep";
  std::vector<std::string> protocols{"hdmf", "pnc", "dmf", "anc"};
  std::string modulation = "qpsk";
  long packets = 10000;  // delivery trials per point; SER kinds target packets*M symbols
  std::vector<double> ebn0_db{25.0};
  std::vector<double> ratio_grid;  // gain-ratio sweep, log10(E|h_BR|/E|h_AR|)
  std::string fading = "rayleigh";  // rayleigh | fixed
  bool reciprocity = true;
  bool noise_disabled = false;
  int symbols_per_packet = 128;
  double delta = 0.70710678118654752440;
  double anc_power_budget = 0.0;  // 0: match the constellation symbol energy
  std::uint64_t seed = 1;

  // queue experiment
  double lambda = 0.5;
  double slot_t = 1.0;
  std::array<double, 4> f{0.25, 0.25, 0.25, 0.25};
  int n_a = 64;
  int n_r = 32;
  int n_rate = 16;
  double queue_rho_db = 20.0;
  std::vector<double> eps_grid{0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  long slots = 1000000;
  long warmup = 100000;

  // selection-probability experiment (paired budget lists)
  std::vector<double> rho_a_db;
  std::vector<double> rho_b_db;
};

// 15 points spanning [-0.7, 0.7].
std::vector<double> default_ratio_grid();

// Kind-specific defaults; ConfigError on unknown kind.
ExperimentConfig default_config(const std::string& kind);

// key=value application; ConfigError on unknown keys or unparsable values.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value);
// Flat key=value file, '#' comments and blank lines ignored.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

// Complete CSV (header + rows) for the configured experiment. Deterministic:
// identical config and seed give identical bytes.
std::string run_experiment(const ExperimentConfig& cfg);

std::string run_per_sweep(const ExperimentConfig& cfg);
std::string run_ser_sweep(const ExperimentConfig& cfg);
std::string run_theory_vs_sim(const ExperimentConfig& cfg);
std::string run_queue_analysis(const ExperimentConfig& cfg);
std::string run_selection_probs(const ExperimentConfig& cfg);

const std::vector<std::string>& known_protocols();
// ConfigError when the name is not in known_protocols().
void protocol_known(const std::string& name);

// Error/trial counters for one sweep point.
struct PointTally {
  long trials = 0;
  long errors = 0;
  long symbols = 0;
  long symbol_errors = 0;
};

// Runs exchanges (MAC slot + BC slot, both directions where served) of the
// named protocol until the trial target is met. count_packets selects
// CRC-framed delivery counting; otherwise raw symbol errors are counted with
// genie scheme knowledge at the destinations.
PointTally simulate_point(const std::string& protocol, const ExperimentConfig& cfg,
                          double ebn0_db, double ratio, bool count_packets,
                          std::uint64_t stream);

int cli_main(int argc, char** argv);

}  // namespace twrc
