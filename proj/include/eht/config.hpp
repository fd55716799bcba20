#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eht/ansatz.hpp"
#include "eht/fitting.hpp"
#include "eht/measurements.hpp"
#include "eht/models.hpp"

namespace eht {

// State preparation recipe for the full chain.
struct StatePrep {
  enum class Kind { ground, quench, thermal, product };
  Kind kind = Kind::ground;
  double t = 0.0;          // quench: evolution time in 1/J
  double b_initial = 0.0;  // quench: field of the preparation Hamiltonian
  double b_final = 0.0;    // quench: field of the evolution Hamiltonian
  double beta = 1.0;       // thermal: inverse temperature in 1/J
  std::string pattern;     // product: one '0'/'1' per site
};

std::string state_kind_name(StatePrep::Kind kind);
StatePrep::Kind state_kind_from_name(const std::string& name);

// Complete description of one experiment; everything downstream (state,
// dataset, ansatz, fit) is a deterministic function of this plus the seed.
struct ExperimentConfig {
  // Model: couplings J_ij = j/|i-j|^eta, or nearest-neighbor when the
  // range is "nearest_neighbor". Fields in units of J.
  int n_sites = 8;
  std::string range = "long_range";
  double eta = 2.5;
  double j = 1.0;
  double b = 0.88;
  std::string variant = "ising_xx";

  StatePrep state;
  std::vector<int> partition = {0, 1, 2, 3};

  int n_settings = 100;
  std::uint64_t n_shots = 150;
  std::string ensemble = "haar_su2";

  std::string ansatz = "deformed_ising_local";
  std::string attachment = "larger_index";
  std::vector<std::string> corrections;  // subset of {k1,k2,k3,k4}

  FitConfig fit;

  std::uint64_t seed = 1;
};

// JSON round trip. Parsing fills defaults for missing keys and rejects
// unknown keys so typos surface instead of silently reverting to defaults.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

ExperimentConfig load_config_file(const std::string& path);

// 16-hex-digit digest of the canonical (sorted-key) serialization; two
// configs hash equal iff every effective field matches.
std::string config_hash(const ExperimentConfig& config);

}  // namespace eht
