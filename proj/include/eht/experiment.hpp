#pragma once

#include "eht/ansatz.hpp"
#include "eht/config.hpp"
#include "eht/fitting.hpp"
#include "eht/measurements.hpp"
#include "eht/models.hpp"
#include "eht/states.hpp"

namespace eht {

// Deterministic builders from a validated config; every run stage below is
// a pure function of (config, seed).

SpinModel model_from(const ExperimentConfig& config);

// Reduced state of the configured partition, prepared per config.state on
// the full chain and traced down. Pure preparations never materialize the
// full-chain density matrix.
DensityMatrix subsystem_state(const ExperimentConfig& config);

AnsatzFamily family_from(const ExperimentConfig& config);

// Randomized-measurement synthesis of the configured budget on the
// subsystem state, seeded by config.seed.
Dataset synthesize_dataset(const ExperimentConfig& config);

}  // namespace eht
