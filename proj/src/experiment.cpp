#include "eht/experiment.hpp"

#include <stdexcept>

namespace eht {

namespace {

ModelVariant variant_from(const std::string& name) {
  if (name == "ising_xx") return ModelVariant::ising_xx;
  if (name == "exchange_xy") return ModelVariant::exchange_xy;
  throw std::invalid_argument("unknown model variant: " + name);
}

SpinModel model_with_field(const ExperimentConfig& cfg, double field) {
  if (cfg.range == "nearest_neighbor") {
    return SpinModel::nearest_neighbor(cfg.n_sites, field, cfg.j,
                                       variant_from(cfg.variant));
  }
  return SpinModel::long_range(cfg.n_sites, cfg.eta, field, cfg.j,
                               variant_from(cfg.variant));
}

}  // namespace

SpinModel model_from(const ExperimentConfig& cfg) {
  const double field =
      cfg.state.kind == StatePrep::Kind::quench ? cfg.state.b_final : cfg.b;
  return model_with_field(cfg, field);
}

DensityMatrix subsystem_state(const ExperimentConfig& cfg) {
  const Bipartition part(cfg.partition, cfg.n_sites);
  switch (cfg.state.kind) {
    case StatePrep::Kind::ground: {
      const auto h = build_hamiltonian(model_from(cfg));
      return partial_trace(ground_state(h), part);
    }
    case StatePrep::Kind::quench: {
      const auto h0 = build_hamiltonian(model_with_field(cfg, cfg.state.b_initial));
      const auto h1 = build_hamiltonian(model_with_field(cfg, cfg.state.b_final));
      const PureState psi_t = evolve(ground_state(h0), h1, cfg.state.t);
      return partial_trace(psi_t, part);
    }
    case StatePrep::Kind::thermal: {
      const auto h = build_hamiltonian(model_from(cfg));
      return partial_trace(thermal_state(h, cfg.state.beta), part);
    }
    case StatePrep::Kind::product:
      return partial_trace(product_state(cfg.state.pattern), part);
  }
  throw std::invalid_argument("unknown state kind");
}

AnsatzFamily family_from(const ExperimentConfig& cfg) {
  AnsatzOptions options;
  options.attachment = cfg.attachment == "midpoint" ? PairAttachment::midpoint
                                                    : PairAttachment::larger_index;
  options.corrections = CorrectionLevels::none();
  for (const std::string& c : cfg.corrections) {
    if (c == "k1") options.corrections.k1 = true;
    if (c == "k2") options.corrections.k2 = true;
    if (c == "k3") options.corrections.k3 = true;
    if (c == "k4") options.corrections.k4 = true;
  }
  return build_ansatz(ansatz_kind_from_name(cfg.ansatz), cfg.partition,
                      model_from(cfg), options);
}

Dataset synthesize_dataset(const ExperimentConfig& cfg) {
  return sample_dataset(subsystem_state(cfg), cfg.n_settings, cfg.n_shots,
                        ensemble_from_name(cfg.ensemble), cfg.seed);
}

}  // namespace eht
