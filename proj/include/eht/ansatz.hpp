#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eht/linalg.hpp"
#include "eht/models.hpp"
#include "eht/pauli.hpp"
#include "eht/states.hpp"

namespace eht {

enum class AnsatzKind {
  deformed_ising_local,     // J_ij beta_i pair deformation + B gamma_i fields
  parabolic_reduced,        // three polynomial coefficients deform pairs+fields
  quench_energy_momentum,   // free bond/field couplings + XY momentum terms
  exchange_with_corrections,// per-pair flip-flop + fields + K1..K4 corrections
  custom,                   // explicitly supplied terms (tests, ad hoc studies)
};

std::string ansatz_kind_name(AnsatzKind k);
AnsatzKind ansatz_kind_from_name(const std::string& name);

// Which site's deformation coefficient a pair term J_ij beta carries.
enum class PairAttachment { larger_index, midpoint };

struct CorrectionLevels {
  bool k1 = false;  // (XY - YX) pairs
  bool k2 = false;  // (XY - YX) pair times Z elsewhere
  bool k3 = false;  // ZZ pairs and ZZZ triples
  bool k4 = false;  // (XX + YY) pair times Z elsewhere
  static CorrectionLevels none() { return {}; }
  static CorrectionLevels all() { return {true, true, true, true}; }
};

enum class ParamRole {
  pair_deformation,      // beta_i multiplying J_ij
  field_deformation,     // gamma_i multiplying B
  profile_coefficient,   // polynomial coefficient (parabolic_reduced)
  bond_coupling,         // free two-site energy coupling
  field_coupling,        // free single-site field coupling
  momentum_coupling,     // XY momentum-density coupling
  correction_coupling,   // K1..K4 corrections
};

struct ParamInfo {
  std::string label;
  ParamRole role = ParamRole::bond_coupling;
  double position = 0.0;   // anchor in global lattice coordinates
  std::vector<int> sites;  // global site labels the parameter touches
};

// One Pauli string attached to a parameter; a parameter may own several
// strings (symmetrized combinations, shared polynomial coefficients).
struct OperatorTerm {
  PauliString string;  // local subsystem site indices
  double prefactor = 1.0;
  int param_index = 0;
  std::string label;
};

struct ParamVector {
  VectorXd g;
  double p = 0.0;  // depolarization weight in [0, 1]
};

struct AnsatzOptions {
  PairAttachment attachment = PairAttachment::larger_index;
  CorrectionLevels corrections = CorrectionLevels::none();
};

// Immutable linear family H(g) = sum_t g[t.param_index] t.prefactor t.string
// on the subsystem, with parameter bookkeeping for initialization and
// profile comparisons.
class AnsatzFamily {
 public:
  static AnsatzFamily from_terms(std::vector<OperatorTerm> terms,
                                 std::vector<ParamInfo> params,
                                 std::vector<int> subsystem_sites,
                                 int n_model_sites,
                                 AnsatzKind kind = AnsatzKind::custom);

  AnsatzKind kind() const { return kind_; }
  const std::vector<int>& sites() const { return sites_; }
  int n_model_sites() const { return n_model_sites_; }
  int n_subsystem_sites() const { return static_cast<int>(sites_.size()); }
  std::size_t dim() const { return dim_of(n_subsystem_sites()); }
  int n_params() const { return static_cast<int>(params_.size()); }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  const std::vector<ParamInfo>& params() const { return params_; }
  const std::optional<SpinModel>& base_model() const { return base_; }

  // Index of the parameter with this label; throws if absent.
  int param_index(const std::string& label) const;

  MatrixXcd assemble(const VectorXd& g) const;

  // Distance from a global lattice coordinate to the nearest entanglement
  // cut (boundary between the subsystem and its complement).
  double distance_to_cut(double global_position) const;

 private:
  AnsatzFamily() = default;

  AnsatzKind kind_ = AnsatzKind::custom;
  std::vector<int> sites_;
  int n_model_sites_ = 0;
  std::vector<OperatorTerm> terms_;
  std::vector<ParamInfo> params_;
  std::optional<SpinModel> base_;

  friend AnsatzFamily build_ansatz(AnsatzKind, const std::vector<int>&,
                                   const SpinModel&, const AnsatzOptions&);
};

// Builds one of the named families on the given subsystem of the base model.
// Subsystem sites are global labels into the model's chain.
AnsatzFamily build_ansatz(AnsatzKind kind, const std::vector<int>& subsystem,
                          const SpinModel& base_model,
                          const AnsatzOptions& options = {});

// Convenience: subsystem = leftmost n_a sites.
AnsatzFamily build_ansatz(AnsatzKind kind, int n_a, const SpinModel& base_model,
                          const AnsatzOptions& options = {});

MatrixXcd assemble_eh(const AnsatzFamily& family, const ParamVector& params);

// Anchor coordinate of the reduced-profile polynomial at a global lattice
// position: the distance to the nearest entanglement cut, so the shared
// profile grows away from the cut. Pair terms use the sum of their two site
// coordinates. When the subsystem covers the whole chain (no cut exists)
// the coordinate falls back to the local offset from the leftmost site.
double profile_coordinate(const AnsatzFamily& family, double global_position);

// rho(g, p) = (1-p) exp(-H(g))/Z + p I/D.
DensityMatrix density_matrix_from_params(const AnsatzFamily& family,
                                         const ParamVector& params);

}  // namespace eht
