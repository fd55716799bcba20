#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "eht/linalg.hpp"
#include "eht/pauli.hpp"
#include "eht/states.hpp"

namespace eht {

enum class ModelVariant { ising_xx, exchange_xy };

// Spin-1/2 chain with open boundaries, antiferromagnetic J > 0 and
// transverse/longitudinal-frame field B, both in units of J:
//   ising_xx:     H = sum_{i<j} J_ij sx_i sx_j + B sum_i sz_i
//   exchange_xy:  H = sum_{i<j} J_ij (sx_i sx_j + sy_i sy_j)/2 + B sum_i sz_i
// The exchange form is the flip-flop model sum J_ij (s+_i s-_j + h.c.).
struct SpinModel {
  int n_sites = 0;
  MatrixXd couplings;  // symmetric, zero diagonal
  double field = 0.0;
  double exponent = 0.0;  // infinity() means nearest-neighbor only
  ModelVariant variant = ModelVariant::ising_xx;

  // J_ij = j / |i-j|^eta for all pairs.
  static SpinModel long_range(int n_sites, double eta, double b, double j = 1.0,
                              ModelVariant variant = ModelVariant::ising_xx);
  // J_ij = j on adjacent pairs only.
  static SpinModel nearest_neighbor(int n_sites, double b, double j = 1.0,
                                    ModelVariant variant = ModelVariant::ising_xx);
};

// Dense Hermitian Hamiltonian together with a lazily computed, cached
// eigendecomposition. The cache is filled at most once; the object is
// read-only afterwards and safe to share.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(MatrixXcd h, SpinModel model);

  const MatrixXcd& matrix() const { return h_; }
  const SpinModel& model() const { return model_; }
  int n_sites() const { return model_.n_sites; }

  struct Eigensystem {
    VectorXd values;   // ascending
    MatrixXcd vectors; // columns
  };
  const Eigensystem& eigensystem() const;

 private:
  MatrixXcd h_;
  SpinModel model_;
  mutable std::once_flag eig_once_;
  mutable std::unique_ptr<Eigensystem> eig_;
};

// Dense construction; refuses chains beyond max_sites qubits.
HamiltonianMatrix build_hamiltonian(const SpinModel& model, int max_sites = 14);

// Eigenvector of the smallest eigenvalue with the first significant
// amplitude rotated to the positive real axis.
PureState ground_state(const HamiltonianMatrix& h);

// |psi_t> = exp(-iHt)|psi_0> via the cached eigenbasis; t is in units 1/J.
PureState evolve(const PureState& psi0, const HamiltonianMatrix& h, double t);

// Computational-basis product state; '0' is spin up (sigma_z = +1), site 0
// is the leftmost character.
PureState product_state(const std::string& pattern);

// gibbs_from_eh(beta * H); beta = 0 gives the maximally mixed state.
DensityMatrix thermal_state(const HamiltonianMatrix& h, double beta);

// <P_i P_j> - <P_i><P_j> with P the chosen Pauli axis.
double connected_correlation(const PureState& psi, int site_i, int site_j,
                             Pauli axis);

}  // namespace eht
