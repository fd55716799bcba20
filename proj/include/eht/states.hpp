#pragma once

#include <vector>

#include "eht/linalg.hpp"

namespace eht {

// Normalized state vector on n_sites qubits. Site 0 is the leftmost spin and
// maps to the most significant bit of a basis index; bit 0 is spin up.
class PureState {
 public:
  PureState(VectorXcd amplitudes, int n_sites);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const VectorXcd& amplitudes() const { return amps_; }

  static PureState basis_state(std::size_t index, int n_sites);

 private:
  VectorXcd amps_;
  int n_sites_;
};

// Hermitian, unit-trace, positive-semidefinite matrix on n_sites qubits.
// Construction symmetrizes and checks trace and minimum eigenvalue, then the
// matrix is immutable.
class DensityMatrix {
 public:
  DensityMatrix(MatrixXcd rho, int n_sites);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_sites);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const MatrixXcd& matrix() const { return rho_; }

  static constexpr double trace_tol = 1e-10;
  static constexpr double psd_tol = 1e-10;

 private:
  MatrixXcd rho_;
  int n_sites_;
};

// Splits [0, n_sites) into a kept subsystem and its complement. Sites are
// ascending and need not be contiguous.
class Bipartition {
 public:
  Bipartition(std::vector<int> kept_sites, int n_sites);

  static Bipartition left_block(int n_kept, int n_sites);

  int n_sites() const { return n_sites_; }
  const std::vector<int>& kept() const { return kept_; }
  const std::vector<int>& traced() const { return traced_; }
  int n_kept() const { return static_cast<int>(kept_.size()); }
  bool is_contiguous() const;

 private:
  std::vector<int> kept_;
  std::vector<int> traced_;
  int n_sites_;
};

// Logarithmic spectrum xi = -ln(lambda) of a density matrix, ascending, with
// eigenvalues below the truncation threshold dropped. Entropy is in bits and
// computed from the full untruncated spectrum.
struct EntanglementSpectrum {
  std::vector<double> xis;
  int schmidt_rank = 0;
  double entropy_bits = 0.0;
};

DensityMatrix partial_trace(const PureState& psi, const Bipartition& part);
DensityMatrix partial_trace(const DensityMatrix& rho, const Bipartition& part);

// rho = exp(-H) / Tr exp(-H) for Hermitian H (hermiticity tolerance 1e-8).
DensityMatrix gibbs_from_eh(const MatrixXcd& h, int n_sites);

EntanglementSpectrum entanglement_spectrum(const DensityMatrix& rho,
                                           double truncation = 1e-12);

double entropy_bits(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
// in [0, 1], symmetric, 1 iff the states coincide.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Tr(rho1 rho2) / max(Tr rho1^2, Tr rho2^2); agrees with Uhlmann fidelity
// when at least one argument is pure.
double fmax_exact(const DensityMatrix& rho1, const DensityMatrix& rho2);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Outcome distribution of measuring every site in the basis defined by
// applying u_i to site i and reading out sigma_z. Entry s is
// <s| U^dag rho U |s> with U = u_0 x u_1 x ... ; sums to 1.
VectorXd born_probabilities(const DensityMatrix& rho,
                            const std::vector<Matrix2cd>& site_unitaries);

namespace detail {
// In-place rho -> L rho L^dag with L = u acting on one site.
void conjugate_by_single_qubit(MatrixXcd& m, int n_sites, int site,
                               const Matrix2cd& u);
void apply_single_qubit(VectorXcd& psi, int n_sites, int site,
                        const Matrix2cd& u);
}  // namespace detail

}  // namespace eht
