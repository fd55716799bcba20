#include "eht/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eht {

namespace {

constexpr double norm_tol = 1e-10;

// Basis index of the joint system from a kept-part index and a traced-part
// index, given precomputed per-bit scatter offsets.
std::vector<std::size_t> scatter_table(const std::vector<int>& sites,
                                       int n_sites) {
  const int m = static_cast<int>(sites.size());
  const std::size_t count = std::size_t{1} << m;
  std::vector<std::size_t> table(count);
  for (std::size_t a = 0; a < count; ++a) {
    std::size_t g = 0;
    for (int j = 0; j < m; ++j) {
      if ((a >> (m - 1 - j)) & 1u) {
        g |= std::size_t{1} << (n_sites - 1 - sites[j]);
      }
    }
    table[a] = g;
  }
  return table;
}

}  // namespace

PureState::PureState(VectorXcd amplitudes, int n_sites)
    : amps_(std::move(amplitudes)), n_sites_(n_sites) {
  if (n_sites_ < 1) throw std::invalid_argument("state needs at least one site");
  if (static_cast<std::size_t>(amps_.size()) != dim_of(n_sites_)) {
    throw std::invalid_argument("amplitude count does not match site count");
  }
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > norm_tol) {
    if (n <= 0.0) throw std::invalid_argument("zero state vector");
    amps_ /= n;
  }
}

PureState PureState::basis_state(std::size_t index, int n_sites) {
  VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(dim_of(n_sites)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), n_sites);
}

DensityMatrix::DensityMatrix(MatrixXcd rho, int n_sites) : n_sites_(n_sites) {
  if (n_sites_ < 1) throw std::invalid_argument("state needs at least one site");
  const auto d = static_cast<Eigen::Index>(dim_of(n_sites_));
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("density matrix dimension does not match site count");
  }
  if (hermiticity_defect(rho) > 1e-8) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  rho_ = symmetrized(rho);
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -psd_tol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const VectorXcd& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint(), psi.n_sites());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_sites) {
  const auto d = static_cast<Eigen::Index>(dim_of(n_sites));
  return DensityMatrix(MatrixXcd::Identity(d, d) / static_cast<double>(d),
                       n_sites);
}

Bipartition::Bipartition(std::vector<int> kept_sites, int n_sites)
    : kept_(std::move(kept_sites)), n_sites_(n_sites) {
  if (kept_.empty()) throw std::invalid_argument("kept part is empty");
  int prev = -1;
  for (int s : kept_) {
    if (s <= prev) throw std::invalid_argument("kept sites must be ascending and distinct");
    if (s < 0 || s >= n_sites_) throw std::invalid_argument("kept site out of range");
    prev = s;
  }
  std::size_t k = 0;
  for (int s = 0; s < n_sites_; ++s) {
    if (k < kept_.size() && kept_[k] == s) {
      ++k;
    } else {
      traced_.push_back(s);
    }
  }
}

Bipartition Bipartition::left_block(int n_kept, int n_sites) {
  std::vector<int> sites(static_cast<std::size_t>(n_kept));
  for (int i = 0; i < n_kept; ++i) sites[static_cast<std::size_t>(i)] = i;
  return Bipartition(std::move(sites), n_sites);
}

bool Bipartition::is_contiguous() const {
  return kept_.back() - kept_.front() + 1 == n_kept();
}

DensityMatrix partial_trace(const PureState& psi, const Bipartition& part) {
  if (part.n_sites() != psi.n_sites()) {
    throw std::invalid_argument("bipartition does not match state size");
  }
  const auto pos_a = scatter_table(part.kept(), part.n_sites());
  const auto pos_b = scatter_table(part.traced(), part.n_sites());
  const auto da = static_cast<Eigen::Index>(pos_a.size());
  const auto db = static_cast<Eigen::Index>(pos_b.size());
  MatrixXcd t(da, db);
  const VectorXcd& amps = psi.amplitudes();
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index b = 0; b < db; ++b) {
      t(a, b) = amps(static_cast<Eigen::Index>(
          pos_a[static_cast<std::size_t>(a)] | pos_b[static_cast<std::size_t>(b)]));
    }
  }
  return DensityMatrix(t * t.adjoint(), part.n_kept());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Bipartition& part) {
  if (part.n_sites() != rho.n_sites()) {
    throw std::invalid_argument("bipartition does not match state size");
  }
  const auto pos_a = scatter_table(part.kept(), part.n_sites());
  const auto pos_b = scatter_table(part.traced(), part.n_sites());
  const auto da = static_cast<Eigen::Index>(pos_a.size());
  MatrixXcd out = MatrixXcd::Zero(da, da);
  const MatrixXcd& m = rho.matrix();
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index ap = 0; ap < da; ++ap) {
      cxd sum = 0.0;
      for (std::size_t b : pos_b) {
        sum += m(static_cast<Eigen::Index>(pos_a[static_cast<std::size_t>(a)] | b),
                 static_cast<Eigen::Index>(pos_a[static_cast<std::size_t>(ap)] | b));
      }
      out(a, ap) = sum;
    }
  }
  return DensityMatrix(std::move(out), part.n_kept());
}

DensityMatrix gibbs_from_eh(const MatrixXcd& h, int n_sites) {
  const auto d = static_cast<Eigen::Index>(dim_of(n_sites));
  if (h.rows() != d || h.cols() != d) {
    throw std::invalid_argument("operator dimension does not match site count");
  }
  if (hermiticity_defect(h) > 1e-8) {
    throw std::invalid_argument("entanglement Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(symmetrized(h));
  // Shift by the smallest eigenvalue before exponentiating so large spectra
  // cannot underflow all weights at once.
  const VectorXd lam = es.eigenvalues();
  const VectorXd w = (-(lam.array() - lam.minCoeff())).exp();
  const double z = w.sum();
  MatrixXcd rho =
      es.eigenvectors() * (w / z).asDiagonal() * es.eigenvectors().adjoint();
  rho = symmetrized(rho);
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho), n_sites);
}

EntanglementSpectrum entanglement_spectrum(const DensityMatrix& rho,
                                           double truncation) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix(), Eigen::EigenvaluesOnly);
  EntanglementSpectrum out;
  std::vector<double> lam(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(lam.begin(), lam.end(), std::greater<>());
  for (double v : lam) {
    if (v > 0.0) out.entropy_bits -= v * std::log2(v);
    if (v > truncation) {
      out.xis.push_back(-std::log(v));
      ++out.schmidt_rank;
    }
  }
  std::sort(out.xis.begin(), out.xis.end());
  return out;
}

double entropy_bits(const DensityMatrix& rho) {
  return entanglement_spectrum(rho).entropy_bits;
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().squaredNorm();
}

namespace {

MatrixXcd matrix_sqrt_psd(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  const VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("fidelity arguments have different dimensions");
  }
  const MatrixXcd sr = matrix_sqrt_psd(rho.matrix());
  const MatrixXcd inner = symmetrized(sr * sigma.matrix() * sr);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  const double root_sum = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, root_sum * root_sum);
}

double fmax_exact(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("fidelity arguments have different dimensions");
  }
  const double cross = (rho1.matrix() * rho2.matrix()).trace().real();
  return cross / std::max(purity(rho1), purity(rho2));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace distance arguments have different dimensions");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix() - sigma.matrix(),
                                              Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace detail {

void conjugate_by_single_qubit(MatrixXcd& m, int n_sites, int site,
                               const Matrix2cd& u) {
  const std::size_t d = dim_of(n_sites);
  const std::size_t stride = std::size_t{1} << (n_sites - 1 - site);
  // Rows: m <- L m.
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (std::size_t outer = 0; outer < d; outer += 2 * stride) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const auto i0 = static_cast<Eigen::Index>(outer + inner);
        const auto i1 = static_cast<Eigen::Index>(outer + inner + stride);
        const cxd a = m(i0, col);
        const cxd b = m(i1, col);
        m(i0, col) = u(0, 0) * a + u(0, 1) * b;
        m(i1, col) = u(1, 0) * a + u(1, 1) * b;
      }
    }
  }
  // Columns: m <- m L^dag.
  for (std::size_t outer = 0; outer < d; outer += 2 * stride) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const auto c0 = static_cast<Eigen::Index>(outer + inner);
      const auto c1 = static_cast<Eigen::Index>(outer + inner + stride);
      for (Eigen::Index row = 0; row < m.rows(); ++row) {
        const cxd a = m(row, c0);
        const cxd b = m(row, c1);
        m(row, c0) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
        m(row, c1) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
      }
    }
  }
}

void apply_single_qubit(VectorXcd& psi, int n_sites, int site,
                        const Matrix2cd& u) {
  const std::size_t d = dim_of(n_sites);
  const std::size_t stride = std::size_t{1} << (n_sites - 1 - site);
  for (std::size_t outer = 0; outer < d; outer += 2 * stride) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const auto i0 = static_cast<Eigen::Index>(outer + inner);
      const auto i1 = static_cast<Eigen::Index>(outer + inner + stride);
      const cxd a = psi(i0);
      const cxd b = psi(i1);
      psi(i0) = u(0, 0) * a + u(0, 1) * b;
      psi(i1) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

}  // namespace detail

VectorXd born_probabilities(const DensityMatrix& rho,
                            const std::vector<Matrix2cd>& site_unitaries) {
  if (static_cast<int>(site_unitaries.size()) != rho.n_sites()) {
    throw std::invalid_argument("one rotation per site is required");
  }
  MatrixXcd m = rho.matrix();
  for (int site = 0; site < rho.n_sites(); ++site) {
    // diag(U^dag rho U) with U = x u_i, accumulated one site at a time.
    const Matrix2cd v = site_unitaries[static_cast<std::size_t>(site)].adjoint();
    detail::conjugate_by_single_qubit(m, rho.n_sites(), site, v);
  }
  VectorXd probs = m.diagonal().real().cwiseMax(0.0);
  probs /= probs.sum();
  return probs;
}

}  // namespace eht
