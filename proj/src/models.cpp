#include "eht/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eht {

namespace {

MatrixXd validated_couplings(const MatrixXd& j, int n_sites) {
  if (j.rows() != n_sites || j.cols() != n_sites) {
    throw std::invalid_argument("coupling matrix size does not match site count");
  }
  if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("coupling matrix must be symmetric");
  }
  if (j.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("coupling matrix must have zero diagonal");
  }
  return j;
}

}  // namespace

SpinModel SpinModel::long_range(int n_sites, double eta, double b, double j,
                                ModelVariant variant) {
  if (n_sites < 2) throw std::invalid_argument("model needs at least two sites");
  if (eta < 0.0) throw std::invalid_argument("decay exponent must be nonnegative");
  SpinModel m;
  m.n_sites = n_sites;
  m.couplings = MatrixXd::Zero(n_sites, n_sites);
  for (int a = 0; a < n_sites; ++a) {
    for (int c = a + 1; c < n_sites; ++c) {
      const double v = j / std::pow(static_cast<double>(c - a), eta);
      m.couplings(a, c) = v;
      m.couplings(c, a) = v;
    }
  }
  m.field = b;
  m.exponent = eta;
  m.variant = variant;
  return m;
}

SpinModel SpinModel::nearest_neighbor(int n_sites, double b, double j,
                                      ModelVariant variant) {
  if (n_sites < 2) throw std::invalid_argument("model needs at least two sites");
  SpinModel m;
  m.n_sites = n_sites;
  m.couplings = MatrixXd::Zero(n_sites, n_sites);
  for (int a = 0; a + 1 < n_sites; ++a) {
    m.couplings(a, a + 1) = j;
    m.couplings(a + 1, a) = j;
  }
  m.field = b;
  m.exponent = std::numeric_limits<double>::infinity();
  m.variant = variant;
  return m;
}

HamiltonianMatrix::HamiltonianMatrix(MatrixXcd h, SpinModel model)
    : h_(std::move(h)), model_(std::move(model)) {
  if (h_.rows() != h_.cols() ||
      static_cast<std::size_t>(h_.rows()) != dim_of(model_.n_sites)) {
    throw std::invalid_argument("Hamiltonian dimension does not match model");
  }
  if (hermiticity_defect(h_) > 1e-10) {
    throw std::invalid_argument("Hamiltonian is not Hermitian");
  }
}

const HamiltonianMatrix::Eigensystem& HamiltonianMatrix::eigensystem() const {
  std::call_once(eig_once_, [this] {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h_);
    auto sys = std::make_unique<Eigensystem>();
    sys->values = es.eigenvalues();
    sys->vectors = es.eigenvectors();
    eig_ = std::move(sys);
  });
  return *eig_;
}

HamiltonianMatrix build_hamiltonian(const SpinModel& model, int max_sites) {
  if (model.n_sites < 2) throw std::invalid_argument("model needs at least two sites");
  if (model.n_sites > max_sites) {
    throw std::invalid_argument("site count exceeds the dense-storage cap");
  }
  const MatrixXd j = validated_couplings(model.couplings, model.n_sites);
  const auto d = static_cast<Eigen::Index>(dim_of(model.n_sites));
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (int a = 0; a < model.n_sites; ++a) {
    for (int c = a + 1; c < model.n_sites; ++c) {
      if (j(a, c) == 0.0) continue;
      if (model.variant == ModelVariant::ising_xx) {
        add_pauli_string(h, j(a, c), {{a, Pauli::X}, {c, Pauli::X}}, model.n_sites);
      } else {
        add_pauli_string(h, 0.5 * j(a, c), {{a, Pauli::X}, {c, Pauli::X}},
                         model.n_sites);
        add_pauli_string(h, 0.5 * j(a, c), {{a, Pauli::Y}, {c, Pauli::Y}},
                         model.n_sites);
      }
    }
  }
  if (model.field != 0.0) {
    for (int a = 0; a < model.n_sites; ++a) {
      add_pauli_string(h, model.field, {{a, Pauli::Z}}, model.n_sites);
    }
  }
  return HamiltonianMatrix(std::move(h), model);
}

PureState ground_state(const HamiltonianMatrix& h) {
  const auto& sys = h.eigensystem();
  VectorXcd psi = sys.vectors.col(0);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) > 1e-12) {
      psi *= std::conj(psi(i)) / std::abs(psi(i));
      break;
    }
  }
  return PureState(std::move(psi), h.n_sites());
}

PureState evolve(const PureState& psi0, const HamiltonianMatrix& h, double t) {
  if (psi0.dim() != static_cast<std::size_t>(h.matrix().rows())) {
    throw std::invalid_argument("state dimension does not match Hamiltonian");
  }
  const auto& sys = h.eigensystem();
  const VectorXcd coeffs = sys.vectors.adjoint() * psi0.amplitudes();
  const VectorXcd phases =
      (cxd(0.0, -t) * sys.values.array().cast<cxd>()).exp().matrix();
  return PureState(sys.vectors * phases.cwiseProduct(coeffs), psi0.n_sites());
}

PureState product_state(const std::string& pattern) {
  if (pattern.empty()) throw std::invalid_argument("empty spin pattern");
  std::size_t index = 0;
  for (char c : pattern) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("spin pattern must contain only 0 and 1");
    }
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  return PureState::basis_state(index, static_cast<int>(pattern.size()));
}

DensityMatrix thermal_state(const HamiltonianMatrix& h, double beta) {
  if (beta < 0.0) throw std::invalid_argument("inverse temperature must be nonnegative");
  return gibbs_from_eh(beta * h.matrix(), h.n_sites());
}

double connected_correlation(const PureState& psi, int site_i, int site_j,
                             Pauli axis) {
  if (site_i == site_j) throw std::invalid_argument("correlation sites must differ");
  const int n = psi.n_sites();
  if (site_i < 0 || site_i >= n || site_j < 0 || site_j >= n) {
    throw std::invalid_argument("correlation site out of range");
  }
  const auto [lo, hi] = std::minmax(site_i, site_j);
  const double joint =
      pauli_expectation(psi.amplitudes(), {{lo, axis}, {hi, axis}}, n);
  const double a = pauli_expectation(psi.amplitudes(), {{site_i, axis}}, n);
  const double b = pauli_expectation(psi.amplitudes(), {{site_j, axis}}, n);
  return joint - a * b;
}

}  // namespace eht
