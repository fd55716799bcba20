#include "eht/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "eht/fitting.hpp"
#include "eht/optimize.hpp"
#include "eht/parallel.hpp"

namespace eht {

namespace {

int sites_of(const std::vector<SettingProbabilities>& tables) {
  if (tables.empty()) throw std::invalid_argument("no measurement settings");
  const int n = tables.front().setting.n_sites();
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  for (const auto& t : tables) {
    if (t.setting.n_sites() != n) {
      throw std::invalid_argument("settings disagree on the site count");
    }
    if (t.probs.size() != d) {
      throw std::invalid_argument("probability table has the wrong length");
    }
  }
  return n;
}

// X (r x d) -> rho = X^dag X / ||X||_F^2.
MatrixXcd state_of(const MatrixXcd& x) {
  const MatrixXcd gram = x.adjoint() * x;
  return gram / gram.trace().real();
}

}  // namespace

MatrixXcd rho_rt(const std::vector<SettingProbabilities>& tables) {
  const int n = sites_of(tables);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  MatrixXcd total = parallel_reduce(
      tables.size(), MatrixXcd(MatrixXcd::Zero(d, d)),
      [&](MatrixXcd& acc, std::size_t i) {
        const VectorXd kp = hamming_kernel_apply(tables[i].probs, n);
        MatrixXcd term = MatrixXcd::Zero(d, d);
        term.diagonal() = kp.cast<cxd>();
        for (int site = 0; site < n; ++site) {
          detail::conjugate_by_single_qubit(
              term, n, site,
              tables[i].setting.unitaries[static_cast<std::size_t>(site)]);
        }
        acc += term;
      },
      [](MatrixXcd& acc, const MatrixXcd& part) { acc += part; });
  total *= static_cast<double>(d) / static_cast<double>(tables.size());
  return symmetrized(total);
}

MatrixXcd rho_rt(const Dataset& data) {
  data.validate();
  return rho_rt(frequency_tables(data));
}

DensityMatrix project_psd(const MatrixXcd& m, int n_sites) {
  if (m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(dim_of(n_sites))) {
    throw std::invalid_argument("matrix size does not match the site count");
  }
  if (hermiticity_defect(m) > 1e-8) {
    throw std::invalid_argument("projection input must be Hermitian");
  }
  if (std::abs(m.trace().real() - 1.0) > 1e-8) {
    throw std::invalid_argument("projection input must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(symmetrized(m));
  const VectorXd lam = es.eigenvalues();  // ascending
  const auto d = lam.size();

  // Euclidean projection of the spectrum onto the probability simplex:
  // descending eigenvalues, keep the largest k with lam_k + shift_k > 0.
  VectorXd mu = VectorXd::Zero(d);
  double running = 0.0;
  Eigen::Index kept = 0;
  double shift = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double value = lam(d - 1 - k);  // descending order
    running += value;
    const double candidate = (1.0 - running) / static_cast<double>(k + 1);
    if (value + candidate > 0.0) {
      kept = k + 1;
      shift = candidate;
    }
  }
  for (Eigen::Index k = 0; k < kept; ++k) {
    mu(d - 1 - k) = lam(d - 1 - k) + shift;
  }
  const MatrixXcd projected =
      es.eigenvectors() * mu.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(symmetrized(projected), n_sites);
}

DensityMatrix pls(const std::vector<SettingProbabilities>& tables, int n_sites) {
  if (sites_of(tables) != n_sites) {
    throw std::invalid_argument("tables and site count disagree");
  }
  return project_psd(rho_rt(tables), n_sites);
}

DensityMatrix pls(const Dataset& data) {
  data.validate();
  return pls(frequency_tables(data), data.n_sites);
}

LrlsResult lrls(const std::vector<SettingProbabilities>& tables, int n_sites,
                const RankConfig& cfg, const LrlsOptions& options) {
  const int n = sites_of(tables);
  if (n != n_sites) {
    throw std::invalid_argument("tables and site count disagree");
  }
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  if (cfg.rank < 1 || cfg.rank > d) {
    throw std::invalid_argument("rank must lie in [1, 2^N]");
  }
  const auto r = static_cast<Eigen::Index>(cfg.rank);

  // Start from the leading eigenpairs of the projected linear estimate.
  const DensityMatrix warm = pls(tables, n_sites);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(warm.matrix());
  MatrixXcd x0(r, d);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index idx = d - 1 - k;  // largest first
    const double weight = std::max(es.eigenvalues()(idx), 1e-6);
    x0.row(k) = std::sqrt(weight) * es.eigenvectors().col(idx).adjoint();
  }

  const auto pack = [r, d](const MatrixXcd& x) {
    VectorXd v(2 * r * d);
    Eigen::Map<MatrixXd>(v.data(), r, d) = x.real();
    Eigen::Map<MatrixXd>(v.data() + r * d, r, d) = x.imag();
    return v;
  };
  const auto unpack = [r, d](const VectorXd& v) {
    MatrixXcd x(r, d);
    x.real() = Eigen::Map<const MatrixXd>(v.data(), r, d);
    x.imag() = Eigen::Map<const MatrixXd>(v.data() + r * d, r, d);
    return x;
  };

  const auto objective = [&](const VectorXd& v, VectorXd* grad) {
    const MatrixXcd x = unpack(v);
    const double t = x.squaredNorm();
    const DensityMatrix rho(state_of(x), n);
    if (grad == nullptr) return chi_squared(tables, rho);
    const auto [chi2, w_op] = chi_squared_residual(tables, rho);
    const double tr_w_rho = (w_op * rho.matrix()).trace().real();
    const MatrixXcd g = (2.0 / t) * (x * w_op - tr_w_rho * x);
    grad->resize(v.size());
    Eigen::Map<MatrixXd>(grad->data(), r, d) = g.real();
    Eigen::Map<MatrixXd>(grad->data() + r * d, r, d) = g.imag();
    return chi2;
  };

  BfgsOptions bfgs;
  bfgs.max_iterations = options.max_iterations;
  bfgs.value_rel_tol = options.convergence_tol;
  bfgs.gradient_tol = 1e-10;
  const BfgsResult res = minimize_bfgs(objective, pack(x0), bfgs);

  LrlsResult out{DensityMatrix(state_of(unpack(res.x)), n), res.value,
                 res.iterations, res.converged};
  return out;
}

LrlsResult lrls(const Dataset& data, const RankConfig& cfg,
                const LrlsOptions& options) {
  data.validate();
  return lrls(frequency_tables(data), data.n_sites, cfg, options);
}

}  // namespace eht
