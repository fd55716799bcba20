#pragma once

#include "eht/measurements.hpp"
#include "eht/states.hpp"

namespace eht {

struct RankConfig {
  int rank = 2;  // the 2RLS benchmark configuration
};

// Shadow-style linear estimator (2^N / N_U) sum_U U diag(K P_U) U^dag with
// the per-site kernel K = (1, -1/2; -1/2, 1). Hermitian with unit trace;
// generally not positive.
MatrixXcd rho_rt(const std::vector<SettingProbabilities>& tables);
MatrixXcd rho_rt(const Dataset& data);

// Projection onto density matrices in the same eigenbasis: eigenvalues are
// truncated at zero and the removed weight is spread over the rest, the
// Euclidean projection onto the probability simplex.
DensityMatrix project_psd(const MatrixXcd& m, int n_sites);

// Projected least squares: project_psd(rho_rt(data)).
DensityMatrix pls(const std::vector<SettingProbabilities>& tables, int n_sites);
DensityMatrix pls(const Dataset& data);

struct LrlsOptions {
  int max_iterations = 500;
  double convergence_tol = 1e-12;  // relative chi-squared change
};

struct LrlsResult {
  DensityMatrix rho;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;  // non-convergence is reported, not fatal
};

// Low-rank least squares: minimizes the same chi^2 over rho(X) = X^dag X / T
// with X an r x 2^N complex matrix, positive by construction. X starts from
// the leading eigenvectors of the projected least-squares estimate.
LrlsResult lrls(const std::vector<SettingProbabilities>& tables, int n_sites,
                const RankConfig& cfg, const LrlsOptions& options = {});
LrlsResult lrls(const Dataset& data, const RankConfig& cfg,
                const LrlsOptions& options = {});

}  // namespace eht
