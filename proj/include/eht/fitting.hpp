#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eht/ansatz.hpp"
#include "eht/measurements.hpp"
#include "eht/states.hpp"

namespace eht {

enum class InitStrategy { bw_linear_ramp, zeros, user };
enum class GradientMode { finite_difference, spectral_analytic };

std::string init_strategy_name(InitStrategy s);
InitStrategy init_strategy_from_name(const std::string& name);
std::string gradient_mode_name(GradientMode m);
GradientMode gradient_mode_from_name(const std::string& name);

struct FitConfig {
  InitStrategy init = InitStrategy::bw_linear_ramp;
  VectorXd user_init;  // coupling start when init == user
  int max_iterations = 400;
  GradientMode gradient_mode = GradientMode::spectral_analytic;
  double convergence_tol = 1e-12;  // relative chi-squared change
  bool fit_depolarization = true;
  double init_p = 0.05;
  int restarts = 5;  // perturbed re-optimizations beyond the first
  std::uint64_t restart_seed = 20250819;
  double restart_spread = 0.3;  // scale of the init perturbations
};

struct FitDiagnostics {
  int iterations = 0;
  int restart_index = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

struct FitResult {
  ParamVector params;
  double chi2 = 0.0;
  // Spectrum and entropy of the coherent part exp(-H)/Z alone; the
  // depolarization weight is reported separately in params.p.
  EntanglementSpectrum spectrum;
  double entropy_bits = 0.0;
  VectorXd param_errors;      // jackknife standard errors, empty until filled
  double p_error = 0.0;       // jackknife error of params.p
  double entropy_error = 0.0; // jackknife error of entropy_bits
  FitDiagnostics diagnostics;
};

// Sum over settings and over all bitstrings of the squared difference
// between observed frequencies and the model's outcome probabilities.
double chi_squared(const std::vector<SettingProbabilities>& tables,
                   const AnsatzFamily& family, const ParamVector& params);
double chi_squared(const Dataset& data, const AnsatzFamily& family,
                   const ParamVector& params);

// Same cost for a fixed state instead of a parameterized family.
double chi_squared(const std::vector<SettingProbabilities>& tables,
                   const DensityMatrix& rho);

// chi^2 plus the residual operator W = sum_U U diag(2 (q_U - P_U)) U^dag,
// the Frechet derivative of the cost in the state: dchi^2 = Tr[W drho].
std::pair<double, MatrixXcd> chi_squared_residual(
    const std::vector<SettingProbabilities>& tables, const DensityMatrix& rho);

// chi^2 together with its gradient: with fit_depolarization the variables
// are (g, logit p) and params.p must lie strictly inside (0, 1); without it
// the variables are g alone and params.p is held fixed.
std::pair<double, VectorXd> chi_squared_with_gradient(
    const std::vector<SettingProbabilities>& tables, const AnsatzFamily& family,
    const ParamVector& params, bool fit_depolarization, GradientMode mode);

// Linear-ramp starting point: deformations proportional to the distance
// from the entanglement cut; free couplings scaled from the base model.
VectorXd bw_linear_ramp_init(const AnsatzFamily& family);

FitResult fit(const std::vector<SettingProbabilities>& tables,
              const AnsatzFamily& family, const FitConfig& config = {});
FitResult fit(const Dataset& data, const AnsatzFamily& family,
              const FitConfig& config = {});

// Vector-valued statistic of a fit; jackknife_errors returns one standard
// error per component.
using FitStatistic = std::function<VectorXd(const FitResult&)>;

// Leave-one-setting-out resampling; re-fits are warm-started at the
// full-data optimum (pass it as full_fit to skip recomputing it).
VectorXd jackknife_errors(const std::vector<SettingProbabilities>& tables,
                          const AnsatzFamily& family, const FitConfig& config,
                          const FitStatistic& statistic,
                          const FitResult* full_fit = nullptr);
VectorXd jackknife_errors(const Dataset& data, const AnsatzFamily& family,
                          const FitConfig& config, const FitStatistic& statistic,
                          const FitResult* full_fit = nullptr);

// Fills param_errors, p_error, and entropy_error on an existing result.
void fill_jackknife_errors(FitResult& result, const Dataset& data,
                           const AnsatzFamily& family, const FitConfig& config);

struct BudgetPoint {
  int n_settings = 0;
  std::uint64_t n_shots = 0;
};

struct BudgetScanEntry {
  BudgetPoint budget;
  std::vector<double> fidelities;  // one per seed
  double median_fidelity = 0.0;
};

struct BudgetScanConfig {
  int n_seeds = 5;
  std::uint64_t base_seed = 101;
  Ensemble ensemble = Ensemble::haar_su2;
  FitConfig fit;
};

struct BudgetScanResult {
  double target = 0.0;
  std::vector<BudgetScanEntry> entries;
  // Smallest n_settings * n_shots whose median fidelity meets the target;
  // empty when the target is unreachable on the grid.
  std::optional<BudgetPoint> minimal;
};

// Samples synthetic datasets from the state at every grid point, fits the
// family, and scores Uhlmann fidelity against the state itself.
BudgetScanResult measurement_budget_scan(const DensityMatrix& state,
                                         const AnsatzFamily& family,
                                         double target_fidelity,
                                         const std::vector<BudgetPoint>& grid,
                                         const BudgetScanConfig& config = {});

}  // namespace eht
