#include "eht/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eht/optimize.hpp"
#include "eht/parallel.hpp"

namespace eht {

std::string init_strategy_name(InitStrategy s) {
  switch (s) {
    case InitStrategy::bw_linear_ramp: return "bw_linear_ramp";
    case InitStrategy::zeros: return "zeros";
    case InitStrategy::user: return "user";
  }
  throw std::logic_error("unreachable init strategy");
}

InitStrategy init_strategy_from_name(const std::string& name) {
  for (InitStrategy s :
       {InitStrategy::bw_linear_ramp, InitStrategy::zeros, InitStrategy::user}) {
    if (init_strategy_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown init strategy: " + name);
}

std::string gradient_mode_name(GradientMode m) {
  switch (m) {
    case GradientMode::finite_difference: return "finite_difference";
    case GradientMode::spectral_analytic: return "spectral_analytic";
  }
  throw std::logic_error("unreachable gradient mode");
}

GradientMode gradient_mode_from_name(const std::string& name) {
  for (GradientMode m :
       {GradientMode::finite_difference, GradientMode::spectral_analytic}) {
    if (gradient_mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown gradient mode: " + name);
}

namespace {

void validate_tables(const std::vector<SettingProbabilities>& tables,
                     const AnsatzFamily& family) {
  if (tables.empty()) throw std::invalid_argument("no measurement settings");
  const auto d = static_cast<Eigen::Index>(family.dim());
  for (const auto& t : tables) {
    if (t.setting.n_sites() != family.n_subsystem_sites()) {
      throw std::invalid_argument("setting and ansatz site counts differ");
    }
    if (t.probs.size() != d) {
      throw std::invalid_argument("probability table has the wrong length");
    }
  }
}

double logistic(double theta) { return 1.0 / (1.0 + std::exp(-theta)); }

double logit(double p) {
  if (p <= 0.0 || p >= 1.0) {
    throw std::invalid_argument("depolarization start must lie strictly in (0, 1)");
  }
  return std::log(p / (1.0 - p));
}

// chi^2 over the tables together with its gradient in (g, logit p). The
// gradient of the Gibbs map uses the eigenbasis divided-difference rule;
// nearly degenerate pairs take the first-derivative limit.
class ChiSquaredCost {
 public:
  ChiSquaredCost(const AnsatzFamily& family,
                 const std::vector<SettingProbabilities>& tables, bool fit_p,
                 double fixed_p, GradientMode mode)
      : family_(family),
        tables_(tables),
        fit_p_(fit_p),
        fixed_p_(fixed_p),
        mode_(mode) {}

  Eigen::Index n_variables() const {
    return family_.n_params() + (fit_p_ ? 1 : 0);
  }

  VectorXd pack(const VectorXd& g, double p) const {
    VectorXd x(n_variables());
    x.head(family_.n_params()) = g;
    if (fit_p_) x(x.size() - 1) = logit(p);
    return x;
  }

  ParamVector unpack(const VectorXd& x) const {
    ParamVector pv;
    pv.g = x.head(family_.n_params());
    pv.p = fit_p_ ? logistic(x(x.size() - 1)) : fixed_p_;
    return pv;
  }

  double operator()(const VectorXd& x, VectorXd* grad) const {
    if (grad == nullptr) return value(unpack(x));
    if (mode_ == GradientMode::finite_difference) {
      *grad = finite_difference_gradient(
          [this](const VectorXd& y) { return value(unpack(y)); }, x);
      return value(unpack(x));
    }
    return value_and_gradient(x, *grad);
  }

  double value(const ParamVector& pv) const {
    return chi_squared(tables_, density_matrix_from_params(family_, pv));
  }

 private:
  double value_and_gradient(const VectorXd& x, VectorXd& grad) const {
    const ParamVector pv = unpack(x);
    const int m = family_.n_subsystem_sites();
    const auto d = static_cast<Eigen::Index>(family_.dim());
    const double dim = static_cast<double>(d);

    const MatrixXcd h = family_.assemble(pv.g);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("eigendecomposition failed in the fit gradient");
    }
    const VectorXd shifted =
        es.eigenvalues().array() - es.eigenvalues().minCoeff();
    const VectorXd w = (-shifted.array()).exp();
    const double z = w.sum();
    const MatrixXcd& v = es.eigenvectors();
    const MatrixXcd sigma =
        symmetrized(v * (w / z).asDiagonal() * v.adjoint());
    MatrixXcd rho_m = (1.0 - pv.p) * sigma;
    rho_m.diagonal().array() += pv.p / dim;
    const DensityMatrix rho(rho_m, m);

    const auto [chi2, w_op] = chi_squared_residual(tables_, rho);

    const MatrixXcd b = v.adjoint() * w_op * v;
    const double tr_w = w_op.trace().real();
    const double tr_w_sigma = (w_op * sigma).trace().real();

    // Divided differences of exp(-lambda) on the shifted spectrum.
    MatrixXd phi(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double diff = shifted(i) - shifted(j);
        phi(i, j) = std::abs(diff) < 1e-9
                        ? -std::exp(-0.5 * (shifted(i) + shifted(j)))
                        : (w(i) - w(j)) / diff;
      }
    }
    const MatrixXcd e = b.conjugate().cwiseProduct(phi.cast<cxd>());

    grad.resize(n_variables());
    grad.setZero();
    MatrixXcd sv(d, d);
    for (const auto& term : family_.terms()) {
      sv.setZero();
      add_pauli_string_times(sv, v, term.prefactor, term.string, m);
      const MatrixXcd c = v.adjoint() * sv;
      const double t1 = e.cwiseProduct(c).sum().real();
      const double tau =
          (c.diagonal().array() * w.array().cast<cxd>()).sum().real();
      grad(term.param_index) += (1.0 - pv.p) * (t1 + tr_w_sigma * tau) / z;
    }
    if (fit_p_) {
      grad(grad.size() - 1) =
          (tr_w / dim - tr_w_sigma) * pv.p * (1.0 - pv.p);
    }
    return chi2;
  }

  const AnsatzFamily& family_;
  const std::vector<SettingProbabilities>& tables_;
  bool fit_p_;
  double fixed_p_;
  GradientMode mode_;
};

std::vector<SettingProbabilities> tables_from(const Dataset& data) {
  data.validate();
  return frequency_tables(data);
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double chi_squared(const std::vector<SettingProbabilities>& tables,
                   const AnsatzFamily& family, const ParamVector& params) {
  validate_tables(tables, family);
  return chi_squared(tables, density_matrix_from_params(family, params));
}

double chi_squared(const std::vector<SettingProbabilities>& tables,
                   const DensityMatrix& rho) {
  if (tables.empty()) throw std::invalid_argument("no measurement settings");
  return parallel_reduce(
      tables.size(), 0.0,
      [&](double& acc, std::size_t i) {
        const VectorXd q = born_probabilities(rho, tables[i].setting);
        acc += (q - tables[i].probs).squaredNorm();
      },
      [](double& acc, const double& part) { acc += part; });
}

std::pair<double, MatrixXcd> chi_squared_residual(
    const std::vector<SettingProbabilities>& tables, const DensityMatrix& rho) {
  if (tables.empty()) throw std::invalid_argument("no measurement settings");
  const int m = rho.n_sites();
  const auto d = rho.matrix().rows();
  struct Acc {
    double chi2 = 0.0;
    MatrixXcd w_op;
  };
  Acc init;
  init.w_op = MatrixXcd::Zero(d, d);
  Acc acc = parallel_reduce(
      tables.size(), init,
      [&](Acc& a, std::size_t i) {
        const auto& setting = tables[i].setting;
        const VectorXd q = born_probabilities(rho, setting);
        const VectorXd r = q - tables[i].probs;
        a.chi2 += r.squaredNorm();
        MatrixXcd term = MatrixXcd::Zero(d, d);
        term.diagonal() = (2.0 * r).cast<cxd>();
        for (int site = 0; site < m; ++site) {
          detail::conjugate_by_single_qubit(
              term, m, site, setting.unitaries[static_cast<std::size_t>(site)]);
        }
        a.w_op += term;
      },
      [](Acc& a, const Acc& part) {
        a.chi2 += part.chi2;
        a.w_op += part.w_op;
      });
  return {acc.chi2, std::move(acc.w_op)};
}

double chi_squared(const Dataset& data, const AnsatzFamily& family,
                   const ParamVector& params) {
  return chi_squared(tables_from(data), family, params);
}

std::pair<double, VectorXd> chi_squared_with_gradient(
    const std::vector<SettingProbabilities>& tables, const AnsatzFamily& family,
    const ParamVector& params, bool fit_depolarization, GradientMode mode) {
  validate_tables(tables, family);
  ChiSquaredCost cost(family, tables, fit_depolarization, params.p, mode);
  const VectorXd x =
      fit_depolarization ? cost.pack(params.g, params.p) : params.g;
  VectorXd grad;
  const double value = cost(x, &grad);
  return {value, grad};
}

VectorXd bw_linear_ramp_init(const AnsatzFamily& family) {
  VectorXd g = VectorXd::Zero(family.n_params());
  const auto& base = family.base_model();

  // Shared polynomial coefficients are fitted to the ramp by least squares
  // over the family's own anchor coordinates.
  if (family.kind() == AnsatzKind::parabolic_reduced) {
    // The polynomial is fitted to the ramp over the family's own anchor
    // coordinates (cut distance for fields, summed cut distances for pairs).
    std::vector<double> coord, target;
    const auto& sites = family.sites();
    const int m = family.n_subsystem_sites();
    for (int a = 0; a < m; ++a) {
      for (int c = a + 1; c < m; ++c) {
        if (base && base->couplings(sites[static_cast<std::size_t>(a)],
                                    sites[static_cast<std::size_t>(c)]) == 0.0) {
          continue;
        }
        const double xa =
            static_cast<double>(sites[static_cast<std::size_t>(a)]);
        const double xc =
            static_cast<double>(sites[static_cast<std::size_t>(c)]);
        coord.push_back(profile_coordinate(family, xa) +
                        profile_coordinate(family, xc));
        target.push_back(family.distance_to_cut(0.5 * (xa + xc)));
      }
    }
    for (int a = 0; a < m; ++a) {
      const double xa = static_cast<double>(sites[static_cast<std::size_t>(a)]);
      coord.push_back(profile_coordinate(family, xa));
      target.push_back(family.distance_to_cut(xa));
    }
    MatrixXd design(coord.size(), 3);
    VectorXd y(coord.size());
    for (std::size_t r = 0; r < coord.size(); ++r) {
      design(static_cast<Eigen::Index>(r), 0) = 1.0;
      design(static_cast<Eigen::Index>(r), 1) = coord[r];
      design(static_cast<Eigen::Index>(r), 2) = coord[r] * coord[r];
      y(static_cast<Eigen::Index>(r)) = target[r];
    }
    const VectorXd beta = design.colPivHouseholderQr().solve(y);
    for (int k = 0; k < 3; ++k) {
      g(family.param_index("beta" + std::to_string(k))) = beta(k);
    }
    return g;
  }

  for (int i = 0; i < family.n_params(); ++i) {
    const ParamInfo& info = family.params()[static_cast<std::size_t>(i)];
    const double ramp = family.distance_to_cut(info.position);
    switch (info.role) {
      case ParamRole::pair_deformation:
      case ParamRole::field_deformation:
        g(i) = ramp;
        break;
      case ParamRole::bond_coupling: {
        double scale = 1.0;
        if (base && info.sites.size() == 2) {
          scale = base->couplings(info.sites[0], info.sites[1]);
        }
        g(i) = scale * ramp;
        break;
      }
      case ParamRole::field_coupling:
        g(i) = (base ? base->field : 1.0) * ramp;
        break;
      case ParamRole::profile_coefficient:
      case ParamRole::momentum_coupling:
      case ParamRole::correction_coupling:
        g(i) = 0.0;
        break;
    }
  }
  return g;
}

FitResult fit(const std::vector<SettingProbabilities>& tables,
              const AnsatzFamily& family, const FitConfig& config) {
  validate_tables(tables, family);
  if (family.terms().empty()) {
    throw std::invalid_argument("ansatz family has no terms to fit");
  }
  if (config.convergence_tol <= 0.0) {
    throw std::invalid_argument("convergence tolerance must be positive");
  }
  if (config.restarts < 0) throw std::invalid_argument("negative restart count");
  // Observed degrees of freedom: one frequency table of length 2^N per
  // setting. The coupling count must stay strictly below it.
  const Eigen::Index dof = static_cast<Eigen::Index>(tables.size()) *
                           static_cast<Eigen::Index>(family.dim());
  if (family.n_params() >= dof) {
    throw std::invalid_argument(
        "more parameters than observed degrees of freedom");
  }

  VectorXd g0;
  switch (config.init) {
    case InitStrategy::bw_linear_ramp: g0 = bw_linear_ramp_init(family); break;
    case InitStrategy::zeros: g0 = VectorXd::Zero(family.n_params()); break;
    case InitStrategy::user:
      if (config.user_init.size() != family.n_params()) {
        throw std::invalid_argument("user init has the wrong length");
      }
      g0 = config.user_init;
      break;
  }

  ChiSquaredCost cost(family, tables, config.fit_depolarization, 0.0,
                      config.gradient_mode);
  BfgsOptions bfgs;
  bfgs.max_iterations = config.max_iterations;
  bfgs.value_rel_tol = config.convergence_tol;
  bfgs.gradient_tol = 1e-10;

  SeedStream stream(config.restart_seed);
  BfgsResult best;
  int best_restart = -1;
  for (int r = 0; r <= config.restarts; ++r) {
    VectorXd start_g = g0;
    double start_p = config.init_p;
    if (r > 0) {
      auto rng = stream.engine(static_cast<std::uint64_t>(r));
      for (Eigen::Index i = 0; i < start_g.size(); ++i) {
        start_g(i) += config.restart_spread * standard_normal(rng);
      }
      // Fresh depolarization start drawn away from the boundary.
      start_p = 0.01 + 0.3 * uniform01(rng);
    }
    const VectorXd x0 = config.fit_depolarization
                            ? cost.pack(start_g, start_p)
                            : start_g;
    BfgsResult res = minimize_bfgs(
        [&cost](const VectorXd& x, VectorXd* grad) { return cost(x, grad); },
        x0, bfgs);
    if (best_restart < 0 || res.value < best.value) {
      best = std::move(res);
      best_restart = r;
    }
  }

  FitResult out;
  out.params = cost.unpack(best.x);
  if (!config.fit_depolarization) out.params.p = 0.0;
  out.chi2 = best.value;
  const DensityMatrix coherent =
      gibbs_from_eh(family.assemble(out.params.g), family.n_subsystem_sites());
  out.spectrum = entanglement_spectrum(coherent);
  out.entropy_bits = out.spectrum.entropy_bits;
  out.diagnostics.iterations = best.iterations;
  out.diagnostics.restart_index = best_restart;
  out.diagnostics.converged = best.converged;
  out.diagnostics.gradient_norm = best.gradient.lpNorm<Eigen::Infinity>();
  return out;
}

FitResult fit(const Dataset& data, const AnsatzFamily& family,
              const FitConfig& config) {
  return fit(tables_from(data), family, config);
}

VectorXd jackknife_errors(const std::vector<SettingProbabilities>& tables,
                          const AnsatzFamily& family, const FitConfig& config,
                          const FitStatistic& statistic,
                          const FitResult* full_fit) {
  if (tables.size() < 2) {
    throw std::invalid_argument("jackknife needs at least two settings");
  }
  FitResult full;
  if (full_fit == nullptr) {
    full = fit(tables, family, config);
    full_fit = &full;
  }

  // Warm start every leave-one-out fit at the full-data optimum.
  FitConfig warm = config;
  warm.init = InitStrategy::user;
  warm.user_init = full_fit->params.g;
  warm.init_p = std::clamp(full_fit->params.p, 1e-4, 1.0 - 1e-4);
  warm.restarts = 0;

  const std::size_t n = tables.size();
  std::vector<VectorXd> samples;
  samples.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<SettingProbabilities> rest;
    rest.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != u) rest.push_back(tables[i]);
    }
    samples.push_back(statistic(fit(rest, family, warm)));
  }
  const Eigen::Index k = samples.front().size();
  VectorXd mean = VectorXd::Zero(k);
  for (const auto& s : samples) {
    if (s.size() != k) {
      throw std::invalid_argument("statistic changed dimension across resamples");
    }
    mean += s;
  }
  mean /= static_cast<double>(n);
  VectorXd var = VectorXd::Zero(k);
  for (const auto& s : samples) var += (s - mean).cwiseAbs2();
  const double scale =
      static_cast<double>(n - 1) / static_cast<double>(n);
  return (scale * var.array()).sqrt();
}

VectorXd jackknife_errors(const Dataset& data, const AnsatzFamily& family,
                          const FitConfig& config, const FitStatistic& statistic,
                          const FitResult* full_fit) {
  return jackknife_errors(tables_from(data), family, config, statistic,
                          full_fit);
}

void fill_jackknife_errors(FitResult& result, const Dataset& data,
                           const AnsatzFamily& family, const FitConfig& config) {
  const auto statistic = [&family](const FitResult& r) {
    VectorXd s(family.n_params() + 2);
    s.head(family.n_params()) = r.params.g;
    s(family.n_params()) = r.params.p;
    s(family.n_params() + 1) = r.entropy_bits;
    return s;
  };
  const VectorXd errs =
      jackknife_errors(data, family, config, statistic, &result);
  result.param_errors = errs.head(family.n_params());
  result.p_error = errs(family.n_params());
  result.entropy_error = errs(family.n_params() + 1);
}

BudgetScanResult measurement_budget_scan(const DensityMatrix& state,
                                         const AnsatzFamily& family,
                                         double target_fidelity,
                                         const std::vector<BudgetPoint>& grid,
                                         const BudgetScanConfig& config) {
  if (target_fidelity <= 0.0 || target_fidelity >= 1.0) {
    throw std::invalid_argument("target fidelity must lie in (0, 1)");
  }
  if (grid.empty()) throw std::invalid_argument("empty budget grid");
  if (config.n_seeds < 1) throw std::invalid_argument("need at least one seed");
  if (state.n_sites() != family.n_subsystem_sites()) {
    throw std::invalid_argument("state and ansatz site counts differ");
  }

  BudgetScanResult out;
  out.target = target_fidelity;
  SeedStream stream(config.base_seed);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const BudgetPoint point = grid[gi];
    if (point.n_settings < 1 || point.n_shots < 1) {
      throw std::invalid_argument("budget grid entries must be positive");
    }
    BudgetScanEntry entry;
    entry.budget = point;
    const SeedStream grid_stream = stream.substream(gi);
    for (int s = 0; s < config.n_seeds; ++s) {
      const Dataset data = sample_dataset(
          state, point.n_settings, point.n_shots, config.ensemble,
          grid_stream.child(static_cast<std::uint64_t>(s)));
      const FitResult res = fit(data, family, config.fit);
      const DensityMatrix rho_fit =
          density_matrix_from_params(family, res.params);
      entry.fidelities.push_back(uhlmann_fidelity(rho_fit, state));
    }
    entry.median_fidelity = median_of(entry.fidelities);
    out.entries.push_back(std::move(entry));
  }

  for (const auto& entry : out.entries) {
    if (entry.median_fidelity < target_fidelity) continue;
    const auto cost = static_cast<double>(entry.budget.n_settings) *
                      static_cast<double>(entry.budget.n_shots);
    if (!out.minimal) {
      out.minimal = entry.budget;
      continue;
    }
    const auto best_cost = static_cast<double>(out.minimal->n_settings) *
                           static_cast<double>(out.minimal->n_shots);
    if (cost < best_cost ||
        (cost == best_cost &&
         entry.budget.n_settings < out.minimal->n_settings)) {
      out.minimal = entry.budget;
    }
  }
  return out;
}

}  // namespace eht
