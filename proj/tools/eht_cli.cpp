// Command-line driver: synthesize randomized-measurement data for spin-chain
// states, fit entanglement-Hamiltonian ansatz families, verify fits on
// held-out data, run baseline reconstructions, scan measurement budgets, and
// tabulate weight profiles. Every output embeds the config hash and seed so
// runs are reproducible byte for byte.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "eht/baselines.hpp"
#include "eht/cft.hpp"
#include "eht/config.hpp"
#include "eht/dataset_io.hpp"
#include "eht/experiment.hpp"
#include "eht/fitting.hpp"
#include "eht/measurements.hpp"
#include "eht/states.hpp"

namespace {

using namespace eht;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
};

ExperimentConfig load_effective_config(const CommonOpts& common) {
  ExperimentConfig cfg = load_config_file(common.config_path);
  if (common.seed_override) cfg.seed = *common.seed_override;
  return cfg;
}

RunStamp stamp_of(const ExperimentConfig& cfg) {
  return {config_hash(cfg), cfg.seed};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << std::setprecision(17);
  return out;
}

// "a:b" -> half-open record range.
std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::runtime_error("record range must look like BEGIN:END");
  }
  try {
    return {std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw std::runtime_error("malformed record range '" + text + "'");
  }
}

Dataset load_records(const std::string& path, const std::string& range) {
  Dataset data = read_dataset(path);
  if (!range.empty()) {
    const auto [begin, end] = parse_range(range);
    data = data.slice(begin, end);
  }
  return data;
}

std::vector<std::uint64_t> fingerprints_of(const Dataset& data) {
  std::vector<std::uint64_t> prints;
  prints.reserve(data.records.size());
  for (const MeasurementRecord& rec : data.records) {
    prints.push_back(setting_fingerprint(rec.setting));
  }
  return prints;
}

// "1x100,2x100" -> budget grid.
std::vector<BudgetPoint> parse_grid(const std::string& text) {
  std::vector<BudgetPoint> grid;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const std::size_t x = token.find('x');
    if (x == std::string::npos) {
      throw std::runtime_error("grid entries must look like N_UxN_M");
    }
    try {
      grid.push_back({std::stoi(token.substr(0, x)),
                      std::stoull(token.substr(x + 1))});
    } catch (const std::logic_error&) {
      throw std::runtime_error("malformed grid entry '" + token + "'");
    }
  }
  if (grid.empty()) throw std::runtime_error("empty budget grid");
  return grid;
}

void run_simulate(const CommonOpts& common, const std::string& out_path) {
  const ExperimentConfig cfg = load_effective_config(common);
  const RunStamp stamp = stamp_of(cfg);
  const DensityMatrix rho = subsystem_state(cfg);
  const EntanglementSpectrum spec = entanglement_spectrum(rho);

  std::ofstream out = open_output(out_path);
  out << "eht-state 1\n";
  out << "config " << stamp.config_hash << "\n";
  out << "seed " << stamp.seed << "\n";
  out << "sites";
  for (const int s : cfg.partition) out << ' ' << s;
  out << "\n";
  out << "entropy_bits " << spec.entropy_bits << "\n";
  out << "schmidt_rank " << spec.schmidt_rank << "\n";
  out << "spectrum " << spec.xis.size();
  for (const double xi : spec.xis) out << ' ' << xi;
  out << "\n";
  const Eigen::Index d = rho.matrix().rows();
  out << "matrix " << d << "\n";
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      out << rho.matrix()(r, c).real() << ' ' << rho.matrix()(r, c).imag()
          << (c + 1 == d ? "\n" : " ");
    }
  }
  std::cout << "exact subsystem state: entropy " << spec.entropy_bits
            << " bits, rank " << spec.schmidt_rank << " -> " << out_path << "\n";
}

void run_measure(const CommonOpts& common, const std::string& out_path) {
  const ExperimentConfig cfg = load_effective_config(common);
  const Dataset data = synthesize_dataset(cfg);
  write_dataset(data, out_path);
  std::cout << "synthesized " << data.records.size() << " settings x "
            << cfg.n_shots << " shots -> " << out_path << "\n";
}

void run_fit(const CommonOpts& common, const std::string& data_path,
             const std::string& out_path, const std::string& ansatz_override,
             const std::string& range, bool no_errors) {
  ExperimentConfig cfg = load_effective_config(common);
  if (!ansatz_override.empty()) cfg.ansatz = ansatz_override;
  const RunStamp stamp = stamp_of(cfg);

  const Dataset data = load_records(data_path, range);
  const AnsatzFamily family = family_from(cfg);
  FitResult result = fit(data, family, cfg.fit);
  if (!no_errors && data.records.size() >= 2) {
    fill_jackknife_errors(result, data, family, cfg.fit);
  }
  write_fit_result(result, family, stamp, fingerprints_of(data), out_path);
  std::cout << "fit " << ansatz_kind_name(family.kind()) << " on "
            << data.records.size() << " settings: chi2 " << result.chi2
            << ", p " << result.params.p << ", entropy " << result.entropy_bits
            << " bits -> " << out_path << "\n";
}

void run_verify(const CommonOpts& common, const std::string& fit_path,
                const std::string& data_path, const std::string& range,
                bool allow_overlap, const std::string& out_path) {
  ExperimentConfig cfg = load_effective_config(common);
  const StoredFit stored = read_fit_result(fit_path);
  cfg.ansatz = stored.ansatz;
  if (stored.sites != cfg.partition) {
    throw std::runtime_error("stored fit partition differs from the config");
  }
  const RunStamp stamp = stamp_of(cfg);
  if (stored.stamp.config_hash != stamp.config_hash) {
    std::cerr << "warning: fit was produced under config " << stored.stamp.config_hash
              << ", verifying under " << stamp.config_hash << "\n";
  }

  const Dataset data = load_records(data_path, range);
  const std::unordered_set<std::uint64_t> fit_prints(
      stored.data_fingerprints.begin(), stored.data_fingerprints.end());
  std::size_t shared = 0;
  for (const MeasurementRecord& rec : data.records) {
    shared += fit_prints.count(setting_fingerprint(rec.setting));
  }
  if (shared > 0 && !allow_overlap) {
    throw std::runtime_error(
        std::to_string(shared) +
        " verification records were already used by the fit; verification "
        "needs independent data (pass --allow-overlap to override)");
  }

  const AnsatzFamily family = family_from(cfg);
  const ParamVector params = params_from_stored(stored, family);
  const DensityMatrix model = density_matrix_from_params(family, params);
  const FmaxEstimate est = estimate_fmax(data, model);

  std::cout << "F_max = " << est.fmax << " +/- " << est.std_error << " ("
            << data.records.size() << " settings, overlap " << est.overlap
            << ", purities " << est.purity_data << " data / " << est.purity_model
            << " model)\n";
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    out << "eht-verify 1\n";
    out << "config " << stamp.config_hash << "\n";
    out << "seed " << stamp.seed << "\n";
    out << "records " << data.records.size() << "\n";
    out << "shared_records " << shared << "\n";
    out << "fmax " << est.fmax << ' ' << est.std_error << "\n";
    out << "overlap " << est.overlap << "\n";
    out << "purity_data " << est.purity_data << "\n";
    out << "purity_model " << est.purity_model << "\n";
  }
}

void run_baseline(const CommonOpts& common, const std::string& data_path,
                  const std::string& method, int rank, const std::string& range,
                  const std::string& out_path) {
  const ExperimentConfig cfg = load_effective_config(common);
  const RunStamp stamp = stamp_of(cfg);
  const Dataset data = load_records(data_path, range);
  const auto tables = frequency_tables(data);
  const DensityMatrix exact = subsystem_state(cfg);

  DensityMatrix rho = DensityMatrix::maximally_mixed(data.n_sites);
  double chi2 = 0.0;
  if (method == "pls") {
    rho = pls(tables, data.n_sites);
    chi2 = chi_squared(tables, rho);
  } else if (method == "lrls") {
    const LrlsResult res = lrls(tables, data.n_sites, RankConfig{rank});
    rho = res.rho;
    chi2 = res.chi2;
  } else if (method == "eht") {
    const AnsatzFamily family = family_from(cfg);
    const FitResult result = fit(data, family, cfg.fit);
    rho = density_matrix_from_params(family, result.params);
    chi2 = result.chi2;
  } else {
    throw std::runtime_error("unknown method '" + method + "'");
  }

  const double fidelity = uhlmann_fidelity(rho, exact);
  const EntanglementSpectrum spec = entanglement_spectrum(rho);
  std::cout << method << ": chi2 " << chi2 << ", fidelity " << fidelity
            << ", entropy " << spec.entropy_bits << " bits\n";
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    out << "eht-baseline 1\n";
    out << "config " << stamp.config_hash << "\n";
    out << "seed " << stamp.seed << "\n";
    out << "method " << method << "\n";
    out << "records " << data.records.size() << "\n";
    out << "chi2 " << chi2 << "\n";
    out << "fidelity " << fidelity << "\n";
    out << "entropy_bits " << spec.entropy_bits << "\n";
    out << "spectrum " << spec.xis.size();
    for (const double xi : spec.xis) out << ' ' << xi;
    out << "\n";
  }
}

void run_scan(const CommonOpts& common, const std::string& grid_text,
              double target, int n_seeds, const std::string& out_path) {
  const ExperimentConfig cfg = load_effective_config(common);
  const RunStamp stamp = stamp_of(cfg);
  const DensityMatrix state = subsystem_state(cfg);
  const AnsatzFamily family = family_from(cfg);

  BudgetScanConfig scan_cfg;
  scan_cfg.n_seeds = n_seeds;
  scan_cfg.base_seed = cfg.seed;
  scan_cfg.ensemble = ensemble_from_name(cfg.ensemble);
  scan_cfg.fit = cfg.fit;
  const BudgetScanResult result =
      measurement_budget_scan(state, family, target, parse_grid(grid_text), scan_cfg);

  std::ofstream out = open_output(out_path);
  out << "# eht-scan 1\n";
  out << "# config " << stamp.config_hash << "\n";
  out << "# seed " << stamp.seed << "\n";
  out << "# target " << target << "\n";
  out << "n_settings,n_shots,seed,fidelity,median_fidelity\n";
  for (const BudgetScanEntry& entry : result.entries) {
    for (std::size_t s = 0; s < entry.fidelities.size(); ++s) {
      out << entry.budget.n_settings << ',' << entry.budget.n_shots << ',' << s
          << ',' << entry.fidelities[s] << ',' << entry.median_fidelity << "\n";
    }
  }
  if (result.minimal) {
    out << "# minimal " << result.minimal->n_settings << ' '
        << result.minimal->n_shots << "\n";
    std::cout << "minimal budget meeting fidelity " << target << ": "
              << result.minimal->n_settings << " settings x "
              << result.minimal->n_shots << " shots -> " << out_path << "\n";
  } else {
    out << "# minimal none\n";
    std::cout << "no grid point reaches fidelity " << target << " -> " << out_path
              << "\n";
  }
}

void run_profile(const std::string& kind, double l, double beta0, int points,
                 const std::string& config_path, const std::string& out_path) {
  RunStamp stamp;
  if (!config_path.empty()) {
    const ExperimentConfig cfg = load_config_file(config_path);
    stamp = {config_hash(cfg), cfg.seed};
  }
  const WeightProfile profile{weight_kind_from_name(kind), l, beta0};
  const auto table = profile_table(profile, points);

  std::ofstream out = open_output(out_path);
  out << "# eht-profile 1\n";
  out << "# config " << stamp.config_hash << "\n";
  out << "# seed " << stamp.seed << "\n";
  out << "# kind " << kind << " l " << l << " beta0 " << beta0 << "\n";
  out << "x,beta\n";
  for (const auto& [x, w] : table) out << x << ',' << w << "\n";
  std::cout << "profile " << kind << " with " << table.size() << " points -> "
            << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement Hamiltonian tomography for spin chains"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string data_path, fit_path, out_path, ansatz_override, range, method, kind,
      grid_text;
  bool allow_overlap = false, no_errors = false;
  int rank = 2, n_seeds = 5, points = 101;
  double target = 0.99, profile_l = 1.0, profile_beta0 = 1.0;

  const auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    sub->add_option("--config", common.config_path, "experiment config (JSON)")
        ->required(needs_config);
    sub->add_option("--seed", common.seed_override,
                    "override the config seed for this run");
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "exact reduced state and entanglement spectrum");
  add_common(simulate);
  simulate->add_option("--out", out_path, "output state file")->required();
  simulate->callback([&] { run_simulate(common, out_path); });

  CLI::App* measure =
      app.add_subcommand("measure", "synthesize a randomized-measurement dataset");
  add_common(measure);
  measure->add_option("--out", out_path, "output dataset file")->required();
  measure->callback([&] { run_measure(common, out_path); });

  CLI::App* fit_cmd =
      app.add_subcommand("fit", "fit an ansatz family to a dataset");
  add_common(fit_cmd);
  fit_cmd->add_option("--data", data_path, "dataset file")->required();
  fit_cmd->add_option("--out", out_path, "output fit file")->required();
  fit_cmd->add_option("--ansatz", ansatz_override, "override the config ansatz kind");
  fit_cmd->add_option("--use-records", range, "record slice BEGIN:END");
  fit_cmd->add_flag("--no-errors", no_errors, "skip the jackknife error pass");
  fit_cmd->callback([&] {
    run_fit(common, data_path, out_path, ansatz_override, range, no_errors);
  });

  CLI::App* verify =
      app.add_subcommand("verify", "fidelity bound of a fit on held-out data");
  add_common(verify);
  verify->add_option("--fit", fit_path, "fit file")->required();
  verify->add_option("--data", data_path, "held-out dataset file")->required();
  verify->add_option("--use-records", range, "record slice BEGIN:END");
  verify->add_flag("--allow-overlap", allow_overlap,
                   "permit records that the fit already consumed");
  verify->add_option("--out", out_path, "optional verification report file");
  verify->callback([&] {
    run_verify(common, fit_path, data_path, range, allow_overlap, out_path);
  });

  CLI::App* baseline =
      app.add_subcommand("baseline", "direct reconstruction for comparison");
  add_common(baseline);
  baseline->add_option("--data", data_path, "dataset file")->required();
  baseline->add_option("--method", method, "eht | pls | lrls")->required();
  baseline->add_option("--rank", rank, "rank for lrls (default 2)");
  baseline->add_option("--use-records", range, "record slice BEGIN:END");
  baseline->add_option("--out", out_path, "optional report file");
  baseline->callback([&] {
    run_baseline(common, data_path, method, rank, range, out_path);
  });

  CLI::App* scan =
      app.add_subcommand("scan", "fidelity across a measurement-budget grid");
  add_common(scan);
  scan->add_option("--grid", grid_text, "comma-separated N_UxN_M points")
      ->required();
  scan->add_option("--target", target, "fidelity target (default 0.99)");
  scan->add_option("--seeds", n_seeds, "synthetic datasets per grid point");
  scan->add_option("--out", out_path, "output CSV")->required();
  scan->callback([&] { run_scan(common, grid_text, target, n_seeds, out_path); });

  CLI::App* profile =
      app.add_subcommand("profile", "tabulate a weight profile beta(x)");
  profile->add_option("--kind", kind, "bw_halfline | parabolic | short_range | thermal")
      ->required();
  profile->add_option("--l", profile_l, "subsystem length scale")->required();
  profile->add_option("--beta0", profile_beta0, "initial-state scale");
  profile->add_option("--points", points, "table rows (default 101)");
  profile->add_option("--config", common.config_path,
                      "optional config whose hash stamps the output");
  profile->add_option("--out", out_path, "output CSV")->required();
  profile->callback([&] {
    run_profile(kind, profile_l, profile_beta0, points, common.config_path,
                out_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
