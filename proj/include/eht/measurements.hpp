#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eht/linalg.hpp"
#include "eht/random.hpp"
#include "eht/states.hpp"

namespace eht {

enum class Ensemble { haar_su2, single_qubit_clifford };

std::string ensemble_name(Ensemble e);
Ensemble ensemble_from_name(const std::string& name);

// One randomized basis: independent single-qubit rotations u_i per site.
struct MeasurementSetting {
  int setting_id = 0;
  std::vector<Matrix2cd> unitaries;

  int n_sites() const { return static_cast<int>(unitaries.size()); }
};

// Bitstring counts from repeated shots in one setting. Counts are keyed by
// basis index (site 0 = most significant bit).
struct MeasurementRecord {
  MeasurementSetting setting;
  std::map<std::size_t, std::uint64_t> counts;
  std::uint64_t n_shots = 0;
};

struct Dataset {
  int n_sites = 0;
  Ensemble ensemble = Ensemble::haar_su2;
  std::uint64_t seed = 0;
  std::vector<MeasurementRecord> records;

  std::size_t n_settings() const { return records.size(); }

  // Checks record shapes, shot totals, and setting-id uniqueness.
  void validate() const;

  // Record subrange [begin, end); the split used to keep fitting and
  // verification data disjoint.
  Dataset slice(std::size_t begin, std::size_t end) const;
};

// Per-setting outcome distribution: empirical frequencies or exact Born
// probabilities, always a dense vector over all 2^N bitstrings.
struct SettingProbabilities {
  MeasurementSetting setting;
  VectorXd probs;
};

// The 24-element single-qubit Clifford group, phase-canonicalized.
const std::vector<Matrix2cd>& clifford_group();

Matrix2cd sample_haar_su2(std::mt19937_64& rng);

// Deterministic function of (stream, setting_id): per-site independent draws.
MeasurementSetting sample_setting(const SeedStream& stream, int setting_id,
                                  int n_sites, Ensemble ensemble);

VectorXd born_probabilities(const DensityMatrix& rho,
                            const MeasurementSetting& setting);

// Multinomial sampling of n_shots outcomes from the Born distribution.
MeasurementRecord simulate_counts(const DensityMatrix& rho,
                                  const MeasurementSetting& setting,
                                  std::uint64_t n_shots, std::mt19937_64& rng);

// Full synthetic dataset: settings and shots derived from one root seed.
Dataset sample_dataset(const DensityMatrix& rho, int n_settings,
                       std::uint64_t n_shots, Ensemble ensemble,
                       std::uint64_t seed);

std::vector<SettingProbabilities> frequency_tables(const Dataset& data);

std::vector<SettingProbabilities> exact_tables(
    const DensityMatrix& rho, const std::vector<MeasurementSetting>& settings);

std::vector<MeasurementSetting> settings_of(const Dataset& data);

// Applies the per-site kernel (1, -1/2; -1/2, 1) as a tensor product, one
// butterfly pass per site: (K p)(s) = sum_{s'} (-2)^{-D[s,s']} p(s').
VectorXd hamming_kernel_apply(const VectorXd& probs, int n_sites);

// Per-setting cross-correlation terms 2^N * p1 . K p2; their mean estimates
// Tr(rho1 rho2). Settings must match pairwise (id and unitaries).
VectorXd overlap_terms(const std::vector<SettingProbabilities>& t1,
                       const std::vector<SettingProbabilities>& t2);

double estimate_overlap(const std::vector<SettingProbabilities>& t1,
                        const std::vector<SettingProbabilities>& t2);

enum class PurityBias {
  plugin,       // plain double sum over frequencies
  u_statistic,  // same-shot pairs removed (unbiased for finite N_M)
};

// Per-setting purity terms from counts; n_shots >= 2 required for the
// u_statistic variant.
VectorXd purity_terms(const Dataset& data, PurityBias bias);

double estimate_purity(const Dataset& data,
                       PurityBias bias = PurityBias::u_statistic);

struct FmaxOptions {
  PurityBias bias = PurityBias::u_statistic;
  // Use exact Tr(model^2) for the model side instead of estimating it from
  // the model's Born probabilities.
  bool model_purity_exact = true;
};

struct FmaxEstimate {
  double fmax = 0.0;
  double std_error = 0.0;  // leave-one-setting-out jackknife
  double overlap = 0.0;
  double purity_data = 0.0;
  double purity_model = 0.0;
};

// F_max = overlap(data, model) / max(purity(data), purity(model)), all pieces
// estimated from the dataset's settings (Born probabilities on the model side).
FmaxEstimate estimate_fmax(const Dataset& data, const DensityMatrix& model,
                           const FmaxOptions& options = {});

}  // namespace eht
