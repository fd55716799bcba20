#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eht/ansatz.hpp"
#include "eht/fitting.hpp"
#include "eht/measurements.hpp"

namespace eht {

// Computational-basis index <-> bitstring, site 0 leftmost ('0' = spin up).
std::string bitstring_of(std::size_t index, int n_sites);
std::size_t index_of_bitstring(const std::string& bits);

// Hash of the exact serialized unitaries of a setting; identical settings
// (bit-for-bit) collide, distinct draws essentially never do. Used to detect
// reuse of fitting data during verification.
std::uint64_t setting_fingerprint(const MeasurementSetting& setting);

// Line-oriented text dataset format, version 1:
//   eht-dataset 1
//   sites <n>
//   ensemble <name>
//   seed <u64>
//   records <count>
//   <setting_id> <8 reals per site, row-major re/im> <bits>:<count> ...
// Reals are written with 17 significant digits so the round trip is exact.
void write_dataset(const Dataset& data, const std::string& path);

// Parses and validates a dataset file; errors carry "path:line:" prefixes.
// Site unitaries more than 1e-8 from unitary are rejected.
Dataset read_dataset(const std::string& path);

// Provenance stamp embedded in every derived output file.
struct RunStamp {
  std::string config_hash = "none";
  std::uint64_t seed = 0;
};

// Fitted-result file: stamp, ansatz identity, labeled couplings with
// errors, depolarization weight, cost, spectrum, and the fingerprints of
// the records the fit consumed (for overlap refusal at verification).
void write_fit_result(const FitResult& result, const AnsatzFamily& family,
                      const RunStamp& stamp,
                      const std::vector<std::uint64_t>& data_fingerprints,
                      const std::string& path);

struct StoredFit {
  RunStamp stamp;
  std::string ansatz;
  std::vector<int> sites;
  std::vector<std::string> labels;
  VectorXd values;
  VectorXd errors;        // zero when no error pass was run
  double p = 0.0;
  double p_error = 0.0;
  double chi2 = 0.0;
  double entropy_bits = 0.0;
  double entropy_error = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> spectrum;
  std::vector<std::uint64_t> data_fingerprints;
};

StoredFit read_fit_result(const std::string& path);

// Reassembles the parameter vector of `family` from a stored fit by label.
// Throws if the family does not carry exactly the stored labels.
ParamVector params_from_stored(const StoredFit& stored,
                               const AnsatzFamily& family);

}  // namespace eht
