#include "eht/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace eht {

std::string ensemble_name(Ensemble e) {
  return e == Ensemble::haar_su2 ? "haar_su2" : "single_qubit_clifford";
}

Ensemble ensemble_from_name(const std::string& name) {
  if (name == "haar_su2") return Ensemble::haar_su2;
  if (name == "single_qubit_clifford") return Ensemble::single_qubit_clifford;
  throw std::invalid_argument("unknown measurement ensemble: " + name);
}

void Dataset::validate() const {
  if (n_sites < 1) throw std::invalid_argument("dataset needs at least one site");
  std::set<int> ids;
  const std::size_t d = dim_of(n_sites);
  for (const auto& rec : records) {
    if (rec.setting.n_sites() != n_sites) {
      throw std::invalid_argument("record site count differs from dataset");
    }
    for (const auto& u : rec.setting.unitaries) {
      if (!is_unitary(u, 1e-8)) {
        throw std::invalid_argument("record contains a non-unitary rotation");
      }
    }
    if (!ids.insert(rec.setting.setting_id).second) {
      throw std::invalid_argument("duplicate setting id in dataset");
    }
    if (rec.n_shots == 0) throw std::invalid_argument("record with zero shots");
    std::uint64_t total = 0;
    for (const auto& [index, count] : rec.counts) {
      if (index >= d) throw std::invalid_argument("count bitstring out of range");
      total += count;
    }
    if (total != rec.n_shots) {
      throw std::invalid_argument("record counts do not sum to the shot number");
    }
  }
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > records.size()) {
    throw std::out_of_range("dataset slice out of range");
  }
  Dataset out;
  out.n_sites = n_sites;
  out.ensemble = ensemble;
  out.seed = seed;
  out.records.assign(records.begin() + static_cast<std::ptrdiff_t>(begin),
                     records.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

namespace {

Matrix2cd canonical_phase(Matrix2cd u) {
  for (Eigen::Index i = 0; i < 4; ++i) {
    const cxd z = u(i / 2, i % 2);
    if (std::abs(z) > 1e-6) {
      u *= std::conj(z) / std::abs(z);
      return u;
    }
  }
  return u;
}

// Quantized to a 1e-6 grid; llround collapses -0.0 and +0.0.
std::string matrix_key(const Matrix2cd& u) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%lld %lld %lld %lld %lld %lld %lld %lld",
                llround(u(0, 0).real() * 1e6), llround(u(0, 0).imag() * 1e6),
                llround(u(0, 1).real() * 1e6), llround(u(0, 1).imag() * 1e6),
                llround(u(1, 0).real() * 1e6), llround(u(1, 0).imag() * 1e6),
                llround(u(1, 1).real() * 1e6), llround(u(1, 1).imag() * 1e6));
  return buf;
}

std::vector<Matrix2cd> build_clifford_group() {
  Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Matrix2cd s;
  s << 1, 0, 0, cxd(0, 1);

  std::vector<Matrix2cd> group{canonical_phase(Matrix2cd::Identity())};
  std::set<std::string> seen{matrix_key(group.front())};
  // Closure under the generators {H, S}.
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Matrix2cd& g : {h, s}) {
      const Matrix2cd candidate = canonical_phase(g * group[i]);
      if (seen.insert(matrix_key(candidate)).second) {
        group.push_back(candidate);
      }
    }
  }
  if (group.size() != 24) {
    throw std::logic_error("single-qubit Clifford closure did not yield 24 elements");
  }
  return group;
}

}  // namespace

const std::vector<Matrix2cd>& clifford_group() {
  static const std::vector<Matrix2cd> group = build_clifford_group();
  return group;
}

Matrix2cd sample_haar_su2(std::mt19937_64& rng) {
  // Hurwitz parametrization: theta = asin(sqrt(u)) with u uniform gives the
  // Haar measure on SU(2) up to the global phase, which measurements ignore.
  const double theta = std::asin(std::sqrt(uniform01(rng)));
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const double chi = 2.0 * std::numbers::pi * uniform01(rng);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Matrix2cd u;
  u << std::polar(c, phi), std::polar(sn, chi),
      -std::polar(sn, -chi), std::polar(c, -phi);
  return u;
}

MeasurementSetting sample_setting(const SeedStream& stream, int setting_id,
                                  int n_sites, Ensemble ensemble) {
  if (n_sites < 1) throw std::invalid_argument("setting needs at least one site");
  std::mt19937_64 rng =
      stream.engine(static_cast<std::uint64_t>(setting_id));
  MeasurementSetting setting;
  setting.setting_id = setting_id;
  setting.unitaries.reserve(static_cast<std::size_t>(n_sites));
  for (int site = 0; site < n_sites; ++site) {
    if (ensemble == Ensemble::haar_su2) {
      setting.unitaries.push_back(sample_haar_su2(rng));
    } else {
      const auto& group = clifford_group();
      const auto idx = static_cast<std::size_t>(uniform01(rng) *
                                                static_cast<double>(group.size()));
      setting.unitaries.push_back(group[std::min(idx, group.size() - 1)]);
    }
  }
  return setting;
}

VectorXd born_probabilities(const DensityMatrix& rho,
                            const MeasurementSetting& setting) {
  return born_probabilities(rho, setting.unitaries);
}

MeasurementRecord simulate_counts(const DensityMatrix& rho,
                                  const MeasurementSetting& setting,
                                  std::uint64_t n_shots, std::mt19937_64& rng) {
  if (n_shots == 0) throw std::invalid_argument("at least one shot is required");
  const VectorXd probs = born_probabilities(rho, setting);
  VectorXd cumulative(probs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    cumulative(i) = acc;
  }
  MeasurementRecord rec;
  rec.setting = setting;
  rec.n_shots = n_shots;
  for (std::uint64_t shot = 0; shot < n_shots; ++shot) {
    const double r = uniform01(rng) * acc;
    const double* begin = cumulative.data();
    const double* pos = std::upper_bound(begin, begin + cumulative.size(), r);
    const auto index = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(pos - begin, cumulative.size() - 1));
    ++rec.counts[index];
  }
  return rec;
}

Dataset sample_dataset(const DensityMatrix& rho, int n_settings,
                       std::uint64_t n_shots, Ensemble ensemble,
                       std::uint64_t seed) {
  if (n_settings < 1) throw std::invalid_argument("at least one setting is required");
  Dataset data;
  data.n_sites = rho.n_sites();
  data.ensemble = ensemble;
  data.seed = seed;
  data.records.resize(static_cast<std::size_t>(n_settings));
  const SeedStream stream(seed);
  const SeedStream setting_stream = stream.substream(1);
  const SeedStream shot_stream = stream.substream(2);
  for (int r = 0; r < n_settings; ++r) {
    const MeasurementSetting setting =
        sample_setting(setting_stream, r, rho.n_sites(), ensemble);
    std::mt19937_64 rng = shot_stream.engine(static_cast<std::uint64_t>(r));
    data.records[static_cast<std::size_t>(r)] =
        simulate_counts(rho, setting, n_shots, rng);
  }
  data.validate();
  return data;
}

std::vector<SettingProbabilities> frequency_tables(const Dataset& data) {
  std::vector<SettingProbabilities> tables;
  tables.reserve(data.records.size());
  const auto d = static_cast<Eigen::Index>(dim_of(data.n_sites));
  for (const auto& rec : data.records) {
    SettingProbabilities table;
    table.setting = rec.setting;
    table.probs = VectorXd::Zero(d);
    for (const auto& [index, count] : rec.counts) {
      table.probs(static_cast<Eigen::Index>(index)) =
          static_cast<double>(count) / static_cast<double>(rec.n_shots);
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<SettingProbabilities> exact_tables(
    const DensityMatrix& rho, const std::vector<MeasurementSetting>& settings) {
  std::vector<SettingProbabilities> tables;
  tables.reserve(settings.size());
  for (const auto& setting : settings) {
    tables.push_back({setting, born_probabilities(rho, setting)});
  }
  return tables;
}

std::vector<MeasurementSetting> settings_of(const Dataset& data) {
  std::vector<MeasurementSetting> settings;
  settings.reserve(data.records.size());
  for (const auto& rec : data.records) settings.push_back(rec.setting);
  return settings;
}

VectorXd hamming_kernel_apply(const VectorXd& probs, int n_sites) {
  if (static_cast<std::size_t>(probs.size()) != dim_of(n_sites)) {
    throw std::invalid_argument("probability vector length is not 2^n");
  }
  VectorXd v = probs;
  const std::size_t d = dim_of(n_sites);
  for (int site = 0; site < n_sites; ++site) {
    const std::size_t stride = std::size_t{1} << (n_sites - 1 - site);
    for (std::size_t outer = 0; outer < d; outer += 2 * stride) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const auto i0 = static_cast<Eigen::Index>(outer + inner);
        const auto i1 = static_cast<Eigen::Index>(outer + inner + stride);
        const double a = v(i0);
        const double b = v(i1);
        v(i0) = a - 0.5 * b;
        v(i1) = b - 0.5 * a;
      }
    }
  }
  return v;
}

namespace {

int common_sites(const std::vector<SettingProbabilities>& t1,
                 const std::vector<SettingProbabilities>& t2) {
  if (t1.empty() || t1.size() != t2.size()) {
    throw std::invalid_argument("probability tables must cover identical settings");
  }
  const int n = t1.front().setting.n_sites();
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const auto& a = t1[i].setting;
    const auto& b = t2[i].setting;
    if (a.setting_id != b.setting_id || a.n_sites() != n || b.n_sites() != n) {
      throw std::invalid_argument("probability tables must cover identical settings");
    }
    for (int s = 0; s < n; ++s) {
      if ((a.unitaries[static_cast<std::size_t>(s)] -
           b.unitaries[static_cast<std::size_t>(s)])
              .cwiseAbs()
              .maxCoeff() > 1e-9) {
        throw std::invalid_argument("probability tables must cover identical settings");
      }
    }
  }
  return n;
}

}  // namespace

VectorXd overlap_terms(const std::vector<SettingProbabilities>& t1,
                       const std::vector<SettingProbabilities>& t2) {
  const int n = common_sites(t1, t2);
  const double scale = static_cast<double>(dim_of(n));
  VectorXd terms(static_cast<Eigen::Index>(t1.size()));
  for (std::size_t i = 0; i < t1.size(); ++i) {
    terms(static_cast<Eigen::Index>(i)) =
        scale * t1[i].probs.dot(hamming_kernel_apply(t2[i].probs, n));
  }
  return terms;
}

double estimate_overlap(const std::vector<SettingProbabilities>& t1,
                        const std::vector<SettingProbabilities>& t2) {
  return overlap_terms(t1, t2).mean();
}

VectorXd purity_terms(const Dataset& data, PurityBias bias) {
  if (data.records.empty()) throw std::invalid_argument("empty dataset");
  const auto tables = frequency_tables(data);
  VectorXd terms = overlap_terms(tables, tables);
  if (bias == PurityBias::u_statistic) {
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      const double shots = static_cast<double>(data.records[i].n_shots);
      if (shots < 2.0) {
        throw std::invalid_argument(
            "u-statistic purity needs at least two shots per setting");
      }
      const double scale = static_cast<double>(dim_of(data.n_sites));
      auto& term = terms(static_cast<Eigen::Index>(i));
      // Remove the N_M coincident shot pairs: they contribute kernel weight 1
      // each, inflating the plug-in value by scale/N_M on average.
      term = (shots * term - scale) / (shots - 1.0);
    }
  }
  return terms;
}

double estimate_purity(const Dataset& data, PurityBias bias) {
  return purity_terms(data, bias).mean();
}

FmaxEstimate estimate_fmax(const Dataset& data, const DensityMatrix& model,
                           const FmaxOptions& options) {
  if (data.records.empty()) throw std::invalid_argument("empty dataset");
  if (model.n_sites() != data.n_sites) {
    throw std::invalid_argument("model dimension does not match dataset");
  }
  const auto data_tables = frequency_tables(data);
  const auto model_tables = exact_tables(model, settings_of(data));

  const VectorXd cross = overlap_terms(data_tables, model_tables);
  const VectorXd data_purity = purity_terms(data, options.bias);
  const bool exact_model = options.model_purity_exact;
  const VectorXd model_purity =
      exact_model ? VectorXd() : overlap_terms(model_tables, model_tables);
  const double model_purity_value =
      exact_model ? purity(model) : model_purity.mean();

  const auto n = static_cast<double>(cross.size());
  auto ratio = [&](double c, double pd, double pm) {
    return c / std::max(pd, pm);
  };

  FmaxEstimate est;
  est.overlap = cross.mean();
  est.purity_data = data_purity.mean();
  est.purity_model = model_purity_value;
  est.fmax = ratio(est.overlap, est.purity_data, est.purity_model);

  if (cross.size() >= 2) {
    // Leave-one-setting-out jackknife of the ratio.
    VectorXd jack(cross.size());
    const double cross_sum = cross.sum();
    const double pd_sum = data_purity.sum();
    const double pm_sum = exact_model ? 0.0 : model_purity.sum();
    for (Eigen::Index i = 0; i < cross.size(); ++i) {
      const double c = (cross_sum - cross(i)) / (n - 1.0);
      const double pd = (pd_sum - data_purity(i)) / (n - 1.0);
      const double pm =
          exact_model ? model_purity_value : (pm_sum - model_purity(i)) / (n - 1.0);
      jack(i) = ratio(c, pd, pm);
    }
    const double mean = jack.mean();
    est.std_error =
        std::sqrt((n - 1.0) / n * (jack.array() - mean).square().sum());
  }
  return est;
}

}  // namespace eht
