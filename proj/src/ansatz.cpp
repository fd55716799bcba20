#include "eht/ansatz.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace eht {

std::string ansatz_kind_name(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::deformed_ising_local: return "deformed_ising_local";
    case AnsatzKind::parabolic_reduced: return "parabolic_reduced";
    case AnsatzKind::quench_energy_momentum: return "quench_energy_momentum";
    case AnsatzKind::exchange_with_corrections: return "exchange_with_corrections";
    case AnsatzKind::custom: return "custom";
  }
  throw std::logic_error("unreachable ansatz kind");
}

AnsatzKind ansatz_kind_from_name(const std::string& name) {
  for (AnsatzKind k :
       {AnsatzKind::deformed_ising_local, AnsatzKind::parabolic_reduced,
        AnsatzKind::quench_energy_momentum, AnsatzKind::exchange_with_corrections,
        AnsatzKind::custom}) {
    if (ansatz_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown ansatz kind: " + name);
}

namespace {

std::string brace(std::initializer_list<int> sites, const char* sep = ",") {
  std::string out = "{";
  bool first = true;
  for (int s : sites) {
    if (!first) out += sep;
    out += std::to_string(s);
    first = false;
  }
  return out + "}";
}

struct FamilyBuilder {
  std::vector<OperatorTerm> terms;
  std::vector<ParamInfo> params;

  int add_param(std::string label, ParamRole role, double position,
                std::vector<int> sites) {
    params.push_back({std::move(label), role, position, std::move(sites)});
    return static_cast<int>(params.size()) - 1;
  }

  void add_term(PauliString string, double prefactor, int param,
                std::string label) {
    std::sort(string.begin(), string.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    terms.push_back({std::move(string), prefactor, param, std::move(label)});
  }
};

}  // namespace

AnsatzFamily AnsatzFamily::from_terms(std::vector<OperatorTerm> terms,
                                      std::vector<ParamInfo> params,
                                      std::vector<int> subsystem_sites,
                                      int n_model_sites, AnsatzKind kind) {
  AnsatzFamily f;
  f.kind_ = kind;
  f.sites_ = std::move(subsystem_sites);
  f.n_model_sites_ = n_model_sites;
  f.terms_ = std::move(terms);
  f.params_ = std::move(params);

  if (f.sites_.empty()) throw std::invalid_argument("empty subsystem");
  int prev = -1;
  for (int s : f.sites_) {
    if (s <= prev || s < 0 || s >= n_model_sites) {
      throw std::invalid_argument("subsystem sites must be ascending within the chain");
    }
    prev = s;
  }
  const int m = f.n_subsystem_sites();
  std::map<std::string, int> labels;
  for (std::size_t i = 0; i < f.params_.size(); ++i) {
    if (f.params_[i].label.empty()) {
      throw std::invalid_argument("parameter label must not be empty");
    }
    if (!labels.emplace(f.params_[i].label, static_cast<int>(i)).second) {
      throw std::invalid_argument("duplicate parameter label: " + f.params_[i].label);
    }
  }
  for (const auto& t : f.terms_) {
    if (t.string.empty()) {
      throw std::invalid_argument("identity terms are not allowed in an ansatz");
    }
    validate_pauli_string(t.string, m);
    if (t.param_index < 0 || t.param_index >= f.n_params()) {
      throw std::invalid_argument("term references an unknown parameter");
    }
  }

  // Reproducible ordering: body count, then leftmost site, then letters,
  // then the full site tuple.
  std::stable_sort(f.terms_.begin(), f.terms_.end(),
                   [](const OperatorTerm& a, const OperatorTerm& b) {
                     if (a.string.size() != b.string.size()) {
                       return a.string.size() < b.string.size();
                     }
                     if (a.string.front().first != b.string.front().first) {
                       return a.string.front().first < b.string.front().first;
                     }
                     std::string la, lb;
                     for (const auto& [s, p] : a.string) la += pauli_letter(p);
                     for (const auto& [s, p] : b.string) lb += pauli_letter(p);
                     if (la != lb) return la < lb;
                     std::vector<int> sa, sb;
                     for (const auto& [s, p] : a.string) sa.push_back(s);
                     for (const auto& [s, p] : b.string) sb.push_back(s);
                     return sa < sb;
                   });
  return f;
}

int AnsatzFamily::param_index(const std::string& label) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].label == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("no parameter labelled " + label);
}

MatrixXcd AnsatzFamily::assemble(const VectorXd& g) const {
  if (g.size() != n_params()) {
    throw std::invalid_argument("parameter vector length does not match family");
  }
  const auto d = static_cast<Eigen::Index>(dim());
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (const auto& t : terms_) {
    const double coeff = g(t.param_index) * t.prefactor;
    if (coeff == 0.0) continue;
    add_pauli_string(h, coeff, t.string, n_subsystem_sites());
  }
  return h;
}

double AnsatzFamily::distance_to_cut(double global_position) const {
  std::vector<double> cuts;
  auto in_a = [&](int s) {
    return std::binary_search(sites_.begin(), sites_.end(), s);
  };
  for (int s = 0; s + 1 < n_model_sites_; ++s) {
    if (in_a(s) != in_a(s + 1)) cuts.push_back(static_cast<double>(s) + 0.5);
  }
  if (cuts.empty()) return 1.0;  // subsystem is the whole chain
  double best = std::abs(global_position - cuts.front());
  for (double c : cuts) best = std::min(best, std::abs(global_position - c));
  return best;
}

namespace {

void build_deformed_ising_local(FamilyBuilder& b, const std::vector<int>& sites,
                                const SpinModel& base,
                                const AnsatzOptions& options) {
  const int m = static_cast<int>(sites.size());
  std::vector<int> beta(m), gamma(m);
  for (int a = 0; a < m; ++a) {
    beta[a] = b.add_param("beta_" + std::to_string(sites[a]),
                          ParamRole::pair_deformation,
                          static_cast<double>(sites[a]), {sites[a]});
  }
  for (int a = 0; a < m; ++a) {
    gamma[a] = b.add_param("gamma_" + std::to_string(sites[a]),
                           ParamRole::field_deformation,
                           static_cast<double>(sites[a]), {sites[a]});
  }
  for (int a = 0; a < m; ++a) {
    for (int c = a + 1; c < m; ++c) {
      const double j = base.couplings(sites[a], sites[c]);
      if (j == 0.0) continue;
      // Paper index convention: the pair coefficient is J_ij beta_i with i
      // the larger site label; the midpoint variant is selectable.
      const int attach = options.attachment == PairAttachment::larger_index
                             ? c
                             : (a + c + 1) / 2;
      b.add_term({{a, Pauli::X}, {c, Pauli::X}}, j, beta[attach],
                 "J~_" + brace({sites[a], sites[c]}));
    }
  }
  if (base.field != 0.0) {
    for (int a = 0; a < m; ++a) {
      b.add_term({{a, Pauli::Z}}, base.field, gamma[a],
                 "B~_" + brace({sites[a]}));
    }
  }
}

// Distance from a global position to the nearest boundary between the
// subsystem and its complement; local left offset when no boundary exists.
// Shared between the reduced-profile builder and profile_coordinate().
double anchor_coordinate(const std::vector<int>& sites, int n_model_sites,
                         double global_position) {
  auto in_a = [&sites](int s) {
    return std::binary_search(sites.begin(), sites.end(), s);
  };
  double best = -1.0;
  for (int s = 0; s + 1 < n_model_sites; ++s) {
    if (in_a(s) == in_a(s + 1)) continue;
    const double d = std::abs(global_position - (static_cast<double>(s) + 0.5));
    if (best < 0.0 || d < best) best = d;
  }
  if (best < 0.0) {
    return global_position - static_cast<double>(sites.front()) + 0.5;
  }
  return best;
}

void build_parabolic_reduced(FamilyBuilder& b, const std::vector<int>& sites,
                             const SpinModel& base) {
  const int m = static_cast<int>(sites.size());
  const double center =
      0.5 * (static_cast<double>(sites.front()) + static_cast<double>(sites.back()));
  std::vector<int> coef(3);
  std::vector<int> all = sites;
  for (int k = 0; k < 3; ++k) {
    coef[k] = b.add_param("beta" + std::to_string(k),
                          ParamRole::profile_coefficient, center, all);
  }
  // The polynomial argument is anchored at the entanglement cut: field
  // weight d_i^k with d_i the distance from the cut, pair weight
  // (d_i + d_j)^k. A shared profile can then grow away from the cut the way
  // half-chain entanglement temperatures do.
  auto coord = [&sites, &base](int global) {
    return anchor_coordinate(sites, base.n_sites, static_cast<double>(global));
  };
  for (int a = 0; a < m; ++a) {
    for (int c = a + 1; c < m; ++c) {
      const double j = base.couplings(sites[a], sites[c]);
      if (j == 0.0) continue;
      const double s = coord(sites[a]) + coord(sites[c]);
      for (int k = 0; k < 3; ++k) {
        b.add_term({{a, Pauli::X}, {c, Pauli::X}}, j * std::pow(s, k), coef[k],
                   "J~_" + brace({sites[a], sites[c]}));
      }
    }
  }
  if (base.field != 0.0) {
    for (int a = 0; a < m; ++a) {
      const double s = coord(sites[a]);
      for (int k = 0; k < 3; ++k) {
        b.add_term({{a, Pauli::Z}}, base.field * std::pow(s, k), coef[k],
                   "B~_" + brace({sites[a]}));
      }
    }
  }
}

void build_quench_energy_momentum(FamilyBuilder& b,
                                  const std::vector<int>& sites) {
  const int m = static_cast<int>(sites.size());
  for (int a = 0; a + 1 < m; ++a) {
    const double mid = 0.5 * (sites[a] + sites[a + 1]);
    const int idx = b.add_param("J~_" + brace({sites[a], sites[a + 1]}),
                                ParamRole::bond_coupling, mid,
                                {sites[a], sites[a + 1]});
    b.add_term({{a, Pauli::X}, {a + 1, Pauli::X}}, 1.0, idx,
               "J~_" + brace({sites[a], sites[a + 1]}));
  }
  for (int a = 0; a < m; ++a) {
    const int idx = b.add_param("B~_" + std::to_string(sites[a]),
                                ParamRole::field_coupling,
                                static_cast<double>(sites[a]), {sites[a]});
    b.add_term({{a, Pauli::Z}}, 1.0, idx, "B~_" + std::to_string(sites[a]));
  }
  // Lattice momentum density ~ sx_i sy_{i+1}, bare string with prefactor 1;
  // constants are absorbed into the fitted coefficient.  The coefficient is
  // indexed by the ordered site pair, so each bond carries two independent
  // cross terms: sx_i sy_{i+1} and sy_i sx_{i+1}.  Dropping the reverse
  // orientation caps the reachable fidelity on post-quench states well below
  // what the full cross-term sector achieves.
  for (int a = 0; a + 1 < m; ++a) {
    const double mid = 0.5 * (sites[a] + sites[a + 1]);
    const int idx = b.add_param("XY_" + brace({sites[a], sites[a + 1]}),
                                ParamRole::momentum_coupling, mid,
                                {sites[a], sites[a + 1]});
    b.add_term({{a, Pauli::X}, {a + 1, Pauli::Y}}, 1.0, idx,
               "XY_" + brace({sites[a], sites[a + 1]}));
    const int rdx = b.add_param("XY_" + brace({sites[a + 1], sites[a]}),
                                ParamRole::momentum_coupling, mid,
                                {sites[a + 1], sites[a]});
    b.add_term({{a, Pauli::Y}, {a + 1, Pauli::X}}, 1.0, rdx,
               "XY_" + brace({sites[a + 1], sites[a]}));
  }
}

void build_exchange_with_corrections(FamilyBuilder& b,
                                     const std::vector<int>& sites,
                                     const CorrectionLevels& levels) {
  const int m = static_cast<int>(sites.size());
  for (int a = 0; a < m; ++a) {
    for (int c = a + 1; c < m; ++c) {
      const std::string label = "J~_" + brace({sites[a], sites[c]});
      const double mid = 0.5 * (sites[a] + sites[c]);
      const int idx = b.add_param(label, ParamRole::bond_coupling, mid,
                                  {sites[a], sites[c]});
      // Flip-flop pair: (sx sx + sy sy)/2 = s+ s- + s- s+.
      b.add_term({{a, Pauli::X}, {c, Pauli::X}}, 0.5, idx, label);
      b.add_term({{a, Pauli::Y}, {c, Pauli::Y}}, 0.5, idx, label);
    }
  }
  for (int a = 0; a < m; ++a) {
    const std::string label = "B~_" + std::to_string(sites[a]);
    const int idx = b.add_param(label, ParamRole::field_coupling,
                                static_cast<double>(sites[a]), {sites[a]});
    b.add_term({{a, Pauli::Z}}, 1.0, idx, label);
  }
  if (levels.k1) {
    for (int a = 0; a < m; ++a) {
      for (int c = a + 1; c < m; ++c) {
        const std::string label = "K1_" + brace({sites[a], sites[c]});
        const double mid = 0.5 * (sites[a] + sites[c]);
        const int idx = b.add_param(label, ParamRole::correction_coupling, mid,
                                    {sites[a], sites[c]});
        b.add_term({{a, Pauli::X}, {c, Pauli::Y}}, 1.0, idx, label);
        b.add_term({{a, Pauli::Y}, {c, Pauli::X}}, -1.0, idx, label);
      }
    }
  }
  if (levels.k2) {
    for (int a = 0; a < m; ++a) {
      for (int c = a + 1; c < m; ++c) {
        for (int e = 0; e < m; ++e) {
          if (e == a || e == c) continue;
          const std::string label = "K2_" + brace({sites[a], sites[c]}) + ";" +
                                    std::to_string(sites[e]);
          const double mid = (sites[a] + sites[c] + sites[e]) / 3.0;
          const int idx = b.add_param(label, ParamRole::correction_coupling,
                                      mid, {sites[a], sites[c], sites[e]});
          b.add_term({{a, Pauli::X}, {c, Pauli::Y}, {e, Pauli::Z}}, 1.0, idx, label);
          b.add_term({{a, Pauli::Y}, {c, Pauli::X}, {e, Pauli::Z}}, -1.0, idx, label);
        }
      }
    }
  }
  if (levels.k3) {
    for (int a = 0; a < m; ++a) {
      for (int c = a + 1; c < m; ++c) {
        const std::string label = "K3_" + brace({sites[a], sites[c]});
        const double mid = 0.5 * (sites[a] + sites[c]);
        const int idx = b.add_param(label, ParamRole::correction_coupling, mid,
                                    {sites[a], sites[c]});
        b.add_term({{a, Pauli::Z}, {c, Pauli::Z}}, 1.0, idx, label);
      }
    }
    for (int a = 0; a < m; ++a) {
      for (int c = a + 1; c < m; ++c) {
        for (int e = c + 1; e < m; ++e) {
          const std::string label = "K3_" + brace({sites[a], sites[c], sites[e]});
          const double mid = (sites[a] + sites[c] + sites[e]) / 3.0;
          const int idx = b.add_param(label, ParamRole::correction_coupling,
                                      mid, {sites[a], sites[c], sites[e]});
          b.add_term({{a, Pauli::Z}, {c, Pauli::Z}, {e, Pauli::Z}}, 1.0, idx, label);
        }
      }
    }
  }
  if (levels.k4) {
    for (int a = 0; a < m; ++a) {
      for (int c = a + 1; c < m; ++c) {
        for (int e = 0; e < m; ++e) {
          if (e == a || e == c) continue;
          const std::string label = "K4_" + brace({sites[a], sites[c]}) + ";" +
                                    std::to_string(sites[e]);
          const double mid = (sites[a] + sites[c] + sites[e]) / 3.0;
          const int idx = b.add_param(label, ParamRole::correction_coupling,
                                      mid, {sites[a], sites[c], sites[e]});
          b.add_term({{a, Pauli::X}, {c, Pauli::X}, {e, Pauli::Z}}, 1.0, idx, label);
          b.add_term({{a, Pauli::Y}, {c, Pauli::Y}, {e, Pauli::Z}}, 1.0, idx, label);
        }
      }
    }
  }
}

}  // namespace

AnsatzFamily build_ansatz(AnsatzKind kind, const std::vector<int>& subsystem,
                          const SpinModel& base_model,
                          const AnsatzOptions& options) {
  if (subsystem.size() < 2) {
    throw std::invalid_argument("ansatz needs at least two subsystem sites");
  }
  for (int s : subsystem) {
    if (s < 0 || s >= base_model.n_sites) {
      throw std::invalid_argument("subsystem site outside the model chain");
    }
  }
  FamilyBuilder b;
  switch (kind) {
    case AnsatzKind::deformed_ising_local:
      build_deformed_ising_local(b, subsystem, base_model, options);
      break;
    case AnsatzKind::parabolic_reduced:
      build_parabolic_reduced(b, subsystem, base_model);
      break;
    case AnsatzKind::quench_energy_momentum:
      build_quench_energy_momentum(b, subsystem);
      break;
    case AnsatzKind::exchange_with_corrections:
      build_exchange_with_corrections(b, subsystem, options.corrections);
      break;
    case AnsatzKind::custom:
      throw std::invalid_argument("custom families are built from explicit terms");
  }
  AnsatzFamily f = AnsatzFamily::from_terms(std::move(b.terms), std::move(b.params),
                                            subsystem, base_model.n_sites, kind);
  f.base_ = base_model;
  return f;
}

AnsatzFamily build_ansatz(AnsatzKind kind, int n_a, const SpinModel& base_model,
                          const AnsatzOptions& options) {
  std::vector<int> subsystem(static_cast<std::size_t>(n_a));
  for (int i = 0; i < n_a; ++i) subsystem[static_cast<std::size_t>(i)] = i;
  return build_ansatz(kind, subsystem, base_model, options);
}

MatrixXcd assemble_eh(const AnsatzFamily& family, const ParamVector& params) {
  return family.assemble(params.g);
}

double profile_coordinate(const AnsatzFamily& family, double global_position) {
  return anchor_coordinate(family.sites(), family.n_model_sites(),
                           global_position);
}

DensityMatrix density_matrix_from_params(const AnsatzFamily& family,
                                         const ParamVector& params) {
  if (params.p < 0.0 || params.p > 1.0) {
    throw std::invalid_argument("depolarization weight must lie in [0, 1]");
  }
  const auto d = static_cast<Eigen::Index>(family.dim());
  const DensityMatrix coherent =
      gibbs_from_eh(family.assemble(params.g), family.n_subsystem_sites());
  if (params.p == 0.0) return coherent;
  MatrixXcd rho = (1.0 - params.p) * coherent.matrix() +
                  params.p / static_cast<double>(d) * MatrixXcd::Identity(d, d);
  return DensityMatrix(std::move(rho), family.n_subsystem_sites());
}

}  // namespace eht
