#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eht/ansatz.hpp"
#include "eht/models.hpp"
#include "eht/random.hpp"
#include "eht/states.hpp"
#include "oracles.hpp"

using namespace eht;

namespace {

// Dense assembly straight from the labelled terms, via kron products.
MatrixXcd dense_assemble(const AnsatzFamily& f, const VectorXd& g) {
  const int m = f.n_subsystem_sites();
  const auto d = static_cast<Eigen::Index>(f.dim());
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (const auto& t : f.terms()) {
    h += g(t.param_index) * t.prefactor * oracles::dense_pauli_string(t.string, m);
  }
  return h;
}

int count_params_with_role(const AnsatzFamily& f, ParamRole role) {
  int n = 0;
  for (const auto& p : f.params()) {
    if (p.role == role) ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("ansatz") {

TEST_CASE("parabolic family always has exactly three parameters") {
  const auto model = SpinModel::long_range(10, 2.5, 0.88);
  for (int na : {2, 4, 7}) {
    const auto f = build_ansatz(AnsatzKind::parabolic_reduced, na, model);
    CHECK(f.n_params() == 3);
    CHECK(count_params_with_role(f, ParamRole::profile_coefficient) == 3);
    // Every pair and field contributes one string per coefficient.
    const int pairs = na * (na - 1) / 2;
    CHECK(static_cast<int>(f.terms().size()) == 3 * (pairs + na));
  }
}

TEST_CASE("site-resolved deformation has one pair and one field parameter per site") {
  const auto model = SpinModel::long_range(12, 2.5, 0.88);
  const auto f = build_ansatz(AnsatzKind::deformed_ising_local, 8, model);
  CHECK(f.n_params() == 16);
  CHECK(count_params_with_role(f, ParamRole::pair_deformation) == 8);
  CHECK(count_params_with_role(f, ParamRole::field_deformation) == 8);
  const int pairs = 8 * 7 / 2;
  CHECK(static_cast<int>(f.terms().size()) == pairs + 8);
}

TEST_CASE("exchange family term and parameter counts follow the correction levels") {
  const auto model = SpinModel::long_range(8, 1.24, 10.0, 1.0, ModelVariant::exchange_xy);
  const int m = 5;
  const int pairs = m * (m - 1) / 2;  // 10

  const auto base = build_ansatz(AnsatzKind::exchange_with_corrections, m, model);
  CHECK(base.n_params() == pairs + m);
  CHECK(static_cast<int>(base.terms().size()) == 2 * pairs + m);

  AnsatzOptions opt;
  opt.corrections.k1 = true;
  const auto k1 = build_ansatz(AnsatzKind::exchange_with_corrections, m, model, opt);
  CHECK(k1.n_params() == pairs + m + pairs);
  CHECK(static_cast<int>(k1.terms().size()) == 2 * pairs + m + 2 * pairs);

  opt.corrections = CorrectionLevels::none();
  opt.corrections.k3 = true;
  const auto k3 = build_ansatz(AnsatzKind::exchange_with_corrections, m, model, opt);
  const int triples = m * (m - 1) * (m - 2) / 6;  // 10
  CHECK(k3.n_params() == pairs + m + pairs + triples);
  CHECK(static_cast<int>(k3.terms().size()) == 2 * pairs + m + pairs + triples);

  opt.corrections = CorrectionLevels::all();
  const auto full = build_ansatz(AnsatzKind::exchange_with_corrections, m, model, opt);
  const int spectators = pairs * (m - 2);  // K2 and K4 each: pair x extra site
  CHECK(full.n_params() == pairs + m + pairs + spectators + (pairs + triples) + spectators);
}

TEST_CASE("zero parameters assemble to the zero matrix") {
  const auto model = SpinModel::long_range(6, 2.5, 0.88);
  const auto f = build_ansatz(AnsatzKind::deformed_ising_local, 4, model);
  const MatrixXcd h = f.assemble(VectorXd::Zero(f.n_params()));
  CHECK(h.norm() == 0.0);
}

TEST_CASE("custom single-site family reproduces the Pauli matrix") {
  const auto f = AnsatzFamily::from_terms(
      {{{{0, Pauli::Z}}, 1.0, 0, "z"}, {{{1, Pauli::X}}, 1.0, 1, "x"}},
      {{"gz", ParamRole::field_coupling, 0.0, {0}},
       {"gx", ParamRole::field_coupling, 1.0, {1}}},
      {0, 1}, 2);
  VectorXd g(2);
  g << 2.0, 0.0;
  MatrixXcd h = f.assemble(g);
  MatrixXcd want = 2.0 * oracles::op_on_site(oracles::pauli_matrix(Pauli::Z), 0, 2);
  CHECK((h - want).norm() < 1e-14);
  g << 0.0, -1.5;
  h = f.assemble(g);
  want = -1.5 * oracles::op_on_site(oracles::pauli_matrix(Pauli::X), 1, 2);
  CHECK((h - want).norm() < 1e-14);
}

TEST_CASE("assemble matches a dense kron oracle for every named family") {
  const auto ising = SpinModel::long_range(9, 2.5, 0.88);
  const auto nn = SpinModel::nearest_neighbor(9, 0.97);
  const auto xy = SpinModel::long_range(9, 1.24, 10.0, 1.0, ModelVariant::exchange_xy);
  AnsatzOptions all;
  all.corrections = CorrectionLevels::all();

  std::vector<AnsatzFamily> families;
  families.push_back(build_ansatz(AnsatzKind::deformed_ising_local, 5, ising));
  families.push_back(build_ansatz(AnsatzKind::parabolic_reduced, 5, ising));
  families.push_back(build_ansatz(AnsatzKind::quench_energy_momentum, 5, nn));
  families.push_back(build_ansatz(AnsatzKind::exchange_with_corrections, 4, xy, all));

  SeedStream stream(314159);
  auto rng = stream.engine(0);
  for (const auto& f : families) {
    VectorXd g(f.n_params());
    for (int i = 0; i < g.size(); ++i) g(i) = 2.0 * uniform01(rng) - 1.0;
    const MatrixXcd h = f.assemble(g);
    CHECK((h - dense_assemble(f, g)).norm() < 1e-12);
    CHECK(hermiticity_defect(h) < 1e-12);
  }
}

TEST_CASE("assembly is linear in the parameters") {
  const auto model = SpinModel::long_range(7, 2.5, 0.88);
  const auto f = build_ansatz(AnsatzKind::deformed_ising_local, 4, model);
  SeedStream stream(99);
  auto rng = stream.engine(0);
  VectorXd a(f.n_params()), b(f.n_params());
  for (int i = 0; i < a.size(); ++i) {
    a(i) = 2.0 * uniform01(rng) - 1.0;
    b(i) = 2.0 * uniform01(rng) - 1.0;
  }
  const MatrixXcd lhs = f.assemble(0.3 * a + 0.7 * b);
  const MatrixXcd rhs = 0.3 * f.assemble(a) + 0.7 * f.assemble(b);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("quench family parameters map to their labelled strings") {
  const auto nn = SpinModel::nearest_neighbor(8, 0.97);
  const auto f = build_ansatz(AnsatzKind::quench_energy_momentum, 4, nn);
  // bonds + fields + two cross-term orientations per bond
  CHECK(f.n_params() == (4 - 1) + 4 + 2 * (4 - 1));

  VectorXd g = VectorXd::Zero(f.n_params());
  g(f.param_index("J~_{1,2}")) = 1.0;
  MatrixXcd want = oracles::dense_pauli_string({{1, Pauli::X}, {2, Pauli::X}}, 4);
  CHECK((f.assemble(g) - want).norm() < 1e-14);

  g.setZero();
  g(f.param_index("B~_3")) = -2.0;
  want = -2.0 * oracles::dense_pauli_string({{3, Pauli::Z}}, 4);
  CHECK((f.assemble(g) - want).norm() < 1e-14);

  g.setZero();
  g(f.param_index("XY_{0,1}")) = 0.5;
  want = 0.5 * oracles::dense_pauli_string({{0, Pauli::X}, {1, Pauli::Y}}, 4);
  CHECK((f.assemble(g) - want).norm() < 1e-14);

  // The reverse orientation is an independent parameter on the same bond.
  g.setZero();
  g(f.param_index("XY_{1,0}")) = -0.25;
  want = -0.25 * oracles::dense_pauli_string({{0, Pauli::Y}, {1, Pauli::X}}, 4);
  CHECK((f.assemble(g) - want).norm() < 1e-14);
}

TEST_CASE("exchange family with corrections preserves subsystem magnetization") {
  const auto xy = SpinModel::long_range(8, 1.24, 10.0, 1.0, ModelVariant::exchange_xy);
  AnsatzOptions all;
  all.corrections = CorrectionLevels::all();
  const auto f = build_ansatz(AnsatzKind::exchange_with_corrections, 4, xy, all);

  MatrixXcd sz_total = MatrixXcd::Zero(16, 16);
  for (int s = 0; s < 4; ++s) {
    sz_total += oracles::dense_pauli_string({{s, Pauli::Z}}, 4);
  }
  SeedStream stream(7);
  auto rng = stream.engine(0);
  VectorXd g(f.n_params());
  for (int i = 0; i < g.size(); ++i) g(i) = 2.0 * uniform01(rng) - 1.0;
  const MatrixXcd h = f.assemble(g);
  CHECK((h * sz_total - sz_total * h).norm() < 1e-10);
}

TEST_CASE("K1 correction is antisymmetric under swapping the pair") {
  // XY - YX changes sign when the two sites swap, so the string pair built
  // for (k, l) must equal minus the one built for (l, k).
  const MatrixXcd xy = oracles::dense_pauli_string({{0, Pauli::X}, {1, Pauli::Y}}, 2);
  const MatrixXcd yx = oracles::dense_pauli_string({{0, Pauli::Y}, {1, Pauli::X}}, 2);
  CHECK(((xy - yx) + (yx - xy)).norm() < 1e-15);
  CHECK((xy - yx).norm() > 1.0);  // the combination is not trivially zero

  const auto model = SpinModel::long_range(6, 1.24, 10.0, 1.0, ModelVariant::exchange_xy);
  AnsatzOptions opt;
  opt.corrections.k1 = true;
  const auto f = build_ansatz(AnsatzKind::exchange_with_corrections, 2, model, opt);
  VectorXd g = VectorXd::Zero(f.n_params());
  g(f.param_index("K1_{0,1}")) = 1.0;
  CHECK((f.assemble(g) - (xy - yx)).norm() < 1e-14);
}

TEST_CASE("no family emits identity strings") {
  const auto ising = SpinModel::long_range(8, 2.5, 0.88);
  const auto xy = SpinModel::long_range(8, 1.24, 10.0, 1.0, ModelVariant::exchange_xy);
  AnsatzOptions all;
  all.corrections = CorrectionLevels::all();
  for (const auto& f :
       {build_ansatz(AnsatzKind::deformed_ising_local, 5, ising),
        build_ansatz(AnsatzKind::parabolic_reduced, 5, ising),
        build_ansatz(AnsatzKind::quench_energy_momentum, 5, ising),
        build_ansatz(AnsatzKind::exchange_with_corrections, 5, xy, all)}) {
    for (const auto& t : f.terms()) CHECK(!t.string.empty());
  }
}

TEST_CASE("terms are sorted by body count, then leftmost site, then letters") {
  const auto xy = SpinModel::long_range(8, 1.24, 10.0, 1.0, ModelVariant::exchange_xy);
  AnsatzOptions all;
  all.corrections = CorrectionLevels::all();
  const auto f = build_ansatz(AnsatzKind::exchange_with_corrections, 5, xy, all);
  auto key = [](const OperatorTerm& t) {
    std::string letters;
    for (const auto& [s, p] : t.string) letters += pauli_letter(p);
    return std::make_tuple(t.string.size(), t.string.front().first, letters);
  };
  for (std::size_t i = 1; i < f.terms().size(); ++i) {
    CHECK(key(f.terms()[i - 1]) <= key(f.terms()[i]));
  }
}

TEST_CASE("fully depolarized state is maximally mixed") {
  const auto model = SpinModel::long_range(6, 2.5, 0.88);
  const auto f = build_ansatz(AnsatzKind::deformed_ising_local, 3, model);
  SeedStream stream(11);
  auto rng = stream.engine(0);
  ParamVector v;
  v.g.resize(f.n_params());
  for (int i = 0; i < v.g.size(); ++i) v.g(i) = uniform01(rng);
  v.p = 1.0;
  const auto rho = density_matrix_from_params(f, v);
  CHECK((rho.matrix() - MatrixXcd::Identity(8, 8) / 8.0).norm() < 1e-12);
}

TEST_CASE("depolarized Gibbs weights follow the closed form for diagonal generators") {
  // Single Z generator with coefficient ln(3)/2: exp(-H) has weights
  // (1/4, 3/4); mixing with weight p shifts both toward 1/2.
  const auto f = AnsatzFamily::from_terms(
      {{{{0, Pauli::Z}}, 1.0, 0, "z"}},
      {{"gz", ParamRole::field_coupling, 0.0, {0}}}, {0}, 1);
  ParamVector v;
  v.g.resize(1);
  v.g(0) = 0.5 * std::log(3.0);
  v.p = 0.2;
  const auto rho = density_matrix_from_params(f, v);
  CHECK(std::abs(rho.matrix()(0, 0).real() - (0.8 * 0.25 + 0.1)) < 1e-12);
  CHECK(std::abs(rho.matrix()(1, 1).real() - (0.8 * 0.75 + 0.1)) < 1e-12);
  CHECK(std::abs(rho.matrix()(0, 1)) < 1e-15);

  v.p = 1.5;
  CHECK_THROWS_AS(density_matrix_from_params(f, v), std::invalid_argument);
  v.p = -0.1;
  CHECK_THROWS_AS(density_matrix_from_params(f, v), std::invalid_argument);
}

TEST_CASE("pair deformation attaches to the larger index or the midpoint") {
  const auto model = SpinModel::long_range(10, 2.5, 0.88);

  const auto larger = build_ansatz(AnsatzKind::deformed_ising_local, 6, model);
  for (const auto& t : larger.terms()) {
    if (t.string.size() != 2) continue;
    const int hi = t.string.back().first;
    CHECK(larger.params()[t.param_index].label == "beta_" + std::to_string(hi));
  }

  AnsatzOptions opt;
  opt.attachment = PairAttachment::midpoint;
  const auto mid = build_ansatz(AnsatzKind::deformed_ising_local, 6, model, opt);
  for (const auto& t : mid.terms()) {
    if (t.string.size() != 2) continue;
    const int lo = t.string.front().first;
    const int hi = t.string.back().first;
    const int want = (lo + hi + 1) / 2;  // ceil of the average
    CHECK(mid.params()[t.param_index].label == "beta_" + std::to_string(want));
  }
}

TEST_CASE("distance to the entanglement cut") {
  const auto model = SpinModel::long_range(8, 2.5, 0.88);
  const auto left = build_ansatz(AnsatzKind::deformed_ising_local, {0, 1, 2}, model);
  // Only cut sits between sites 2 and 3.
  CHECK(left.distance_to_cut(0.0) == doctest::Approx(2.5));
  CHECK(left.distance_to_cut(2.0) == doctest::Approx(0.5));

  const auto bulk_model = SpinModel::long_range(10, 2.5, 0.88);
  const auto bulk = build_ansatz(AnsatzKind::deformed_ising_local, {3, 4, 5}, bulk_model);
  CHECK(bulk.distance_to_cut(3.0) == doctest::Approx(0.5));
  CHECK(bulk.distance_to_cut(4.0) == doctest::Approx(1.5));
  CHECK(bulk.distance_to_cut(5.5) == doctest::Approx(0.0));

  const auto whole_model = SpinModel::long_range(4, 2.5, 0.88);
  const auto whole = build_ansatz(AnsatzKind::deformed_ising_local, {0, 1, 2, 3},
                                  whole_model);
  CHECK(whole.distance_to_cut(1.7) == doctest::Approx(1.0));
}

TEST_CASE("parameter anchors sit on their sites") {
  const auto model = SpinModel::long_range(12, 2.5, 0.88);
  const auto f = build_ansatz(AnsatzKind::deformed_ising_local, {4, 5, 6, 7}, model);
  CHECK(f.params()[f.param_index("beta_5")].position == doctest::Approx(5.0));
  CHECK(f.params()[f.param_index("gamma_7")].position == doctest::Approx(7.0));
  CHECK(f.params()[f.param_index("gamma_7")].sites == std::vector<int>{7});

  const auto nn = SpinModel::nearest_neighbor(12, 0.97);
  const auto q = build_ansatz(AnsatzKind::quench_energy_momentum, {4, 5, 6}, nn);
  CHECK(q.params()[q.param_index("J~_{5,6}")].position == doctest::Approx(5.5));
}

TEST_CASE("family construction rejects bad input") {
  const auto model = SpinModel::long_range(6, 2.5, 0.88);
  CHECK_THROWS_AS(
      build_ansatz(AnsatzKind::deformed_ising_local, std::vector<int>{2}, model),
      std::invalid_argument);
  CHECK_THROWS_AS(build_ansatz(AnsatzKind::deformed_ising_local, {1, 0}, model),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_ansatz(AnsatzKind::deformed_ising_local, {4, 6}, model),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_ansatz(AnsatzKind::custom, {0, 1}, model),
                  std::invalid_argument);

  // from_terms validation: bad parameter reference, empty string, dup label.
  CHECK_THROWS_AS(AnsatzFamily::from_terms({{{{0, Pauli::Z}}, 1.0, 2, "z"}},
                                           {{"a", {}, 0.0, {0}}}, {0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnsatzFamily::from_terms({{{}, 1.0, 0, "id"}},
                                           {{"a", {}, 0.0, {0}}}, {0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnsatzFamily::from_terms({{{{0, Pauli::Z}}, 1.0, 0, "z"}},
                                           {{"a", {}, 0.0, {0}}, {"a", {}, 0.0, {0}}},
                                           {0}, 1),
                  std::invalid_argument);

  const auto f = build_ansatz(AnsatzKind::deformed_ising_local, 3, model);
  CHECK_THROWS_AS(f.assemble(VectorXd::Zero(f.n_params() + 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(f.param_index("nope"), std::invalid_argument);
}

TEST_CASE("kind names round-trip") {
  for (AnsatzKind k :
       {AnsatzKind::deformed_ising_local, AnsatzKind::parabolic_reduced,
        AnsatzKind::quench_energy_momentum, AnsatzKind::exchange_with_corrections,
        AnsatzKind::custom}) {
    CHECK(ansatz_kind_from_name(ansatz_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(ansatz_kind_from_name("bogus"), std::invalid_argument);
}

}  // TEST_SUITE
