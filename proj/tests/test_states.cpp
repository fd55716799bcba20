#include <doctest.h>

#include <cmath>
#include <random>

#include "eht/states.hpp"
#include "oracles.hpp"

using namespace eht;

namespace {

PureState bell_pair() {
  VectorXcd v(4);
  v << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  return PureState(v, 2);
}

PureState ghz(int n) {
  VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(dim_of(n)));
  v(0) = 1.0 / std::sqrt(2.0);
  v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return PureState(v, n);
}

}  // namespace

TEST_SUITE_BEGIN("states");

TEST_CASE("pure state construction enforces normalization and size") {
  VectorXcd bad(3);
  bad << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(PureState(bad, 2), std::invalid_argument);
  CHECK_THROWS_AS(PureState(VectorXcd::Zero(4), 2), std::invalid_argument);

  VectorXcd v(4);
  v << 2.0, 0.0, 0.0, 0.0;  // renormalized on entry
  CHECK(PureState(v, 2).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density matrix construction rejects invalid inputs") {
  MatrixXcd not_hermitian(2, 2);
  not_hermitian << 0.5, cxd(0.2, 0.1), cxd(0.2, -0.3), 0.5;
  CHECK_THROWS_AS(DensityMatrix(not_hermitian, 1), std::invalid_argument);

  MatrixXcd wrong_trace = 0.7 * MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(wrong_trace, 1), std::invalid_argument);

  MatrixXcd negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix(negative, 1), std::invalid_argument);
}

TEST_CASE("bipartition validates site subsets") {
  CHECK_THROWS_AS(Bipartition({}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition({0, 0}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition({3, 1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition({4}, 4), std::invalid_argument);

  Bipartition part({0, 2}, 4);
  CHECK(part.traced() == std::vector<int>{1, 3});
  CHECK_FALSE(part.is_contiguous());
  CHECK(Bipartition::left_block(2, 4).is_contiguous());
}

TEST_CASE("partial trace of the Bell pair is maximally mixed") {
  const DensityMatrix red = partial_trace(bell_pair(), Bipartition({0}, 2));
  CHECK((red.matrix() - 0.5 * MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("partial trace of a product basis state is pure") {
  // "01": site 0 up, site 1 down -> keeping site 1 gives |1><1|.
  const PureState psi = PureState::basis_state(1, 2);
  const DensityMatrix red = partial_trace(psi, Bipartition({1}, 2));
  MatrixXcd expected(2, 2);
  expected << 0.0, 0.0, 0.0, 1.0;
  CHECK((red.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace matches squared singular values of the reshaping") {
  std::mt19937_64 rng(71);
  const VectorXcd amps = oracles::random_state(6, rng);
  const PureState psi(amps, 6);
  const DensityMatrix red = partial_trace(psi, Bipartition::left_block(3, 6));

  MatrixXcd reshaped(8, 8);
  for (Eigen::Index a = 0; a < 8; ++a) {
    for (Eigen::Index b = 0; b < 8; ++b) reshaped(a, b) = amps(a * 8 + b);
  }
  Eigen::JacobiSVD<MatrixXcd> svd(reshaped);
  VectorXd schmidt_sq = svd.singularValues().array().square();

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(red.matrix(), Eigen::EigenvaluesOnly);
  VectorXd evals = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    CHECK(std::abs(evals(i) - schmidt_sq(i)) < 1e-10);
  }
}

TEST_CASE("partial trace handles non-contiguous subsystems and mixed input") {
  std::mt19937_64 rng(72);
  const MatrixXcd rho_full = oracles::random_density(5, 40, rng);
  const DensityMatrix rho(rho_full, 5);
  const std::vector<int> keep{0, 2, 4};
  const DensityMatrix red = partial_trace(rho, Bipartition(keep, 5));
  const MatrixXcd expected = oracles::partial_trace_dense(rho.matrix(), keep, 5);
  CHECK((red.matrix() - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("partial trace of pure and mixed forms agree") {
  std::mt19937_64 rng(73);
  const PureState psi(oracles::random_state(5, rng), 5);
  const Bipartition part({1, 3}, 5);
  const DensityMatrix a = partial_trace(psi, part);
  const DensityMatrix b = partial_trace(DensityMatrix::from_pure(psi), part);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Schmidt symmetry: spectra over A and its complement agree") {
  std::mt19937_64 rng(74);
  const PureState psi(oracles::random_state(6, rng), 6);
  const Bipartition part({0, 1, 5}, 6);
  const auto spec_a = entanglement_spectrum(partial_trace(psi, part), 1e-10);
  const auto spec_b = entanglement_spectrum(
      partial_trace(psi, Bipartition(part.traced(), 6)), 1e-10);
  REQUIRE(spec_a.schmidt_rank == spec_b.schmidt_rank);
  for (std::size_t i = 0; i < spec_a.xis.size(); ++i) {
    CHECK(std::abs(spec_a.xis[i] - spec_b.xis[i]) < 1e-8);
  }
  CHECK(std::abs(spec_a.entropy_bits - spec_b.entropy_bits) < 1e-8);
}

TEST_CASE("gibbs map at zero Hamiltonian is the maximally mixed state") {
  const DensityMatrix rho = gibbs_from_eh(MatrixXcd::Zero(4, 4), 2);
  CHECK((rho.matrix() - 0.25 * MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("gibbs map on a diagonal single-qubit operator") {
  MatrixXcd h = MatrixXcd::Zero(2, 2);
  h(0, 0) = std::log(3.0);
  const DensityMatrix rho = gibbs_from_eh(h, 1);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("gibbs map matches the Taylor-series exponential") {
  std::mt19937_64 rng(75);
  const MatrixXcd h = oracles::random_hermitian(8, rng);
  const MatrixXcd e = oracles::expm_taylor(-h);
  const MatrixXcd expected = e / e.trace().real();
  const DensityMatrix rho = gibbs_from_eh(h, 3);
  CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gibbs map is invariant under constant shifts") {
  std::mt19937_64 rng(76);
  const MatrixXcd h = oracles::random_hermitian(8, rng);
  const DensityMatrix a = gibbs_from_eh(h, 3);
  const DensityMatrix b = gibbs_from_eh(h + 17.3 * MatrixXcd::Identity(8, 8), 3);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gibbs map rejects non-Hermitian input") {
  MatrixXcd h = MatrixXcd::Zero(2, 2);
  h(0, 1) = cxd(0.0, 1e-3);
  CHECK_THROWS_AS(gibbs_from_eh(h, 1), std::invalid_argument);
}

TEST_CASE("entanglement spectrum of known states") {
  SUBCASE("maximally mixed qubit") {
    const auto spec = entanglement_spectrum(DensityMatrix::maximally_mixed(1));
    REQUIRE(spec.xis.size() == 2);
    CHECK(spec.xis[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(spec.xis[1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(spec.entropy_bits == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("pure state") {
    const auto spec = entanglement_spectrum(
        DensityMatrix::from_pure(PureState::basis_state(0, 1)), 1e-6);
    REQUIRE(spec.schmidt_rank == 1);
    CHECK(std::abs(spec.xis[0]) < 1e-12);
    CHECK(std::abs(spec.entropy_bits) < 1e-12);
  }
  SUBCASE("Gibbs state of a known diagonal operator") {
    VectorXd h(4);
    h << 0.3, 1.1, 2.2, 3.0;
    MatrixXcd hm = h.cast<cxd>().asDiagonal();
    const auto spec = entanglement_spectrum(gibbs_from_eh(hm, 2), 1e-12);
    const double log_z = std::log((-h.array()).exp().sum());
    REQUIRE(spec.xis.size() == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(spec.xis[static_cast<std::size_t>(i)] ==
            doctest::Approx(h(i) + log_z).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectrum weights sum to one and truncation controls the rank") {
  std::mt19937_64 rng(77);
  const DensityMatrix rho(oracles::random_density(3, 20, rng), 3);
  const auto spec = entanglement_spectrum(rho);
  double weight = 0.0;
  double prev = -1.0;
  for (double xi : spec.xis) {
    CHECK(xi >= prev);
    prev = xi;
    weight += std::exp(-xi);
  }
  CHECK(std::abs(weight - 1.0) < 1e-8);

  const auto truncated = entanglement_spectrum(rho, 0.2);
  CHECK(truncated.schmidt_rank < spec.schmidt_rank);
  // Entropy comes from the full spectrum regardless of truncation.
  CHECK(truncated.entropy_bits == doctest::Approx(spec.entropy_bits).epsilon(1e-12));
}

TEST_CASE("GHZ spectrum across the middle cut") {
  const auto spec = entanglement_spectrum(
      partial_trace(ghz(4), Bipartition::left_block(2, 4)), 1e-8);
  REQUIRE(spec.schmidt_rank == 2);
  CHECK(spec.xis[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(spec.entropy_bits == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uhlmann fidelity of a state with itself is one") {
  std::mt19937_64 rng(78);
  const DensityMatrix rho(oracles::random_density(2, 8, rng), 2);
  CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("uhlmann fidelity of pure states is the squared overlap") {
  std::mt19937_64 rng(79);
  const VectorXcd a = oracles::random_state(3, rng);
  const VectorXcd b = oracles::random_state(3, rng);
  const double expected = std::norm(a.dot(b));
  const double f = uhlmann_fidelity(DensityMatrix::from_pure(PureState(a, 3)),
                                    DensityMatrix::from_pure(PureState(b, 3)));
  // rank-deficient inner matrix: zero eigenvalues carry sqrt(eps) noise
  CHECK(f == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("uhlmann fidelity matches the product-of-roots oracle") {
  std::mt19937_64 rng(80);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho(oracles::random_density(2, 8, rng), 2);
    const DensityMatrix sigma(oracles::random_density(2, 8, rng), 2);

    // F = (nuclear norm of sqrt(sigma) sqrt(rho))^2 via SVD.
    auto psd_sqrt = [](const MatrixXcd& m) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
      return MatrixXcd(es.eigenvectors() *
                       es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                       es.eigenvectors().adjoint());
    };
    Eigen::JacobiSVD<MatrixXcd> svd(psd_sqrt(sigma.matrix()) * psd_sqrt(rho.matrix()));
    const double expected = std::pow(svd.singularValues().sum(), 2.0);

    const double f = uhlmann_fidelity(rho, sigma);
    CHECK(f == doctest::Approx(expected).epsilon(1e-8));
    CHECK(uhlmann_fidelity(sigma, rho) == doctest::Approx(f).epsilon(1e-8));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("unit fidelity implies vanishing trace distance") {
  std::mt19937_64 rng(81);
  const DensityMatrix rho(oracles::random_density(2, 8, rng), 2);
  MatrixXcd perturbed = rho.matrix();
  perturbed(0, 0) += 1e-12;
  perturbed(1, 1) -= 1e-12;
  const DensityMatrix sigma(perturbed, 2);
  CHECK(uhlmann_fidelity(rho, sigma) >= 1.0 - 1e-10);
  CHECK(trace_distance(rho, sigma) < 1e-8);

  const DensityMatrix other(oracles::random_density(2, 8, rng), 2);
  CHECK(uhlmann_fidelity(rho, other) < 1.0 - 1e-8);
  CHECK(trace_distance(rho, other) > 1e-8);
}

TEST_CASE("fmax of identical and hand-computable states") {
  std::mt19937_64 rng(82);
  const DensityMatrix rho(oracles::random_density(2, 8, rng), 2);
  CHECK(fmax_exact(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix pure = DensityMatrix::from_pure(PureState::basis_state(0, 1));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(1);
  CHECK(fmax_exact(pure, mixed) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fmax matches the trace-product arithmetic oracle") {
  std::mt19937_64 rng(83);
  const DensityMatrix r1(oracles::random_density(2, 8, rng), 2);
  const DensityMatrix r2(oracles::random_density(2, 8, rng), 2);
  cxd cross = 0.0, p1 = 0.0, p2 = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      cross += r1.matrix()(i, j) * r2.matrix()(j, i);
      p1 += r1.matrix()(i, j) * r1.matrix()(j, i);
      p2 += r2.matrix()(i, j) * r2.matrix()(j, i);
    }
  }
  const double expected = cross.real() / std::max(p1.real(), p2.real());
  CHECK(fmax_exact(r1, r2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fmax against a pure state equals the Uhlmann fidelity") {
  std::mt19937_64 rng(84);
  const DensityMatrix pure =
      DensityMatrix::from_pure(PureState(oracles::random_state(2, rng), 2));
  const DensityMatrix mixed(oracles::random_density(2, 8, rng), 2);
  CHECK(fmax_exact(pure, mixed) ==
        doctest::Approx(uhlmann_fidelity(pure, mixed)).epsilon(1e-6));
}

TEST_CASE("born probabilities in the computational basis") {
  const DensityMatrix rho = DensityMatrix::from_pure(PureState::basis_state(1, 2));
  const std::vector<Matrix2cd> identity(2, Matrix2cd::Identity());
  const VectorXd probs = born_probabilities(rho, identity);
  CHECK(probs(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("balanced rotation of a basis state gives uniform outcomes") {
  Matrix2cd hadamard;
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::from_pure(PureState::basis_state(0, 1));
  const VectorXd probs = born_probabilities(rho, {hadamard});
  CHECK(probs(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(probs(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("born probabilities match the dense tensor-product oracle") {
  std::mt19937_64 rng(85);
  const DensityMatrix rho(oracles::random_density(3, 12, rng), 3);
  std::vector<Matrix2cd> us;
  MatrixXcd full = MatrixXcd::Identity(1, 1);
  for (int s = 0; s < 3; ++s) {
    const MatrixXcd u = oracles::random_unitary(2, rng);
    us.push_back(u);
    full = oracles::kron(full, u);
  }
  const VectorXd expected = (full.adjoint() * rho.matrix() * full).diagonal().real();
  const VectorXd probs = born_probabilities(rho, us);
  CHECK((probs - expected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(probs.minCoeff() >= 0.0);
  CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("born probabilities validate the rotation count") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  CHECK_THROWS_AS(born_probabilities(rho, {Matrix2cd::Identity()}),
                  std::invalid_argument);
}

TEST_SUITE_END();
