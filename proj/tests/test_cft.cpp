#include <doctest.h>

#include <cmath>

#include "eht/ansatz.hpp"
#include "eht/cft.hpp"
#include "eht/models.hpp"

using namespace eht;

namespace {

constexpr double kPi = 3.14159265358979323846;

FitResult fit_with(const AnsatzFamily& family, const VectorXd& g) {
  FitResult res;
  res.params.g = g;
  return res;
}

}  // namespace

TEST_SUITE("cft") {

TEST_CASE("half-line weight grows linearly from the cut") {
  const WeightProfile p{WeightKind::bw_halfline, 4.0, 1.0};
  CHECK(evaluate_weight(p, 0.0) == doctest::Approx(0.0));
  CHECK(evaluate_weight(p, 1.0) == doctest::Approx(2.0 * kPi));
  CHECK(evaluate_weight(p, 3.5) == doctest::Approx(7.0 * kPi));
}

TEST_CASE("parabolic weight endpoints") {
  const WeightProfile p{WeightKind::parabolic, 4.0, 1.0};
  CHECK(evaluate_weight(p, 0.0) == doctest::Approx(2.0));  // l/2 at center
  CHECK(evaluate_weight(p, 4.0) == doctest::Approx(0.0));  // zero at the cut
}

TEST_CASE("thermal weight saturates to beta0 deep in the bulk") {
  const WeightProfile p{WeightKind::thermal, 10.0, 1.0};
  CHECK(std::abs(evaluate_weight(p, 0.0) - 1.0) < 1e-12);

  // Saturation regimes far beyond the range of naive sinh evaluation must
  // still come out finite and correct.
  const WeightProfile deep{WeightKind::thermal, 200.0, 1.0};
  const double bulk = evaluate_weight(deep, 100.0);
  CHECK(std::isfinite(bulk));
  CHECK(std::abs(bulk - 1.0) < 1e-12);
}

TEST_CASE("short-range weight is linear near the cut") {
  const double beta0 = 0.9;
  const WeightProfile p{WeightKind::short_range, 3.0, beta0};
  // Within a thirtieth of the scale the curvature correction stays under 1%.
  for (const double frac : {1.0 / 30.0, 1.0 / 40.0, 1.0 / 60.0, 1.0 / 100.0}) {
    const double delta = beta0 * frac;
    const double ratio =
        evaluate_weight(p, p.l - delta) / (2.0 * kPi * delta);
    CHECK(std::abs(ratio - 1.0) < 0.01);
  }
  // At a tenth of the scale the sinh has already bent away from linear by
  // several percent; pin the actual value so the window is documented.
  const double delta = beta0 / 10.0;
  const double ratio = evaluate_weight(p, p.l - delta) / (2.0 * kPi * delta);
  CHECK(ratio > 1.01);
  CHECK(ratio == doctest::Approx(std::sinh(2.0 * kPi / 10.0) / (2.0 * kPi / 10.0))
                     .epsilon(1e-12));
}

TEST_CASE("thermal weight approaches the parabolic shape for large beta0") {
  const WeightProfile thermal{WeightKind::thermal, 1.0, 100.0};
  const WeightProfile para{WeightKind::parabolic, 1.0, 1.0};
  double lo = 1e300;
  double hi = 0.0;
  for (int i = 0; i <= 99; ++i) {
    const double x = 0.99 * static_cast<double>(i) / 99.0;
    const double ratio = evaluate_weight(thermal, x) / evaluate_weight(para, x);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    CHECK(std::abs(ratio - 2.0 * kPi) < 0.01 * 2.0 * kPi);
  }
  CHECK(hi / lo - 1.0 < 0.01);
}

TEST_CASE("bounded profiles are nonincreasing toward the cut") {
  for (const WeightKind kind :
       {WeightKind::parabolic, WeightKind::short_range, WeightKind::thermal}) {
    const WeightProfile p{kind, 5.0, 0.7};
    double prev = evaluate_weight(p, 0.0);
    for (int i = 1; i <= 100; ++i) {
      const double x = 5.0 * static_cast<double>(i) / 100.0;
      const double w = evaluate_weight(p, x);
      CHECK(w <= prev + 1e-12);
      CHECK(w >= 0.0);
      prev = w;
    }
  }
}

TEST_CASE("invalid coordinates and parameters are rejected") {
  const WeightProfile p{WeightKind::parabolic, 2.0, 1.0};
  CHECK_THROWS_AS(evaluate_weight(p, -1e-9), std::domain_error);
  CHECK_THROWS_AS(evaluate_weight(p, 2.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS(evaluate_weight({WeightKind::parabolic, 0.0, 1.0}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate_weight({WeightKind::thermal, 1.0, 0.0}, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate_weight({WeightKind::short_range, 1.0, -2.0}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("profile tables are uniform and consistent") {
  const WeightProfile p{WeightKind::parabolic, 2.0, 1.0};
  const auto table = profile_table(p, 5);
  REQUIRE(table.size() == 5);
  CHECK(table.front().first == doctest::Approx(0.0));
  CHECK(table.front().second == doctest::Approx(1.0));
  CHECK(table.back().first == doctest::Approx(2.0));
  CHECK(table.back().second == doctest::Approx(0.0));
  for (const auto& [x, w] : table) {
    CHECK(w == doctest::Approx(evaluate_weight(p, x)));
  }
  CHECK_THROWS_AS(profile_table(p, 1), std::invalid_argument);
}

TEST_CASE("weight kind names round-trip") {
  for (const WeightKind kind :
       {WeightKind::bw_halfline, WeightKind::parabolic, WeightKind::short_range,
        WeightKind::thermal}) {
    CHECK(weight_kind_from_name(weight_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(weight_kind_from_name("spherical"), std::invalid_argument);
}

TEST_CASE("planted linear couplings correlate with the half-line profile") {
  const auto model = SpinModel::long_range(8, 2.5, 0.88);
  const auto family =
      build_ansatz(AnsatzKind::deformed_ising_local, std::vector<int>{0, 1, 2, 3},
                   model);
  VectorXd g = VectorXd::Zero(family.n_params());
  for (int k = 0; k < family.n_params(); ++k) {
    const auto& info = family.params()[static_cast<std::size_t>(k)];
    g(k) = 0.37 * 2.0 * kPi * family.distance_to_cut(info.position);
  }

  const WeightProfile p{WeightKind::bw_halfline, 4.0, 1.0};
  const ProfileComparison cmp = compare_fit_to_profile(fit_with(family, g), family, p);
  REQUIRE(cmp.fitted.size() == 8);  // four pair + four field deformations
  CHECK(cmp.correlation > 0.99);
  CHECK(cmp.scale == doctest::Approx(0.37).epsilon(1e-9));
  CHECK(cmp.rms_residual < 1e-9);
}

TEST_CASE("momentum couplings are excluded from profile comparisons") {
  const auto family =
      build_ansatz(AnsatzKind::quench_energy_momentum, std::vector<int>{0, 1, 2},
                   SpinModel::nearest_neighbor(6, 0.5));
  VectorXd g = VectorXd::Zero(family.n_params());
  for (int k = 0; k < family.n_params(); ++k) {
    const auto& info = family.params()[static_cast<std::size_t>(k)];
    if (info.role == ParamRole::momentum_coupling) {
      g(k) = 0.33;  // junk that must not disturb the comparison
    } else {
      g(k) = 0.25 * 2.0 * kPi * family.distance_to_cut(info.position);
    }
  }
  const WeightProfile p{WeightKind::bw_halfline, 3.0, 1.0};
  const ProfileComparison cmp = compare_fit_to_profile(fit_with(family, g), family, p);
  REQUIRE(cmp.fitted.size() == 5);  // two bonds + three fields, no momentum
  CHECK(cmp.correlation > 0.999);
  CHECK(cmp.rms_residual < 1e-9);
}

TEST_CASE("flat couplings prefer the saturated thermal shape") {
  const auto model = SpinModel::long_range(12, 2.5, 0.88);
  const auto family = build_ansatz(AnsatzKind::deformed_ising_local,
                                   std::vector<int>{0, 1, 2, 3, 4, 5}, model);
  const VectorXd g = VectorXd::Constant(family.n_params(), 0.8);
  const FitResult res = fit_with(family, g);

  const ProfileComparison vs_thermal =
      compare_fit_to_profile(res, family, {WeightKind::thermal, 6.0, 0.6});
  const ProfileComparison vs_para =
      compare_fit_to_profile(res, family, {WeightKind::parabolic, 6.0, 1.0});
  const ProfileComparison vs_bw =
      compare_fit_to_profile(res, family, {WeightKind::bw_halfline, 6.0, 1.0});

  CHECK(vs_thermal.rms_residual < 0.01);
  CHECK(vs_thermal.rms_residual < vs_para.rms_residual);
  CHECK(vs_thermal.rms_residual < vs_bw.rms_residual);
  // A constant series has no variance, so the correlation is undefined.
  CHECK(std::isnan(vs_thermal.correlation));
}

TEST_CASE("families without site-resolved couplings are rejected") {
  const auto model = SpinModel::long_range(8, 2.5, 0.88);
  const auto family = build_ansatz(AnsatzKind::parabolic_reduced,
                                   std::vector<int>{0, 1, 2, 3}, model);
  const VectorXd g = VectorXd::Zero(family.n_params());
  CHECK_THROWS_AS(compare_fit_to_profile(fit_with(family, g), family,
                                         {WeightKind::parabolic, 4.0, 1.0}),
                  std::invalid_argument);

  // A parameter vector of the wrong size cannot be compared either.
  const auto quench =
      build_ansatz(AnsatzKind::quench_energy_momentum, std::vector<int>{0, 1, 2},
                   SpinModel::nearest_neighbor(6, 0.5));
  CHECK_THROWS_AS(compare_fit_to_profile(fit_with(quench, VectorXd::Zero(2)), quench,
                                         {WeightKind::parabolic, 3.0, 1.0}),
                  std::invalid_argument);
}

}  // TEST_SUITE
