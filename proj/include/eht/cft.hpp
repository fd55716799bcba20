#pragma once

#include <string>
#include <vector>

#include "eht/ansatz.hpp"
#include "eht/fitting.hpp"

namespace eht {

// Closed-form local inverse-temperature profiles beta(x) predicted for
// entanglement Hamiltonians of critical and near-critical chains. The
// half-line profile measures x as the distance from its single cut, so it
// grows linearly from beta(0) = 0. The bounded profiles live on [0, l] with
// x the distance from the subsystem center and the cut at x = l, where they
// vanish.
enum class WeightKind {
  bw_halfline,   // beta(x) = 2*pi*x
  parabolic,     // beta(x) = (l^2 - x^2) / (2l)
  short_range,   // beta(x) = beta0 * sinh(2*pi*(l - x)/beta0)
  thermal,       // beta(x) = 2*beta0*sinh(pi(l-x)/b0)*sinh(pi(l+x)/b0)/sinh(2*pi*l/b0)
};

std::string weight_kind_name(WeightKind kind);
WeightKind weight_kind_from_name(const std::string& name);

struct WeightProfile {
  WeightKind kind = WeightKind::bw_halfline;
  double l = 1.0;       // subsystem length scale; domain is [0, l]
  double beta0 = 1.0;   // initial-state scale; used by short_range/thermal
};

// Evaluates beta(x). The thermal profile is computed in log space so that
// deep-saturation regimes (l >> beta0) stay finite instead of overflowing
// in the intermediate sinh factors.
double evaluate_weight(const WeightProfile& profile, double x);

// Uniform (x, beta) table over [0, l] with n_points >= 2 rows.
std::vector<std::pair<double, double>> profile_table(const WeightProfile& profile,
                                                     int n_points);

// Comparison of site-resolved fitted couplings against a profile shape.
// Profiles are defined up to one global normalization, so a least-squares
// scale is fitted before residuals are taken.
struct ProfileComparison {
  std::vector<double> positions;   // profile coordinate x per coupling
  std::vector<double> fitted;      // fitted coupling values
  std::vector<double> predicted;   // scale * beta(x)
  std::vector<double> residuals;   // fitted - predicted
  double scale = 0.0;              // least-squares normalization
  double correlation = 0.0;        // Pearson, NaN if either side is constant
  double rms_residual = 0.0;
};

// Maps each site-resolved coupling (pair/field deformations, bond/field
// couplings) to its distance from the nearest entanglement cut, converts
// that to the profile coordinate, and compares values against the profile.
// Momentum and correction couplings carry no energy-density weight and are
// excluded. Throws if the family has no site-resolved couplings (e.g. the
// shared-polynomial reduced family).
ProfileComparison compare_fit_to_profile(const FitResult& fit,
                                         const AnsatzFamily& family,
                                         const WeightProfile& profile);

}  // namespace eht
