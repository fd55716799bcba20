#include "eht/cft.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eht {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log(sinh(t)) for t > 0 without overflow: t + log(1 - e^{-2t}) - log 2.
double log_sinh(double t) {
  return t + std::log1p(-std::exp(-2.0 * t)) - std::log(2.0);
}

void validate_profile(const WeightProfile& profile) {
  if (!(profile.l > 0.0)) {
    throw std::invalid_argument("weight profile requires l > 0");
  }
  const bool needs_beta0 = profile.kind == WeightKind::short_range ||
                           profile.kind == WeightKind::thermal;
  if (needs_beta0 && !(profile.beta0 > 0.0)) {
    throw std::invalid_argument("weight profile requires beta0 > 0");
  }
}

}  // namespace

std::string weight_kind_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::bw_halfline: return "bw_halfline";
    case WeightKind::parabolic: return "parabolic";
    case WeightKind::short_range: return "short_range";
    case WeightKind::thermal: return "thermal";
  }
  throw std::invalid_argument("unknown weight kind");
}

WeightKind weight_kind_from_name(const std::string& name) {
  if (name == "bw_halfline") return WeightKind::bw_halfline;
  if (name == "parabolic") return WeightKind::parabolic;
  if (name == "short_range") return WeightKind::short_range;
  if (name == "thermal") return WeightKind::thermal;
  throw std::invalid_argument("unknown weight kind: " + name);
}

double evaluate_weight(const WeightProfile& profile, double x) {
  validate_profile(profile);
  if (!(x >= 0.0) || x > profile.l) {
    throw std::domain_error("weight coordinate outside [0, l]");
  }
  const double l = profile.l;
  const double b0 = profile.beta0;
  switch (profile.kind) {
    case WeightKind::bw_halfline:
      return 2.0 * kPi * x;
    case WeightKind::parabolic:
      return (l * l - x * x) / (2.0 * l);
    case WeightKind::short_range:
      return b0 * std::sinh(2.0 * kPi * (l - x) / b0);
    case WeightKind::thermal: {
      if (x == l) return 0.0;
      const double a = kPi * (l - x) / b0;
      const double b = kPi * (l + x) / b0;
      const double c = 2.0 * kPi * l / b0;
      return 2.0 * b0 * std::exp(log_sinh(a) + log_sinh(b) - log_sinh(c));
    }
  }
  throw std::invalid_argument("unknown weight kind");
}

std::vector<std::pair<double, double>> profile_table(const WeightProfile& profile,
                                                     int n_points) {
  validate_profile(profile);
  if (n_points < 2) {
    throw std::invalid_argument("profile table needs at least two points");
  }
  std::vector<std::pair<double, double>> table;
  table.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double x = profile.l * static_cast<double>(i) /
                     static_cast<double>(n_points - 1);
    table.emplace_back(x, evaluate_weight(profile, x));
  }
  return table;
}

ProfileComparison compare_fit_to_profile(const FitResult& fit,
                                         const AnsatzFamily& family,
                                         const WeightProfile& profile) {
  validate_profile(profile);
  if (fit.params.g.size() != family.n_params()) {
    throw std::invalid_argument("fit result does not match the family");
  }

  ProfileComparison out;
  for (int k = 0; k < family.n_params(); ++k) {
    const ParamInfo& info = family.params()[static_cast<std::size_t>(k)];
    const bool site_resolved = info.role == ParamRole::pair_deformation ||
                               info.role == ParamRole::field_deformation ||
                               info.role == ParamRole::bond_coupling ||
                               info.role == ParamRole::field_coupling;
    if (!site_resolved) continue;
    const double d = family.distance_to_cut(info.position);
    const double x =
        profile.kind == WeightKind::bw_halfline ? d : profile.l - d;
    out.positions.push_back(x);
    out.fitted.push_back(fit.params.g(k));
  }
  if (out.fitted.size() < 2) {
    throw std::invalid_argument(
        "family lacks site-resolved couplings to compare against a profile");
  }

  const std::size_t n = out.fitted.size();
  out.predicted.resize(n);
  double vw = 0.0;
  double ww = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = evaluate_weight(profile, out.positions[i]);
    out.predicted[i] = w;
    vw += out.fitted[i] * w;
    ww += w * w;
  }
  out.scale = ww > 0.0 ? vw / ww : 0.0;

  out.residuals.resize(n);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.predicted[i] *= out.scale;
    out.residuals[i] = out.fitted[i] - out.predicted[i];
    sum_sq += out.residuals[i] * out.residuals[i];
  }
  out.rms_residual = std::sqrt(sum_sq / static_cast<double>(n));

  double mean_v = 0.0;
  double mean_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_v += out.fitted[i];
    mean_w += out.predicted[i];
  }
  mean_v /= static_cast<double>(n);
  mean_w /= static_cast<double>(n);
  double cov = 0.0;
  double var_v = 0.0;
  double var_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dv = out.fitted[i] - mean_v;
    const double dw = out.predicted[i] - mean_w;
    cov += dv * dw;
    var_v += dv * dv;
    var_w += dw * dw;
  }
  // A series whose spread is pure rounding noise relative to its mean has
  // no meaningful correlation; report NaN rather than an artifact of ulps.
  const double nd = static_cast<double>(n);
  const bool flat_v = std::sqrt(var_v / nd) <= 1e-12 * std::abs(mean_v);
  const bool flat_w = std::sqrt(var_w / nd) <= 1e-12 * std::abs(mean_w);
  if (var_v <= 0.0 || var_w <= 0.0 || flat_v || flat_w) {
    out.correlation = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.correlation = cov / std::sqrt(var_v * var_w);
  }
  return out;
}

}  // namespace eht
