#include "lolb/scalars.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lolb {

double eta(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("eta: argument must be nonnegative");
  }
  // Below ~1e-300 the product would mix denormals with a huge log; the
  // limit is 0 anyway.
  if (x < 1e-300) return 0.0;
  return -x * std::log(x);
}

double binary_entropy(double p, BinaryEntropyVariant variant) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binary_entropy: argument must lie in [0, 1]");
  }
  if (variant == BinaryEntropyVariant::truncated && p > 0.5) {
    return std::numbers::ln2;
  }
  // Reflect to [0, 1/2]; 1 - p is exact there (Sterbenz), and log1p keeps
  // the small second term at full relative precision.
  if (p > 0.5) p = 1.0 - p;
  if (p < 1e-300) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double g_fun(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("g_fun: argument must be nonnegative");
  }
  if (x < 1e-300) return 0.0;
  return (x + 1.0) * std::log1p(x) - x * std::log(x);
}

double ext_binary_entropy(double x, double y) {
  return eta(x) + eta(y) - eta(x + y);
}

double LaaProfile::a(double p) const { return a_coeff == 0.0 ? 0.0 : a_coeff * h2(p); }
double LaaProfile::b(double p) const { return b_coeff == 0.0 ? 0.0 : b_coeff * h2(p); }

LaaCorrections laa_corrections(const LaaProfile& profile, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error("laa_corrections: eps must lie in (0, 1]");
  }
  if (profile.a_coeff < 0.0 || profile.b_coeff < 0.0) {
    throw std::domain_error("laa_corrections: profile coefficients must be nonnegative");
  }
  const double p = eps / (1.0 + eps);
  const double D = (1.0 + eps) * (profile.a(p) + profile.b(p));
  const double a_tilde = profile.a_coeff == 0.0 ? 0.0 : profile.a_coeff * h2_truncated(eps);
  return {D, a_tilde};
}

double laa_lower_bound_a(double f_at_center, double f_tilde_at_clip,
                         const LaaProfile& profile, double eps) {
  if (!std::isfinite(f_at_center)) {
    throw std::invalid_argument("laa_lower_bound_a: f(rho) must be finite");
  }
  const auto corr = laa_corrections(profile, eps);
  return f_at_center - f_tilde_at_clip - corr.D_f - corr.a_tilde;
}

double laa_lower_bound_b(double f_tilde_at_cut, double r_eps,
                         const LaaProfile& profile, double eps) {
  if (!(r_eps >= -1e-12 && r_eps <= 1.0 + 1e-12)) {
    throw std::invalid_argument("laa_lower_bound_b: r_eps must lie in [0, 1]");
  }
  const double r = std::min(1.0, std::max(0.0, r_eps));
  const auto corr = laa_corrections(profile, eps);
  return f_tilde_at_cut - corr.D_f - corr.a_tilde - profile.a(1.0 - r);
}

}  // namespace lolb
