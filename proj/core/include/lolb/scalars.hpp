#pragma once

namespace lolb {

/// eta(x) = -x ln x for x > 0, eta(0) = 0. Natural logarithm; all entropic
/// quantities in this library are in nats.
double eta(double x);

enum class BinaryEntropyVariant { plain, truncated };

/// Binary entropy h2(p) = eta(p) + eta(1-p). The truncated variant plateaus
/// at ln 2 on (1/2, 1], which makes it nondecreasing and concave on [0, 1].
double binary_entropy(double p, BinaryEntropyVariant variant = BinaryEntropyVariant::plain);

inline double h2(double p) { return binary_entropy(p); }
inline double h2_truncated(double p) {
  return binary_entropy(p, BinaryEntropyVariant::truncated);
}

/// g(x) = (x+1) ln(x+1) - x ln x, g(0) = 0. Strictly increasing and concave
/// on [0, inf); equals the max entropy of the oscillator level family at
/// mean energy x.
double g_fun(double x);

/// Homogeneous extension of the binary entropy to the positive quadrant:
/// H({x, y}) = eta(x) + eta(y) - eta(x + y).
double ext_binary_entropy(double x, double y);

/// Concavity/convexity-defect profile (a_f, b_f) of a locally almost affine
/// functional. Both defect functions are restricted to nonnegative multiples
/// of h2, which covers every functional handled by this library:
/// entropy and conditional entropy (0,1), divergences in the first argument
/// (1,0), mutual information (1,1), affine functionals (0,0).
struct LaaProfile {
  double a_coeff = 0.0;
  double b_coeff = 0.0;

  static constexpr LaaProfile entropy() { return {0.0, 1.0}; }
  static constexpr LaaProfile conditional_entropy() { return {0.0, 1.0}; }
  static constexpr LaaProfile divergence() { return {1.0, 0.0}; }
  static constexpr LaaProfile mutual_information() { return {1.0, 1.0}; }
  static constexpr LaaProfile affine() { return {0.0, 0.0}; }

  double a(double p) const;  ///< a_f(p) = a_coeff * h2(p)
  double b(double p) const;  ///< b_f(p) = b_coeff * h2(p)
};

struct LaaCorrections {
  double D_f = 0.0;      ///< (1+eps) (a_f + b_f)(eps / (1+eps))
  double a_tilde = 0.0;  ///< a_f(eps) on [0, 1/2], plateau a_f(1/2) on (1/2, 1]
};

/// Correction terms of the local lower bounds; both components are
/// nonnegative and nondecreasing in eps. Requires eps in (0, 1].
LaaCorrections laa_corrections(const LaaProfile& profile, double eps);

/// f(rho) - f~(rho ^ eps I) - D_f(eps) - a~_f(eps).
/// The caller supplies the two functional evaluations; no clamping here.
double laa_lower_bound_a(double f_at_center, double f_tilde_at_clip,
                         const LaaProfile& profile, double eps);

/// f~([rho - eps I]+) - D_f(eps) - a~_f(eps) - a_f(1 - r_eps),
/// where r_eps is the mass of the cut part.
double laa_lower_bound_b(double f_tilde_at_cut, double r_eps,
                         const LaaProfile& profile, double eps);

}  // namespace lolb
