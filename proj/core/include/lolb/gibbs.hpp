#pragma once

#include <cstddef>
#include <vector>

#include "lolb/density.hpp"

namespace lolb {

/// Nondecreasing sequence of nonnegative energy levels E_0 <= E_1 <= ...
/// Explicit lists are complete; generated families (the oscillator ladder
/// 0, 1, 2, ...) are materialized up to a cap and carry exact closed-form
/// partition tails for everything past the cap, so the Gibbs condition
/// sum exp(-beta E_k) < inf holds with a certificate.
class EnergySpectrum {
 public:
  enum class Family { explicit_list, oscillator };

  static EnergySpectrum from_levels(std::vector<double> levels);
  static EnergySpectrum oscillator(std::size_t cap);

  const std::vector<double>& levels() const { return levels_; }
  Family family() const { return family_; }
  bool has_tail() const { return family_ == Family::oscillator; }
  std::size_t cap() const { return levels_.size(); }

  /// Level k, also past the materialized cap for generated families.
  double level_at(std::size_t k) const;

  double ground() const { return levels_.front(); }
  std::size_t ground_multiplicity() const;

  /// sum_{k >= cap} exp(-beta E_k); 0 for explicit lists.
  double tail_partition(double beta) const;
  /// sum_{k >= cap} E_k exp(-beta E_k); 0 for explicit lists.
  double tail_energy(double beta) const;

 private:
  EnergySpectrum(std::vector<double> levels, Family family);
  std::vector<double> levels_;
  Family family_;
};

struct GibbsSolution {
  double beta = 0.0;
  double log_Z = 0.0;
  double F_value = 0.0;   ///< beta * E + log Z
  double E_target = 0.0;
  double residual = 0.0;  ///< |mean_energy(beta) - E|
  double tail_error = 0.0;
};

/// Solves sum E_k exp(-beta E_k) = E sum exp(-beta E_k) for beta > 0 on the
/// strictly decreasing mean-energy curve. E must lie strictly between the
/// ground level and the beta->0 mean (the arithmetic level mean for explicit
/// lists, +inf for tailed families); otherwise a range error names the
/// attainable interval.
GibbsSolution solve_beta(const EnergySpectrum& spectrum, double E);

struct MaxEntropyValue {
  double value = 0.0;       ///< F(E), the max entropy at mean energy <= E
  double tail_error = 0.0;  ///< certified upper bound on the value's error
  bool capped = false;      ///< true when E reached the unconstrained maximum
};

/// F(E) = sup { H(p) : sum E_k p_k <= E }. Handles the closures of the
/// attainable interval: F(E_0) = ln(multiplicity of E_0), and for explicit
/// lists F = ln(level count) once E reaches the arithmetic level mean.
MaxEntropyValue F_lambda_full(const EnergySpectrum& spectrum, double E);
double F_lambda(const EnergySpectrum& spectrum, double E);

struct GibbsStateResult {
  DensityOperator state;     ///< diagonal exp(-beta E_k)/Z, k < dim_cap
  double tail_mass;          ///< Gibbs weight beyond dim_cap (kept out of the state)
  /// Certified bound on F(E) - S(state): the entropy carried by the cut
  /// tail plus the extension defect eta(1 - tail_mass).
  double entropy_tail_error;
  GibbsSolution solution;
};

GibbsStateResult gibbs_state(const EnergySpectrum& spectrum, double E, std::size_t dim_cap);

struct EnergyEpsValue {
  double value = 0.0;
  double tail_error = 0.0;
};

/// E_{Lambda,eps} = sum_k E_k min(lambda_k, eps), pairing the nondecreasing
/// levels with the non-increasing eigenvalue sequence.
EnergyEpsValue energy_eps(const EnergySpectrum& spectrum,
                          const std::vector<double>& eigvals, double eps);

/// Closed forms for the oscillator Gibbs state rho_N with mean quantum
/// number N: the cut index n_eps, the rate factor R_N(eps), and the entropy
/// bound value g(N) - eps g(R_N(eps)) - g(eps) (for eps (N+1) >= 1 the
/// R-free branch g(N) - eps g(N/eps) - g(eps)).
struct OscillatorForms {
  int n_eps = 0;
  double R_N = 0.0;
  double bound_value = 0.0;
};

OscillatorForms oscillator_example_forms(double N, double eps);

}  // namespace lolb
