#pragma once

#include <optional>
#include <vector>

#include "lolb/classical_bounds.hpp"
#include "lolb/density.hpp"
#include "lolb/gibbs.hpp"
#include "lolb/report.hpp"

namespace lolb {

struct EntropyBoundOptions {
  bool finite_rank = true;                   ///< emit "B-lb-1" when applicable
  std::optional<EnergyConstraint> energy;    ///< emit "B-lb-2" and "B-lb-2+"
};

/// Von Neumann entropy bounds over the trace-norm ball: the universal
/// clipping bounds "B-lb-3+" and "B-lb-3++", the rank bound "B-lb-1"
/// (requires eps <= 1 - 1/rank, otherwise omitted), and with an energy
/// constraint the max-entropy bounds "B-lb-2" (via F(E/eps)) and "B-lb-2+"
/// (via the sharper F(E_{Lambda,eps}/eps)).
std::vector<BoundReport> entropy_lower_bounds(const DensityOperator& rho, double eps,
                                              const EntropyBoundOptions& options = {});

struct ConvIneqSides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;  ///< false when eps |I_eps| > 1 (h2 domain)
};

/// Both sides of the convexity estimate
/// S([rho - eps I]+) >= sum_I eta(lambda_i) - eta(sum_I lambda_i)
///                      - eps |I| ln |I| - h2(eps |I|).
ConvIneqSides conv_ineq_check(const DensityOperator& rho, double eps);

/// Energy bound "H-LB+": sum_{<tau_k|rho|tau_k> > eps} E_k (<tau_k|rho|tau_k> - eps).
/// The eigenbasis defaults to the standard basis; columns must be orthonormal.
BoundReport energy_lower_bound(const DensityOperator& rho, const EnergySpectrum& spectrum,
                               double eps, const Eigen::MatrixXcd* eigenbasis = nullptr);

struct RelativeEntropyBoundOptions {
  std::optional<int> d;                      ///< emit "RE-LB+A" (rank-restricted)
  std::optional<EnergyConstraint> energy;    ///< emit "RE-LB+B" (energy ball)
  /// Replace the eta(1 - r_eps) tail of "RE-LB+D" by h2(1 - r_eps), the form
  /// appearing inside the derivation; off by default.
  bool proof_variant_tail = false;
};

/// Relative-entropy bounds: "RE-LB+D" on the full ball (faithful only for
/// commuting pairs diagonal in a common basis), "RE-LB+C" on the commuting
/// ball, "RE-LB+A" on the rank-restricted ball, "RE-LB+B" on the
/// energy-constrained ball. Requires supp rho within supp omega; otherwise
/// throws support_violation.
std::vector<BoundReport> relative_entropy_lower_bounds(
    const DensityOperator& rho, const DensityOperator& omega, double eps,
    const RelativeEntropyBoundOptions& options = {});

struct QceBoundOptions {
  bool rank_bound = true;                    ///< emit "CE-LB-1"
  std::optional<EnergyConstraint> energy;    ///< emit "CE-LB-2"
};

/// Conditional-entropy bounds for the q-c state of an ensemble, over the
/// block trace-norm ball: clipping bounds "CE-LB-3+" / "CE-LB-3++", the rank
/// bound "CE-LB-1" and the energy bound "CE-LB-2".
std::vector<BoundReport> qce_lower_bounds(const QCEnsemble& ensemble, double eps,
                                          const QceBoundOptions& options = {});

}  // namespace lolb
