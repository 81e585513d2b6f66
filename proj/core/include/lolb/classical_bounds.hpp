#pragma once

#include <optional>
#include <vector>

#include "lolb/gibbs.hpp"
#include "lolb/prob.hpp"
#include "lolb/report.hpp"

namespace lolb {

/// A mean-energy constraint: the relevant marginal has mean at most `cap`
/// against the levels of `spectrum`.
struct EnergyConstraint {
  EnergySpectrum spectrum;
  double cap;
};

/// L_H(p|eps) >= H([p - eps]+) - g(eps), the universal Shannon-entropy bound
/// ("B-lb-3+c"). Valid for every distribution, including truncations of
/// infinite-entropy ones.
BoundReport entropy_lower_bound(const ProbArray& p, double eps);

/// L over the TV ball of the affine functional sum E_i p_i:
/// sum_{p_i > eps} E_i (p_i - eps) ("H-LB+c"). Already nonnegative.
BoundReport affine_functional_lower_bound(const ProbArray& p,
                                          const EnergySpectrum& spectrum, double eps);

struct EquivocationOptions {
  std::optional<std::size_t> support_size;   ///< override for |p_1|
  std::optional<EnergyConstraint> energy;    ///< marginal-1 mean constraint
};

/// Bounds on the equivocation H(X1|X2) over the TV ball: the support bound
/// "CE-LB-c-1", the optional energy bound "CE-LB-c-2", and the clipping
/// bounds "CE-LB++c" / "CE-LB+c".
std::vector<BoundReport> equivocation_lower_bounds(const ProbArray& p, double eps,
                                                   const EquivocationOptions& options = {});

/// Kullback-Leibler bounds "KLD-LB+" (full ball) and, when d is given,
/// "KLD-LB+d" (support-restricted ball, requires eps <= 1 - 1/d).
/// Throws support_violation when supp p is not contained in supp q.
std::vector<BoundReport> kl_lower_bounds(const ProbArray& p, const ProbArray& q, double eps,
                                         std::optional<int> d = std::nullopt);

struct MiOptions {
  bool support_bound = true;
  std::optional<int> energy_axis;            ///< 1 or 2
  std::optional<EnergyConstraint> energy;
};

/// Mutual-information bounds "I-LB-c-1" (support), "I-LB-c-2" (energy),
/// "I-LB++" and "I-LB+" (clipping).
std::vector<BoundReport> mi_lower_bounds(const ProbArray& p, double eps,
                                         const MiOptions& options = {});

}  // namespace lolb
