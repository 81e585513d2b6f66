#pragma once

#include <map>
#include <string>

namespace lolb {

/// Which infimum a bound certifies: the full epsilon-ball, the rank- or
/// support-restricted ball, the commuting ball, the energy-constrained ball,
/// or the quantum-classical block ball.
enum class InfimumTarget { full, rank_restricted, commuting, energy_constrained, qc_block };

std::string to_string(InfimumTarget target);            // "L", "L^d", "L^com", "L^energy", "L^qc"
InfimumTarget target_from_string(const std::string& s);

/// One evaluated lower bound. `terms` holds named scalars: the leading
/// functional term under key "lead", the subtracted corrections under the
/// deduction keys (see is_deduction_term), and informational context such as
/// "r_eps", "c_eps", "F_value", "tail_error".
struct BoundReport {
  std::string bound_id;
  double epsilon = 0.0;
  double value = 0.0;      ///< max(0, raw_value)
  double raw_value = 0.0;  ///< lead minus all deduction terms, unclamped
  bool clamped = false;
  InfimumTarget target = InfimumTarget::full;
  std::map<std::string, double> terms;
  std::string note;

  /// Assembles a report from the lead term and named terms; raw_value is
  /// computed as lead minus the deduction terms present in `terms`.
  static BoundReport make(std::string id, double eps, double lead,
                          std::map<std::string, double> terms,
                          InfimumTarget target = InfimumTarget::full,
                          std::string note = {});
};

/// True for term keys that recompute_raw subtracts from terms["lead"].
bool is_deduction_term(const std::string& key);

/// lead - sum of deduction terms. Reports are constructed so that this
/// reproduces raw_value exactly up to floating-point reassociation.
double recompute_raw(const BoundReport& report);

}  // namespace lolb
