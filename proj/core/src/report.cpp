#include "lolb/report.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace lolb {

namespace {

// Every correction a bound subtracts from its leading term lives under one
// of these keys. Anything else in `terms` is context only.
constexpr std::array<const char*, 16> kDeductionKeys = {
    "g_eps",     "g2_eps",   "h2_eps",     "h2t_eps",       "h2_tail",
    "eta_tail",  "rank_term", "supp_term",  "F_term",        "d_term",
    "S_rho_term", "H_p_term", "S_clip",     "H_cond_clip",   "qce_clip",
    "mi_clip"};

}  // namespace

std::string to_string(InfimumTarget target) {
  switch (target) {
    case InfimumTarget::full: return "L";
    case InfimumTarget::rank_restricted: return "L^d";
    case InfimumTarget::commuting: return "L^com";
    case InfimumTarget::energy_constrained: return "L^energy";
    case InfimumTarget::qc_block: return "L^qc";
  }
  throw std::logic_error("to_string: unknown InfimumTarget");
}

InfimumTarget target_from_string(const std::string& s) {
  if (s == "L") return InfimumTarget::full;
  if (s == "L^d") return InfimumTarget::rank_restricted;
  if (s == "L^com") return InfimumTarget::commuting;
  if (s == "L^energy") return InfimumTarget::energy_constrained;
  if (s == "L^qc") return InfimumTarget::qc_block;
  throw std::invalid_argument("target_from_string: unknown target '" + s + "'");
}

bool is_deduction_term(const std::string& key) {
  return std::find(kDeductionKeys.begin(), kDeductionKeys.end(), key) != kDeductionKeys.end();
}

double recompute_raw(const BoundReport& report) {
  double raw = report.terms.count("lead") ? report.terms.at("lead") : 0.0;
  for (const auto& [key, value] : report.terms) {
    if (is_deduction_term(key)) raw -= value;
  }
  return raw;
}

BoundReport BoundReport::make(std::string id, double eps, double lead,
                              std::map<std::string, double> terms,
                              InfimumTarget target, std::string note) {
  BoundReport report;
  report.bound_id = std::move(id);
  report.epsilon = eps;
  report.target = target;
  report.note = std::move(note);
  report.terms = std::move(terms);
  report.terms["lead"] = lead;
  report.raw_value = recompute_raw(report);
  report.clamped = report.raw_value < 0.0;
  report.value = report.clamped ? 0.0 : report.raw_value;
  return report;
}

}  // namespace lolb
