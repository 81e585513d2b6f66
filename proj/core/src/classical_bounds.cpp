#include "lolb/classical_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lolb/scalars.hpp"

namespace lolb {

namespace {

void require_distribution(const ProbArray& p, const char* who) {
  if (!p.is_distribution()) {
    throw std::domain_error(std::string(who) + ": input must have mass 1");
  }
}

void require_eps(double eps, const char* who) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error(std::string(who) + ": eps must lie in (0, 1]");
  }
}

void require_tail_clippable(const ProbArray& p, double eps, const char* who) {
  if (p.tail_entry_bound() > eps) {
    throw std::domain_error(std::string(who) +
                            ": truncation too coarse, tail entries may exceed eps");
  }
}

double marginal_mean(const ProbArray& marg, const EnergySpectrum& spectrum) {
  std::vector<double> terms(marg.size());
  for (std::size_t i = 0; i < marg.size(); ++i) {
    terms[i] = spectrum.level_at(i) * marg[i];
  }
  return stable_sum(terms);
}

// eps * (F(E/eps) + certified tail error); the tail error keeps the
// subtracted term an upper estimate, which is the sound direction.
double f_term(const EnergySpectrum& spectrum, double E, double eps,
              std::map<std::string, double>& terms) {
  const MaxEntropyValue F = F_lambda_full(spectrum, E / eps);
  terms["F_value"] = F.value;
  terms["tail_error"] = F.tail_error;
  return eps * (F.value + F.tail_error);
}

}  // namespace

BoundReport entropy_lower_bound(const ProbArray& p, double eps) {
  require_eps(eps, "entropy_lower_bound");
  require_distribution(p, "entropy_lower_bound");
  require_tail_clippable(p, eps, "entropy_lower_bound");
  if (p.arity() != 1) {
    throw std::invalid_argument("entropy_lower_bound: 1-variate distribution required");
  }
  std::vector<double> cut_terms;
  std::vector<double> cut_mass;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > eps) {
      cut_terms.push_back(eta(p[i] - eps));
      cut_mass.push_back(p[i] - eps);
    }
  }
  const double c_eps = stable_sum(cut_mass);
  const double lead = stable_sum(cut_terms) - eta(c_eps);
  return BoundReport::make("B-lb-3+c", eps, lead,
                           {{"g_eps", g_fun(eps)}, {"c_eps", c_eps}, {"tail_error", 0.0}});
}

BoundReport affine_functional_lower_bound(const ProbArray& p,
                                          const EnergySpectrum& spectrum, double eps) {
  require_eps(eps, "affine_functional_lower_bound");
  require_distribution(p, "affine_functional_lower_bound");
  require_tail_clippable(p, eps, "affine_functional_lower_bound");
  if (p.arity() != 1) {
    throw std::invalid_argument("affine_functional_lower_bound: 1-variate distribution required");
  }
  std::vector<double> terms;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > eps) terms.push_back(spectrum.level_at(i) * (p[i] - eps));
  }
  return BoundReport::make("H-LB+c", eps, stable_sum(terms), {{"tail_error", 0.0}});
}

std::vector<BoundReport> equivocation_lower_bounds(const ProbArray& p, double eps,
                                                   const EquivocationOptions& options) {
  require_eps(eps, "equivocation_lower_bounds");
  require_distribution(p, "equivocation_lower_bounds");
  if (p.arity() != 2) {
    throw std::invalid_argument("equivocation_lower_bounds: 2-variate distribution required");
  }
  const double g_eps = g_fun(eps);
  const double H_cond = equivocation(p);
  std::vector<BoundReport> reports;

  const std::size_t supp = options.support_size.value_or(p.marginal(1).support_size());
  reports.push_back(BoundReport::make(
      "CE-LB-c-1", eps, H_cond,
      {{"supp_term", eps * std::log(static_cast<double>(supp))}, {"g_eps", g_eps}}));

  if (options.energy) {
    const double mean = marginal_mean(p.marginal(1), options.energy->spectrum);
    if (mean > options.energy->cap + 1e-12) {
      throw std::domain_error("equivocation_lower_bounds: marginal mean energy exceeds cap");
    }
    std::map<std::string, double> terms{{"g_eps", g_eps}};
    terms["F_term"] = f_term(options.energy->spectrum, options.energy->cap, eps, terms);
    reports.push_back(BoundReport::make("CE-LB-c-2", eps, H_cond, std::move(terms)));
  }

  const ClipPair parts = clip(p, eps);
  reports.push_back(BoundReport::make("CE-LB++c", eps, equivocation(parts.high),
                                      {{"g_eps", g_eps}, {"r_eps", parts.r_eps}}));
  if (std::isfinite(H_cond)) {
    reports.push_back(BoundReport::make(
        "CE-LB+c", eps, H_cond,
        {{"H_cond_clip", equivocation(parts.low)}, {"g_eps", g_eps}}));
  }
  return reports;
}

std::vector<BoundReport> kl_lower_bounds(const ProbArray& p, const ProbArray& q, double eps,
                                         std::optional<int> d) {
  require_eps(eps, "kl_lower_bounds");
  require_distribution(p, "kl_lower_bounds");
  require_distribution(q, "kl_lower_bounds");
  require_tail_clippable(p, eps, "kl_lower_bounds");
  if (p.arity() != 1 || q.arity() != 1 || p.size() != q.size()) {
    throw std::invalid_argument("kl_lower_bounds: 1-variate arrays of equal length required");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) {
      throw support_violation("KL divergence is +∞ on a neighborhood of the center");
    }
  }

  std::vector<BoundReport> reports;
  std::vector<double> cut_mass;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > eps) cut_mass.push_back(p[i] - eps);
  }
  const double c_eps = stable_sum(cut_mass);
  std::vector<double> lead_terms;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > eps) {
      const double w = p[i] - eps;
      lead_terms.push_back(w * (std::log(w) - std::log(c_eps * q[i])));
    }
  }
  reports.push_back(BoundReport::make("KLD-LB+", eps, stable_sum(lead_terms),
                                      {{"g_eps", g_fun(eps)},
                                       {"h2t_eps", h2_truncated(eps)},
                                       {"h2_tail", h2(1.0 - std::min(1.0, c_eps))},
                                       {"c_eps", c_eps}}));

  if (d) {
    if (*d < 2) throw std::domain_error("kl_lower_bounds: d must be >= 2");
    if (eps <= 1.0 - 1.0 / static_cast<double>(*d)) {
      const double H_p = shannon_entropy_ext(p);
      if (std::isfinite(H_p)) {
        std::vector<double> cross;
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (p[i] > eps) cross.push_back(-std::log(q[i]) * (p[i] - eps));
        }
        reports.push_back(BoundReport::make(
            "KLD-LB+d", eps, stable_sum(cross),
            {{"H_p_term", H_p},
             {"d_term", eps * std::log(static_cast<double>(*d - 1))},
             {"h2_eps", h2(eps)}},
            InfimumTarget::rank_restricted, "bounds the support-restricted infimum L^d"));
      }
    }
  }
  return reports;
}

std::vector<BoundReport> mi_lower_bounds(const ProbArray& p, double eps,
                                         const MiOptions& options) {
  require_eps(eps, "mi_lower_bounds");
  require_distribution(p, "mi_lower_bounds");
  if (p.arity() != 2) {
    throw std::invalid_argument("mi_lower_bounds: 2-variate distribution required");
  }
  const double g2 = 2.0 * g_fun(eps);
  const double I = mutual_information(p);
  std::vector<BoundReport> reports;

  if (options.support_bound) {
    const std::size_t m = std::min(p.marginal(1).support_size(), p.marginal(2).support_size());
    reports.push_back(BoundReport::make(
        "I-LB-c-1", eps, I,
        {{"supp_term", eps * std::log(static_cast<double>(m))}, {"g2_eps", g2}}));
  }

  if (options.energy) {
    const int axis = options.energy_axis.value_or(1);
    if (axis != 1 && axis != 2) {
      throw std::invalid_argument("mi_lower_bounds: energy axis must be 1 or 2");
    }
    const double mean = marginal_mean(p.marginal(axis), options.energy->spectrum);
    if (mean > options.energy->cap + 1e-12) {
      throw std::domain_error("mi_lower_bounds: marginal mean energy exceeds cap");
    }
    std::map<std::string, double> terms{{"g2_eps", g2}};
    terms["F_term"] = f_term(options.energy->spectrum, options.energy->cap, eps, terms);
    reports.push_back(BoundReport::make("I-LB-c-2", eps, I, std::move(terms)));
  }

  const ClipPair parts = clip(p, eps);
  reports.push_back(BoundReport::make("I-LB++", eps, mutual_information(parts.high),
                                      {{"g2_eps", g2},
                                       {"h2t_eps", h2_truncated(eps)},
                                       {"h2_tail", h2(1.0 - std::min(1.0, parts.r_eps))},
                                       {"r_eps", parts.r_eps}}));
  if (std::isfinite(I)) {
    reports.push_back(BoundReport::make("I-LB+", eps, I,
                                        {{"mi_clip", mutual_information(parts.low)},
                                         {"g2_eps", g2},
                                         {"h2t_eps", h2_truncated(eps)}}));
  }
  return reports;
}

}  // namespace lolb
