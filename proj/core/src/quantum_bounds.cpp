#include "lolb/quantum_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "lolb/scalars.hpp"

namespace lolb {

namespace {

void require_eps(double eps, const char* who) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error(std::string(who) + ": eps must lie in (0, 1]");
  }
}

void require_state(const DensityOperator& rho, const char* who) {
  if (!rho.is_state()) {
    throw std::domain_error(std::string(who) + ": input must have trace 1");
  }
}

// S_ext of the diagonal part {values}: sum eta(v) - eta(sum v).
double entropy_ext_of(const std::vector<double>& values) {
  double s = 0.0, m = 0.0;
  for (double v : values) {
    s += eta(v);
    m += v;
  }
  return m > 0.0 ? s - eta(m) : 0.0;
}

double plain_entropy(const Eigen::VectorXd& values) {
  double s = 0.0;
  for (int i = 0; i < values.size(); ++i) s += eta(values[i]);
  return s;
}

double f_upper_term(const EnergySpectrum& spectrum, double E, double eps,
                    std::map<std::string, double>& terms) {
  const MaxEntropyValue F = F_lambda_full(spectrum, E / eps);
  terms["F_value"] = F.value;
  terms["tail_error"] = F.tail_error;
  return eps * (F.value + F.tail_error);
}

}  // namespace

std::vector<BoundReport> entropy_lower_bounds(const DensityOperator& rho, double eps,
                                              const EntropyBoundOptions& options) {
  require_eps(eps, "entropy_lower_bounds");
  require_state(rho, "entropy_lower_bounds");
  const Eigen::VectorXd& lam = rho.eigenvalues();
  const double g_eps = g_fun(eps);
  const double S = plain_entropy(lam);
  std::vector<BoundReport> reports;

  std::vector<double> cut, low;
  for (int i = 0; i < lam.size(); ++i) {
    const double v = lam[i];
    if (v > eps) {
      cut.push_back(v - eps);
      low.push_back(v - (v - eps));
    } else {
      low.push_back(v);
    }
  }
  double r_eps = 0.0;
  for (double c : cut) r_eps += c;

  reports.push_back(BoundReport::make("B-lb-3+", eps, entropy_ext_of(cut),
                                      {{"g_eps", g_eps}, {"r_eps", r_eps}}));
  reports.push_back(BoundReport::make(
      "B-lb-3++", eps, S, {{"S_clip", entropy_ext_of(low)}, {"g_eps", g_eps}}));

  if (options.finite_rank) {
    const int rank = rho.rank();
    if (rank >= 2 && eps <= 1.0 - 1.0 / static_cast<double>(rank)) {
      reports.push_back(BoundReport::make(
          "B-lb-1", eps, S,
          {{"rank_term", eps * std::log(static_cast<double>(rank - 1))},
           {"h2_eps", h2(eps)}}));
    }
  }

  if (options.energy) {
    const EnergySpectrum& spec = options.energy->spectrum;
    std::vector<double> eigvals(lam.data(), lam.data() + lam.size());
    std::vector<double> mean_terms(eigvals.size());
    for (std::size_t k = 0; k < eigvals.size(); ++k) {
      mean_terms[k] = spec.level_at(k) * eigvals[k];
    }
    const double mean = stable_sum(mean_terms);
    if (mean > options.energy->cap + 1e-12) {
      throw std::domain_error("entropy_lower_bounds: state mean energy exceeds cap");
    }
    {
      std::map<std::string, double> terms{{"g_eps", g_eps}};
      terms["F_term"] = f_upper_term(spec, options.energy->cap, eps, terms);
      reports.push_back(BoundReport::make("B-lb-2", eps, S, std::move(terms)));
    }
    {
      const EnergyEpsValue E_eps = energy_eps(spec, eigvals, eps);
      std::map<std::string, double> terms{{"g_eps", g_eps}, {"E_eps", E_eps.value}};
      terms["F_term"] =
          f_upper_term(spec, E_eps.value + E_eps.tail_error, eps, terms);
      reports.push_back(BoundReport::make("B-lb-2+", eps, S, std::move(terms)));
    }
  }
  return reports;
}

ConvIneqSides conv_ineq_check(const DensityOperator& rho, double eps) {
  if (!(eps > 0.0 && eps < rho.trace())) {
    throw std::domain_error("conv_ineq_check: eps must lie in (0, trace)");
  }
  const Eigen::VectorXd& lam = rho.eigenvalues();
  std::vector<double> cut;
  double head_sum = 0.0, head_eta = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] > eps) {
      cut.push_back(lam[i] - eps);
      head_sum += lam[i];
      head_eta += eta(lam[i]);
      ++count;
    }
  }
  ConvIneqSides sides;
  sides.lhs = entropy_ext_of(cut);
  const double ek = eps * static_cast<double>(count);
  if (ek > 1.0) {
    sides.applicable = false;
    return sides;
  }
  const double k = static_cast<double>(count);
  sides.rhs = head_eta - eta(head_sum) - ek * (count > 0 ? std::log(k) : 0.0) - h2(ek);
  return sides;
}

BoundReport energy_lower_bound(const DensityOperator& rho, const EnergySpectrum& spectrum,
                               double eps, const Eigen::MatrixXcd* eigenbasis) {
  require_eps(eps, "energy_lower_bound");
  require_state(rho, "energy_lower_bound");
  const int n = rho.dim();
  Eigen::VectorXd diag(n);
  if (eigenbasis) {
    if (eigenbasis->rows() != n || eigenbasis->cols() != n) {
      throw std::invalid_argument("energy_lower_bound: eigenbasis shape mismatch");
    }
    const double unitary_gap =
        (eigenbasis->adjoint() * (*eigenbasis) - Eigen::MatrixXcd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    if (unitary_gap > 1e-8) {
      throw std::invalid_argument("energy_lower_bound: eigenbasis columns not orthonormal");
    }
    diag = (eigenbasis->adjoint() * rho.matrix() * (*eigenbasis)).diagonal().real();
  } else {
    diag = rho.matrix().diagonal().real();
  }
  std::vector<double> terms;
  for (int k = 0; k < n; ++k) {
    if (diag[k] > eps) terms.push_back(spectrum.level_at(k) * (diag[k] - eps));
  }
  return BoundReport::make("H-LB+", eps, stable_sum(terms), {{"tail_error", 0.0}});
}

std::vector<BoundReport> relative_entropy_lower_bounds(
    const DensityOperator& rho, const DensityOperator& omega, double eps,
    const RelativeEntropyBoundOptions& options) {
  require_eps(eps, "relative_entropy_lower_bounds");
  require_state(rho, "relative_entropy_lower_bounds");
  require_state(omega, "relative_entropy_lower_bounds");
  if (rho.dim() != omega.dim()) {
    throw std::invalid_argument("relative_entropy_lower_bounds: dimension mismatch");
  }
  if (!support_contained(rho, omega)) {
    throw support_violation("relative entropy is +∞ on a neighborhood of the center");
  }
  const double g_eps = g_fun(eps);
  const double h2t = h2_truncated(eps);
  std::vector<BoundReport> reports;

  // "RE-LB+D": pinch omega into rho's eigenbasis.
  {
    const Spectrum& s = rho.spectrum();
    const Eigen::VectorXd omega_diag =
        (s.vectors.adjoint() * omega.matrix() * s.vectors).diagonal().real();
    std::vector<double> lead_terms, cut_mass;
    for (int k = 0; k < rho.dim(); ++k) {
      if (s.values[k] > eps) {
        const double w = s.values[k] - eps;
        lead_terms.push_back(w * (std::log(w) - std::log(std::max(omega_diag[k], 1e-300))));
        cut_mass.push_back(w);
      }
    }
    const double r_eps = stable_sum(cut_mass);
    std::map<std::string, double> terms{{"g_eps", g_eps}, {"h2t_eps", h2t}, {"r_eps", r_eps}};
    if (options.proof_variant_tail) {
      terms["h2_tail"] = h2(1.0 - std::min(1.0, r_eps));
    } else {
      terms["eta_tail"] = eta(1.0 - std::min(1.0, r_eps));
    }
    reports.push_back(BoundReport::make(
        "RE-LB+D", eps, stable_sum(lead_terms), std::move(terms), InfimumTarget::full,
        "faithful only if [rho,omega]=0 and omega is diagonal in rho's eigenbasis"));
  }

  // "RE-LB+C": commuting ball, with the cut state renormalized.
  {
    const OperatorClipPair parts = operator_clip(rho, eps);
    double lead = 0.0;
    if (parts.r_eps > 0.0) {
      const DensityOperator cut_state(parts.high.matrix() / parts.r_eps);
      lead = parts.r_eps * relative_entropy(cut_state, omega);
    }
    reports.push_back(BoundReport::make(
        "RE-LB+C", eps, lead,
        {{"g_eps", g_eps},
         {"h2t_eps", h2t},
         {"h2_tail", h2(1.0 - std::min(1.0, parts.r_eps))},
         {"r_eps", parts.r_eps}},
        InfimumTarget::commuting));
  }

  const Spectrum& w = omega.spectrum();
  const Eigen::VectorXd rho_in_omega_basis =
      (w.vectors.adjoint() * rho.matrix() * w.vectors).diagonal().real();
  auto cross_term = [&] {
    std::vector<double> terms;
    for (int k = 0; k < omega.dim(); ++k) {
      if (rho_in_omega_basis[k] > eps) {
        terms.push_back(-std::log(std::max(w.values[k], 1e-300)) *
                        (rho_in_omega_basis[k] - eps));
      }
    }
    return stable_sum(terms);
  };

  if (options.d) {
    if (*options.d < 2) {
      throw std::domain_error("relative_entropy_lower_bounds: d must be >= 2");
    }
    if (eps <= 1.0 - 1.0 / static_cast<double>(*options.d)) {
      reports.push_back(BoundReport::make(
          "RE-LB+A", eps, cross_term(),
          {{"S_rho_term", plain_entropy(rho.eigenvalues())},
           {"d_term", eps * std::log(static_cast<double>(*options.d - 1))},
           {"h2_eps", h2(eps)}},
          InfimumTarget::rank_restricted, "bounds the rank-restricted infimum L^d"));
    }
  }

  if (options.energy) {
    const EnergySpectrum& spec = options.energy->spectrum;
    if (spec.ground() != 0.0) {
      throw std::domain_error("relative_entropy_lower_bounds: energy spectrum must have E_0 = 0");
    }
    if (!(options.energy->cap > 0.0)) {
      throw std::domain_error("relative_entropy_lower_bounds: energy cap must be positive");
    }
    std::map<std::string, double> terms{{"S_rho_term", plain_entropy(rho.eigenvalues())},
                                        {"g_eps", g_eps}};
    terms["F_term"] = f_upper_term(spec, options.energy->cap, eps, terms);
    reports.push_back(BoundReport::make("RE-LB+B", eps, cross_term(), std::move(terms),
                                        InfimumTarget::energy_constrained,
                                        "bounds the infimum over the energy-constrained ball"));
  }
  return reports;
}

std::vector<BoundReport> qce_lower_bounds(const QCEnsemble& ensemble, double eps,
                                          const QceBoundOptions& options) {
  require_eps(eps, "qce_lower_bounds");
  if (!ensemble.is_normalized()) {
    throw std::domain_error("qce_lower_bounds: ensemble weights must sum to 1");
  }
  const double g_eps = g_fun(eps);
  const double QCE = qce(ensemble);
  std::vector<BoundReport> reports;

  // Per-block spectra of the scaled blocks w_k rho_k.
  double cut_lead = 0.0, clip_sum = 0.0, r_eps = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const double w_k = ensemble.weights()[k];
    if (w_k == 0.0) continue;
    const Eigen::VectorXd& lam = ensemble.states()[k].eigenvalues();
    std::vector<double> cut, low;
    for (int i = 0; i < lam.size(); ++i) {
      const double v = w_k * lam[i];
      if (v > eps) {
        cut.push_back(v - eps);
        low.push_back(v - (v - eps));
      } else {
        low.push_back(v);
      }
    }
    for (double c : cut) r_eps += c;
    cut_lead += entropy_ext_of(cut);
    clip_sum += entropy_ext_of(low);
  }

  reports.push_back(BoundReport::make("CE-LB-3+", eps, cut_lead,
                                      {{"g_eps", g_eps}, {"r_eps", r_eps}},
                                      InfimumTarget::qc_block));
  reports.push_back(BoundReport::make("CE-LB-3++", eps, QCE,
                                      {{"qce_clip", clip_sum}, {"g_eps", g_eps}},
                                      InfimumTarget::qc_block));

  const int dim = ensemble.dim();
  if (options.rank_bound) {
    Eigen::MatrixXcd rho_A = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < ensemble.size(); ++k) rho_A += ensemble.block(k);
    const int rank = DensityOperator(rho_A).rank();
    reports.push_back(BoundReport::make(
        "CE-LB-1", eps, QCE,
        {{"supp_term", eps * std::log(static_cast<double>(rank))}, {"g_eps", g_eps}},
        InfimumTarget::qc_block));
  }

  if (options.energy) {
    const EnergySpectrum& spec = options.energy->spectrum;
    Eigen::VectorXd levels(dim);
    for (int i = 0; i < dim; ++i) levels[i] = spec.level_at(i);
    double mean = 0.0, E_qc = 0.0;
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
      const double w_k = ensemble.weights()[k];
      if (w_k == 0.0) continue;
      const Spectrum& s = ensemble.states()[k].spectrum();
      // Tr H (w_k rho_k) and Tr H ((w_k rho_k) ^ eps I), the clip taken in
      // the block's eigenbasis; H = diag(levels) in the standard basis.
      for (int i = 0; i < dim; ++i) {
        double level_weight = 0.0;
        for (int r = 0; r < dim; ++r) level_weight += levels[r] * std::norm(s.vectors(r, i));
        const double v = w_k * s.values[i];
        mean += level_weight * v;
        E_qc += level_weight * std::min(v, eps);
      }
    }
    if (mean > options.energy->cap + 1e-12) {
      throw std::domain_error("qce_lower_bounds: ensemble mean energy exceeds cap");
    }
    std::map<std::string, double> terms{{"g_eps", g_eps}, {"E_eps", E_qc}};
    terms["F_term"] = f_upper_term(spec, E_qc, eps, terms);
    reports.push_back(BoundReport::make("CE-LB-2", eps, QCE, std::move(terms),
                                        InfimumTarget::qc_block));
  }
  return reports;
}

}  // namespace lolb
