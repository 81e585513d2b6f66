#include "lolb/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lolb/prob.hpp"
#include "lolb/scalars.hpp"

namespace lolb {

namespace {

constexpr double kResidualTolerance = 1e-13;

struct PartitionSums {
  double Z = 0.0;        // sum exp(-beta (E_k - E0)), tail included
  double EZ = 0.0;       // sum (E_k - E0) exp(-beta (E_k - E0))
  double E2Z = 0.0;      // sum (E_k - E0)^2 exp(-beta (E_k - E0))
  double mean = 0.0;     // EZ / Z + E0
};

PartitionSums partition_sums(const EnergySpectrum& spec, double beta) {
  const double E0 = spec.ground();
  PartitionSums s;
  for (double level : spec.levels()) {
    const double x = level - E0;
    const double t = std::exp(-beta * x);
    s.Z += t;
    s.EZ += x * t;
    s.E2Z += x * x * t;
  }
  if (spec.has_tail()) {
    // Oscillator levels are integers, so the geometric remainders are exact
    // closed forms; E0 = 0 keeps the shift trivial.
    const double n = static_cast<double>(spec.cap());
    s.Z += spec.tail_partition(beta);
    s.EZ += spec.tail_energy(beta);
    // sum_{k>=n} k^2 x^k, the x d/dx image of the first-moment tail.
    const double x = std::exp(-beta);
    const double q = 1.0 - x;
    const double xn = std::exp(-beta * n);
    s.E2Z += (n * xn * (n * q + x) + x * xn * (1.0 - n)) / (q * q) +
             2.0 * x * xn * (n * q + x) / (q * q * q);
  }
  s.mean = s.Z > 0.0 ? s.EZ / s.Z + E0 : E0;
  return s;
}

double mean_energy(const EnergySpectrum& spec, double beta) {
  return partition_sums(spec, beta).mean;
}

}  // namespace

EnergySpectrum::EnergySpectrum(std::vector<double> levels, Family family)
    : levels_(std::move(levels)), family_(family) {
  if (levels_.empty()) throw std::invalid_argument("EnergySpectrum: empty level list");
  double prev = -1.0;
  for (double e : levels_) {
    if (!std::isfinite(e) || e < 0.0) {
      throw std::invalid_argument("EnergySpectrum: levels must be finite and nonnegative");
    }
    if (e < prev) throw std::invalid_argument("EnergySpectrum: levels must be nondecreasing");
    prev = e;
  }
}

EnergySpectrum EnergySpectrum::from_levels(std::vector<double> levels) {
  return EnergySpectrum(std::move(levels), Family::explicit_list);
}

EnergySpectrum EnergySpectrum::oscillator(std::size_t cap) {
  if (cap < 2) throw std::invalid_argument("EnergySpectrum::oscillator: cap must be >= 2");
  std::vector<double> levels(cap);
  for (std::size_t k = 0; k < cap; ++k) levels[k] = static_cast<double>(k);
  return EnergySpectrum(std::move(levels), Family::oscillator);
}

double EnergySpectrum::level_at(std::size_t k) const {
  if (k < levels_.size()) return levels_[k];
  if (family_ == Family::oscillator) return static_cast<double>(k);
  throw std::out_of_range("EnergySpectrum::level_at: index beyond explicit list");
}

std::size_t EnergySpectrum::ground_multiplicity() const {
  const double e0 = levels_.front();
  std::size_t m = 0;
  for (double e : levels_) {
    if (e == e0) ++m;
    else break;
  }
  return m;
}

double EnergySpectrum::tail_partition(double beta) const {
  if (!has_tail()) return 0.0;
  if (!(beta > 0.0)) throw std::domain_error("tail_partition: beta must be positive");
  const double x = std::exp(-beta);
  const double n = static_cast<double>(cap());
  return std::exp(-beta * n) / (1.0 - x);
}

double EnergySpectrum::tail_energy(double beta) const {
  if (!has_tail()) return 0.0;
  if (!(beta > 0.0)) throw std::domain_error("tail_energy: beta must be positive");
  const double x = std::exp(-beta);
  const double n = static_cast<double>(cap());
  const double q = 1.0 - x;
  return std::exp(-beta * n) * (n * q + x) / (q * q);
}

GibbsSolution solve_beta(const EnergySpectrum& spectrum, double E) {
  const double E0 = spectrum.ground();
  const auto& levels = spectrum.levels();
  double mean_cap;
  if (spectrum.has_tail()) {
    mean_cap = std::numeric_limits<double>::infinity();
  } else {
    mean_cap = stable_sum(levels) / static_cast<double>(levels.size());
  }
  if (!(E > E0 && E < mean_cap)) {
    throw std::out_of_range("solve_beta: E must lie in the open interval (" +
                            std::to_string(E0) + ", " + std::to_string(mean_cap) + ")");
  }
  if (levels.front() == levels.back() && !spectrum.has_tail()) {
    throw std::out_of_range("solve_beta: degenerate spectrum attains only E = " +
                            std::to_string(E0));
  }

  // Scale from the two smallest distinct levels, then grow/shrink the
  // bracket geometrically until the mean curve crosses E on both sides.
  double gap = 0.0;
  for (double e : levels) {
    if (e > E0) { gap = e - E0; break; }
  }
  if (gap == 0.0 && spectrum.has_tail()) gap = 1.0;
  double beta_seed = 1.0 / std::max(gap, 1e-12);

  double beta_lo = beta_seed;
  for (int i = 0; i < 400 && mean_energy(spectrum, beta_lo) <= E; ++i) beta_lo *= 0.5;
  double beta_hi = beta_seed;
  for (int i = 0; i < 400 && mean_energy(spectrum, beta_hi) >= E; ++i) beta_hi *= 2.0;
  if (!(mean_energy(spectrum, beta_lo) > E && mean_energy(spectrum, beta_hi) < E)) {
    throw std::out_of_range("solve_beta: failed to bracket beta for E = " + std::to_string(E));
  }

  double beta = 0.5 * (beta_lo + beta_hi);
  for (int iter = 0; iter < 200; ++iter) {
    const PartitionSums s = partition_sums(spectrum, beta);
    const double f = s.mean - E;
    if (std::abs(f) <= kResidualTolerance * std::max(1.0, std::abs(E))) break;
    if (f > 0.0) beta_lo = beta; else beta_hi = beta;
    // Newton on the strictly decreasing mean curve; d mean / d beta = -Var.
    const double shifted_mean = s.EZ / s.Z;
    const double var = s.E2Z / s.Z - shifted_mean * shifted_mean;
    double next = var > 0.0 ? beta + f / var : beta;
    if (!(next > beta_lo && next < beta_hi)) next = 0.5 * (beta_lo + beta_hi);
    if (next == beta) break;
    beta = next;
  }

  const PartitionSums s = partition_sums(spectrum, beta);
  GibbsSolution sol;
  sol.beta = beta;
  sol.log_Z = std::log(s.Z) - beta * E0;
  sol.F_value = beta * E + sol.log_Z;
  sol.E_target = E;
  sol.residual = std::abs(s.mean - E);
  // Tail sums are exact closed forms; certify only their floating-point
  // evaluation.
  sol.tail_error = spectrum.has_tail()
                       ? 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(sol.F_value))
                       : 0.0;
  return sol;
}

MaxEntropyValue F_lambda_full(const EnergySpectrum& spectrum, double E) {
  const double E0 = spectrum.ground();
  if (E < E0) {
    throw std::out_of_range("F_lambda: E below the ground level " + std::to_string(E0));
  }
  if (E == E0) {
    return {std::log(static_cast<double>(spectrum.ground_multiplicity())), 0.0, false};
  }
  if (!spectrum.has_tail()) {
    const auto& levels = spectrum.levels();
    const double mean_cap = stable_sum(levels) / static_cast<double>(levels.size());
    if (E >= mean_cap) {
      // The mean constraint is inactive: the uniform distribution is feasible.
      return {std::log(static_cast<double>(levels.size())), 0.0, true};
    }
  }
  const GibbsSolution sol = solve_beta(spectrum, E);
  return {sol.F_value, sol.tail_error, false};
}

double F_lambda(const EnergySpectrum& spectrum, double E) {
  return F_lambda_full(spectrum, E).value;
}

GibbsStateResult gibbs_state(const EnergySpectrum& spectrum, double E, std::size_t dim_cap) {
  if (dim_cap == 0) throw std::invalid_argument("gibbs_state: dim_cap must be positive");
  const GibbsSolution sol = solve_beta(spectrum, E);
  const std::size_t n = std::min(dim_cap, spectrum.cap());
  std::vector<double> probs(n);
  for (std::size_t k = 0; k < n; ++k) {
    probs[k] = std::exp(-sol.beta * spectrum.levels()[k] - sol.log_Z);
  }
  double mass = stable_sum(probs);
  if (mass > 1.0) {  // guard fp overshoot on full-support caps
    for (double& p : probs) p /= mass;
    mass = 1.0;
  }
  const double tail_mass = 1.0 - mass;

  // F(E) - S(state) = sum_{k >= n} eta(lambda_k) + eta(mass) with
  // eta(lambda_k) = lambda_k (beta E_k + log Z); eta(mass) <= tail_mass.
  double tail_weight = 0.0, tail_energy_weight = 0.0;
  for (std::size_t k = n; k < spectrum.cap(); ++k) {
    const double lam = std::exp(-sol.beta * spectrum.levels()[k] - sol.log_Z);
    tail_weight += lam;
    tail_energy_weight += spectrum.levels()[k] * lam;
  }
  if (spectrum.has_tail()) {
    const double Z = std::exp(sol.log_Z);
    tail_weight += spectrum.tail_partition(sol.beta) / Z;
    tail_energy_weight += spectrum.tail_energy(sol.beta) / Z;
  }
  const double entropy_tail =
      sol.beta * tail_energy_weight + sol.log_Z * tail_weight + tail_mass;
  return GibbsStateResult{DensityOperator::diagonal(probs), tail_mass, entropy_tail, sol};
}

EnergyEpsValue energy_eps(const EnergySpectrum& spectrum,
                          const std::vector<double>& eigvals, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("energy_eps: eps must be positive");
  double prev = std::numeric_limits<double>::infinity();
  for (double v : eigvals) {
    if (!(v >= 0.0)) throw std::invalid_argument("energy_eps: eigenvalues must be nonnegative");
    if (v > prev + 1e-12) {
      throw std::invalid_argument("energy_eps: eigenvalues must be non-increasing");
    }
    prev = v;
  }
  std::vector<double> terms(eigvals.size());
  for (std::size_t k = 0; k < eigvals.size(); ++k) {
    terms[k] = spectrum.level_at(k) * std::min(eigvals[k], eps);
  }
  return EnergyEpsValue{stable_sum(terms), 0.0};
}

OscillatorForms oscillator_example_forms(double N, double eps) {
  if (!(N > 0.0)) throw std::domain_error("oscillator_example_forms: N must be positive");
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error("oscillator_example_forms: eps must lie in (0, 1]");
  }
  OscillatorForms forms;
  const double q = N / (N + 1.0);
  if (eps * (N + 1.0) < 1.0) {
    // Minimal n with (1 - q) q^n < eps; the log formula is polished by a
    // direct check to be safe against rounding at integer boundaries.
    int n = static_cast<int>(std::floor(std::log(eps * (N + 1.0)) / std::log(q))) + 1;
    n = std::max(n, 1);
    while ((1.0 - q) * std::pow(q, n) >= eps) ++n;
    while (n > 1 && (1.0 - q) * std::pow(q, n - 1) < eps) --n;
    forms.n_eps = n;
    const double A = std::log(eps * (N + 1.0)) / std::log(q) + 1.0;
    forms.R_N = A * A / 2.0 + (N + 1.0) * (N + 1.0) * (A + N);
    forms.bound_value = g_fun(N) - eps * g_fun(forms.R_N) - g_fun(eps);
  } else {
    forms.n_eps = 0;
    forms.R_N = N / eps;
    forms.bound_value = g_fun(N) - eps * g_fun(N / eps) - g_fun(eps);
  }
  return forms;
}

}  // namespace lolb
