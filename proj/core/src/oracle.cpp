#include "lolb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lolb/scalars.hpp"

namespace lolb {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

double tv_vec(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

std::vector<double> mix_vec(const std::vector<double>& a, const std::vector<double>& b,
                            double t) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
  return out;
}

// Moves `budget` of mass from the smallest entries onto the largest entry;
// the entropy-minimizing direction inside a TV ball.
std::vector<double> greedy_entropy_transport(const std::vector<double>& p, double budget) {
  std::vector<double> x = p;
  const std::size_t target =
      static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  for (std::size_t idx : order) {
    if (budget <= 0.0) break;
    if (idx == target) continue;
    const double take = std::min(x[idx], budget);
    x[idx] -= take;
    x[target] += take;
    budget -= take;
  }
  return x;
}

// Moves `budget` of mass from the costliest occupied levels onto the
// cheapest level; optimal for affine functionals on a TV ball.
std::vector<double> greedy_level_transport(const std::vector<double>& p, double budget,
                                           const std::vector<double>& levels) {
  std::vector<double> x = p;
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t cheapest =
      *std::min_element(order.begin(), order.end(),
                        [&](std::size_t a, std::size_t b) { return levels[a] < levels[b]; });
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return levels[a] > levels[b]; });
  for (std::size_t idx : order) {
    if (budget <= 0.0) break;
    if (idx == cheapest) continue;
    const double take = std::min(x[idx], budget);
    x[idx] -= take;
    x[cheapest] += take;
    budget -= take;
  }
  return x;
}

std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(n);
  double s = 0.0;
  for (auto& v : x) {
    v = expo(rng);
    s += v;
  }
  for (auto& v : x) v /= s;
  return x;
}

Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(normal(rng), normal(rng));
  return v / v.norm();
}

Eigen::MatrixXcd random_mixed_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::MatrixXcd W = G * G.adjoint();
  return W / W.trace().real();
}

const ProbArray& as_prob(const BallPoint& x) { return std::get<ProbArray>(x); }
const DensityOperator& as_density(const BallPoint& x) { return std::get<DensityOperator>(x); }
const QCEnsemble& as_ensemble(const BallPoint& x) { return std::get<QCEnsemble>(x); }

ProbArray reshape_like(const ProbArray& shape, std::vector<double> entries) {
  if (shape.arity() == 2) return ProbArray(shape.rows(), shape.cols(), std::move(entries));
  return ProbArray(std::move(entries));
}

double commutator_gap(const DensityOperator& a, const DensityOperator& b) {
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).cwiseAbs().maxCoeff();
}

double state_mean_energy(const DensityOperator& rho, const EnergySpectrum& spectrum) {
  double e = 0.0;
  const auto diag = rho.matrix().diagonal().real();
  for (int i = 0; i < rho.dim(); ++i) e += spectrum.level_at(i) * diag[i];
  return e;
}

// --- projected pairwise-transfer descent on a nonnegative vector ---------

struct ClassicalProblem {
  std::vector<double> center;
  double eps = 0.0;
  std::function<double(const std::vector<double>&)> objective;
  std::function<bool(const std::vector<double>&)> extra_feasible;  // optional
};

bool classical_feasible(const ClassicalProblem& prob, const std::vector<double>& x) {
  if (tv_vec(prob.center, x) > prob.eps + kFeasTol) return false;
  return !prob.extra_feasible || prob.extra_feasible(x);
}

struct DescentOutcome {
  std::vector<double> x;
  double value = kInf;
  int evals = 0;
  bool still_improving = false;
};

DescentOutcome transfer_descent(const ClassicalProblem& prob, std::vector<double> start,
                                int iterations, std::mt19937_64& rng) {
  DescentOutcome out;
  out.x = std::move(start);
  out.value = prob.objective(out.x);
  out.evals = 1;
  const std::size_t n = out.x.size();
  if (n < 2 || iterations <= 0) return out;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  int last_accept = 0;
  for (int it = 0; it < iterations; ++it) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j || out.x[i] <= 0.0) continue;
    for (double delta = out.x[i]; delta > 1e-14; delta *= 0.5) {
      std::vector<double> y = out.x;
      y[i] -= delta;
      y[j] += delta;
      if (classical_feasible(prob, y)) {
        const double fy = prob.objective(y);
        ++out.evals;
        if (fy < out.value - 1e-15) {
          out.x = std::move(y);
          out.value = fy;
          last_accept = it;
          break;
        }
      }
      if (delta < out.x[i] / 256.0) break;
    }
  }
  out.still_improving = (iterations - last_accept) < std::max(1, iterations / 10);
  return out;
}

// Mix levels nest across doubled eps values, which keeps the oracle minimum
// monotone along doubling eps grids.
std::vector<double> nested_fractions(double eps) {
  std::vector<double> fr;
  for (int k = 0; k < 7; ++k) fr.push_back(eps / static_cast<double>(1 << k));
  return fr;
}

void push_mix_candidates(std::vector<std::vector<double>>& pool,
                         const std::vector<double>& center, const std::vector<double>& target,
                         double eps) {
  const double dist = tv_vec(center, target);
  if (dist <= 0.0) return;
  for (double e : nested_fractions(eps)) {
    pool.push_back(mix_vec(center, target, std::min(1.0, e / dist)));
  }
}

std::vector<std::vector<double>> classical_pool(const ProbArray& p, double eps,
                                                int random_count, std::mt19937_64& rng) {
  const std::vector<double>& c = p.entries();
  std::vector<std::vector<double>> pool;
  pool.push_back(c);
  for (double e : nested_fractions(eps)) pool.push_back(greedy_entropy_transport(c, e));

  // Clipped-and-renormalized center.
  {
    const ClipPair parts = clip(p, std::min(eps, 1.0));
    if (parts.r_eps > 0.0) {
      std::vector<double> high = parts.high.entries();
      for (auto& v : high) v /= parts.r_eps;
      pool.push_back(std::move(high));
    }
  }
  // Point masses and the uniform distribution.
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<double> e_i(c.size(), 0.0);
    e_i[i] = 1.0;
    push_mix_candidates(pool, c, e_i, eps);
  }
  push_mix_candidates(pool, c, std::vector<double>(c.size(), 1.0 / c.size()), eps);
  // Random directions.
  for (int s = 0; s < random_count; ++s) {
    push_mix_candidates(pool, c, dirichlet(rng, c.size()), eps);
  }
  return pool;
}

OracleMethod method_of(double best, double greedy_best, double descent_best) {
  if (best >= greedy_best - 1e-13) return OracleMethod::greedy_transport;
  if (best >= descent_best - 1e-13) return OracleMethod::projected_descent;
  return OracleMethod::random_restart;
}

}  // namespace

// --- ball geometry ----------------------------------------------------------

double ball_distance(const BallSpec& spec, const BallPoint& x) {
  if (std::holds_alternative<ProbArray>(spec.center)) {
    return tv_distance(std::get<ProbArray>(spec.center), as_prob(x));
  }
  if (std::holds_alternative<DensityOperator>(spec.center)) {
    return trace_distance(std::get<DensityOperator>(spec.center), as_density(x));
  }
  return ensemble_block_distance(std::get<QCEnsemble>(spec.center), as_ensemble(x));
}

bool is_feasible(const BallSpec& spec, const BallPoint& x, double tol) {
  if (spec.center.index() != x.index()) return false;
  if (ball_distance(spec, x) > spec.eps + tol) return false;
  if (std::holds_alternative<CommutingConstraint>(spec.constraint)) {
    if (!std::holds_alternative<DensityOperator>(x)) return true;
    return commutator_gap(std::get<DensityOperator>(spec.center), as_density(x)) < 1e-9;
  }
  if (const auto* rank = std::get_if<RankConstraint>(&spec.constraint)) {
    if (std::holds_alternative<ProbArray>(x)) {
      std::size_t nz = 0;
      for (double v : as_prob(x).entries()) {
        if (v > 1e-9) ++nz;
      }
      return nz <= static_cast<std::size_t>(rank->d);
    }
    return as_density(x).rank(1e-9) <= rank->d;
  }
  if (const auto* energy = std::get_if<EnergyBallConstraint>(&spec.constraint)) {
    if (std::holds_alternative<ProbArray>(x)) {
      const ProbArray& q = as_prob(x);
      double mean = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) mean += energy->spectrum.level_at(i) * q[i];
      return mean <= energy->cap + tol;
    }
    return state_mean_energy(as_density(x), energy->spectrum) <= energy->cap + tol;
  }
  return true;
}

// --- sampling ---------------------------------------------------------------

namespace {

std::vector<BallPoint> sample_classical(const BallSpec& spec, int count, std::mt19937_64& rng) {
  const ProbArray& p = std::get<ProbArray>(spec.center);
  std::vector<BallPoint> out;
  auto pool = classical_pool(p, spec.eps, std::max(4, count), rng);
  for (auto& v : pool) {
    if (static_cast<int>(out.size()) >= count) break;
    BallPoint cand = reshape_like(p, std::move(v));
    if (is_feasible(spec, cand)) out.push_back(std::move(cand));
  }
  return out;
}

std::vector<BallPoint> sample_commuting(const BallSpec& spec, int count, std::mt19937_64& rng) {
  const DensityOperator& rho = std::get<DensityOperator>(spec.center);
  const Spectrum& s = rho.spectrum();
  std::vector<double> lam(s.values.data(), s.values.data() + s.values.size());
  ProbArray plam(lam);
  std::vector<BallPoint> out;
  auto pool = classical_pool(plam, spec.eps, std::max(4, count), rng);
  for (auto& v : pool) {
    if (static_cast<int>(out.size()) >= count) break;
    BallPoint point = DensityOperator::from_spectrum(v, s.vectors);
    if (is_feasible(spec, point)) out.push_back(std::move(point));
  }
  return out;
}

std::vector<BallPoint> sample_quantum(const BallSpec& spec, int count, std::mt19937_64& rng) {
  const DensityOperator& rho = std::get<DensityOperator>(spec.center);
  const int dim = rho.dim();
  std::vector<BallPoint> out;

  auto try_mixes = [&](const Eigen::MatrixXcd& target) {
    const double dist = 0.5 * trace_norm(rho.matrix() - target);
    if (dist <= 0.0) return;
    for (double e : nested_fractions(spec.eps)) {
      if (static_cast<int>(out.size()) >= count) return;
      const double t = std::min(1.0, e / dist);
      BallPoint cand = DensityOperator((1.0 - t) * rho.matrix() + t * target);
      if (is_feasible(spec, cand)) out.push_back(std::move(cand));
    }
  };

  // Structured targets first: eigenprojectors, the maximally mixed state,
  // and the commuting spectral transports.
  const Spectrum& s = rho.spectrum();
  for (int k = 0; k < dim && static_cast<int>(out.size()) < count; ++k) {
    const Eigen::VectorXcd phi = s.vectors.col(k);
    try_mixes(phi * phi.adjoint());
  }
  try_mixes(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
  for (const BallPoint& cand : sample_commuting(spec, count / 2 + 1, rng)) {
    if (static_cast<int>(out.size()) >= count) break;
    if (is_feasible(spec, cand)) out.push_back(cand);
  }
  // Random targets.
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < 20 * count) {
    ++attempts;
    if (attempts % 2 == 0) {
      const Eigen::VectorXcd v = random_unit_vector(rng, dim);
      try_mixes(v * v.adjoint());
    } else {
      try_mixes(random_mixed_state(rng, dim));
    }
  }
  return out;
}

std::vector<BallPoint> sample_rank_restricted(const BallSpec& spec, int count,
                                              std::mt19937_64& rng) {
  const DensityOperator& rho = std::get<DensityOperator>(spec.center);
  const auto* rank = std::get_if<RankConstraint>(&spec.constraint);
  const int d = rank ? rank->d : rho.dim();
  const Spectrum& s = rho.spectrum();
  const int dim = rho.dim();
  std::vector<BallPoint> out;

  // Top-d truncation, renormalized.
  std::vector<double> head(s.values.data(), s.values.data() + dim);
  for (int i = d; i < dim; ++i) head[i] = 0.0;
  const double head_mass = std::accumulate(head.begin(), head.end(), 0.0);
  if (head_mass <= 0.0) return out;
  for (auto& v : head) v /= head_mass;
  DensityOperator base = DensityOperator::from_spectrum(head, s.vectors);
  BallPoint base_point = base;
  if (!is_feasible(spec, base_point)) return out;
  out.push_back(base_point);

  // Mixtures with states supported inside the top-d eigenspace keep the rank.
  const Eigen::MatrixXcd head_basis = s.vectors.leftCols(std::min(d, dim));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < 20 * count) {
    ++attempts;
    const Eigen::VectorXcd sub = random_unit_vector(rng, static_cast<int>(head_basis.cols()));
    const Eigen::VectorXcd v = head_basis * sub;
    const Eigen::MatrixXcd target = v * v.adjoint();
    const double dist = 0.5 * trace_norm(base.matrix() - target);
    if (dist <= 0.0) continue;
    const double t = std::min(1.0, unif(rng) * spec.eps / dist);
    BallPoint cand = DensityOperator((1.0 - t) * base.matrix() + t * target);
    if (is_feasible(spec, cand)) out.push_back(std::move(cand));
  }
  return out;
}

struct EnsembleFlattening {
  std::vector<Eigen::MatrixXcd> bases;
  std::vector<double> flat;
  int dim = 0;
  std::size_t blocks = 0;
};

EnsembleFlattening flatten_ensemble(const QCEnsemble& center) {
  EnsembleFlattening f;
  f.dim = center.dim();
  f.blocks = center.size();
  f.bases.resize(f.blocks);
  for (std::size_t k = 0; k < f.blocks; ++k) {
    const Spectrum& s = center.states()[k].spectrum();
    f.bases[k] = s.vectors;
    for (int i = 0; i < f.dim; ++i) f.flat.push_back(center.weights()[k] * s.values[i]);
  }
  return f;
}

QCEnsemble lift_ensemble(const EnsembleFlattening& f, const std::vector<double>& v) {
  std::vector<double> weights(f.blocks);
  std::vector<DensityOperator> states;
  states.reserve(f.blocks);
  for (std::size_t k = 0; k < f.blocks; ++k) {
    std::vector<double> vals(v.begin() + k * f.dim, v.begin() + (k + 1) * f.dim);
    const double w = stable_sum(vals);
    weights[k] = std::max(0.0, w);
    if (w > 1e-300) {
      for (auto& x : vals) x /= w;
      states.push_back(DensityOperator::from_spectrum(vals, f.bases[k]));
    } else {
      // Weight-zero block; the placeholder state never contributes.
      states.push_back(DensityOperator(Eigen::MatrixXcd::Identity(f.dim, f.dim) /
                                       static_cast<double>(f.dim)));
    }
  }
  return QCEnsemble(std::move(weights), std::move(states));
}

std::vector<BallPoint> sample_ensemble(const BallSpec& spec, int count, std::mt19937_64& rng) {
  const QCEnsemble& center = std::get<QCEnsemble>(spec.center);
  const EnsembleFlattening f = flatten_ensemble(center);
  ProbArray flat_center(f.flat);
  std::vector<BallPoint> out;
  auto pool = classical_pool(flat_center, spec.eps, std::max(4, count), rng);
  for (auto& v : pool) {
    if (static_cast<int>(out.size()) >= count) break;
    BallPoint cand = lift_ensemble(f, v);
    if (is_feasible(spec, cand)) out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace

std::vector<BallPoint> sample_ball(const BallSpec& spec, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_ball: count must be >= 1");
  if (!(spec.eps > 0.0 && spec.eps <= 1.0)) {
    throw std::domain_error("sample_ball: eps must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  if (std::holds_alternative<ProbArray>(spec.center)) {
    return sample_classical(spec, count, rng);
  }
  if (std::holds_alternative<QCEnsemble>(spec.center)) {
    return sample_ensemble(spec, count, rng);
  }
  if (std::holds_alternative<CommutingConstraint>(spec.constraint)) {
    return sample_commuting(spec, count, rng);
  }
  if (std::holds_alternative<RankConstraint>(spec.constraint)) {
    return sample_rank_restricted(spec, count, rng);
  }
  return sample_quantum(spec, count, rng);
}

// --- functional evaluation ----------------------------------------------------

double evaluate_functional(const FunctionalSpec& functional, const BallPoint& x) {
  switch (functional.kind) {
    case Functional::entropy:
      if (std::holds_alternative<ProbArray>(x)) return shannon_entropy_ext(as_prob(x));
      return von_neumann_entropy_ext(as_density(x));
    case Functional::equivocation:
      return equivocation(as_prob(x));
    case Functional::mutual_information:
      return mutual_information(as_prob(x));
    case Functional::kl:
      if (!functional.q) throw std::invalid_argument("evaluate_functional: missing KL reference");
      return kl_divergence(as_prob(x), *functional.q);
    case Functional::energy: {
      if (!functional.spectrum) {
        throw std::invalid_argument("evaluate_functional: missing energy spectrum");
      }
      if (std::holds_alternative<ProbArray>(x)) {
        const ProbArray& p = as_prob(x);
        double e = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) e += functional.spectrum->level_at(i) * p[i];
        return e;
      }
      const DensityOperator& rho = as_density(x);
      Eigen::VectorXd diag;
      if (functional.eigenbasis) {
        diag = (functional.eigenbasis->adjoint() * rho.matrix() * (*functional.eigenbasis))
                   .diagonal()
                   .real();
      } else {
        diag = rho.matrix().diagonal().real();
      }
      double e = 0.0;
      for (int i = 0; i < rho.dim(); ++i) e += functional.spectrum->level_at(i) * diag[i];
      return e;
    }
    case Functional::relative_entropy:
      if (!functional.omega) {
        throw std::invalid_argument("evaluate_functional: missing relative-entropy reference");
      }
      return relative_entropy(as_density(x), *functional.omega);
    case Functional::qce:
      return qce(as_ensemble(x));
  }
  throw std::logic_error("evaluate_functional: unknown functional");
}

// --- minimization ---------------------------------------------------------------

namespace {

struct Best {
  double value = kInf;
  BallPoint point;
  bool offer(double v, BallPoint p) {
    if (v < value) {
      value = v;
      point = std::move(p);
      return true;
    }
    return false;
  }
};

}  // namespace

OracleResult minimize_functional_ball(const BallSpec& spec, const FunctionalSpec& functional,
                                      const OracleBudget& budget, std::uint64_t seed) {
  if (!(spec.eps > 0.0 && spec.eps <= 1.0)) {
    throw std::domain_error("minimize_functional_ball: eps must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  OracleResult result;
  result.seed = seed;

  Best best;
  double greedy_best = kInf;
  double descent_best = kInf;
  int evals = 0;
  bool still_improving = false;

  auto offer_point = [&](BallPoint cand, bool from_greedy) {
    if (!is_feasible(spec, cand)) return;
    const double v = evaluate_functional(functional, cand);
    ++evals;
    if (from_greedy) greedy_best = std::min(greedy_best, v);
    best.offer(v, std::move(cand));
  };

  offer_point(spec.center, false);

  // Functional-aware greedy transports over nested mix levels.
  if (std::holds_alternative<ProbArray>(spec.center)) {
    const ProbArray& p = std::get<ProbArray>(spec.center);
    for (double e : nested_fractions(spec.eps)) {
      if (functional.kind == Functional::energy && functional.spectrum) {
        std::vector<double> levels(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) levels[i] = functional.spectrum->level_at(i);
        offer_point(reshape_like(p, greedy_level_transport(p.entries(), e, levels)), true);
      } else {
        offer_point(reshape_like(p, greedy_entropy_transport(p.entries(), e)), true);
      }
      if (functional.kind == Functional::kl && functional.q) {
        const double dist = tv_vec(p.entries(), functional.q->entries());
        if (dist > 0.0) {
          offer_point(reshape_like(p, mix_vec(p.entries(), functional.q->entries(),
                                              std::min(1.0, e / dist))),
                      true);
        }
      }
      if (functional.kind == Functional::mutual_information) {
        const ProbArray m1 = p.marginal(1), m2 = p.marginal(2);
        std::vector<double> product(p.size());
        for (std::size_t i = 0; i < p.rows(); ++i)
          for (std::size_t j = 0; j < p.cols(); ++j) product[i * p.cols() + j] = m1[i] * m2[j];
        const double dist = tv_vec(p.entries(), product);
        if (dist > 0.0) {
          offer_point(reshape_like(p, mix_vec(p.entries(), product, std::min(1.0, e / dist))),
                      true);
        }
      }
      if (functional.kind == Functional::equivocation) {
        // Concentrate every column onto its largest entry, within budget.
        std::vector<double> x = p.entries();
        double moved = 0.0;
        for (std::size_t j = 0; j < p.cols(); ++j) {
          std::size_t arg = 0;
          double colmax = -1.0;
          for (std::size_t i = 0; i < p.rows(); ++i) {
            if (x[i * p.cols() + j] > colmax) {
              colmax = x[i * p.cols() + j];
              arg = i;
            }
          }
          for (std::size_t i = 0; i < p.rows(); ++i) {
            if (i == arg) continue;
            double& cell = x[i * p.cols() + j];
            const double take = std::min(cell, e - moved);
            if (take <= 0.0) continue;
            cell -= take;
            x[arg * p.cols() + j] += take;
            moved += take;
          }
        }
        offer_point(reshape_like(p, std::move(x)), true);
      }
    }
  }
  if (std::holds_alternative<DensityOperator>(spec.center)) {
    const DensityOperator& rho = std::get<DensityOperator>(spec.center);
    const int dim = rho.dim();
    if (functional.kind == Functional::energy && functional.spectrum) {
      // Transport toward the ground level of H; exact optimum for centers
      // diagonal in the energy eigenbasis.
      const Eigen::MatrixXcd U = functional.eigenbasis
                                     ? *functional.eigenbasis
                                     : Eigen::MatrixXcd::Identity(dim, dim);
      const Eigen::VectorXcd tau0 = U.col(0);
      const Eigen::MatrixXcd target = tau0 * tau0.adjoint();
      const double dist = 0.5 * trace_norm(rho.matrix() - target);
      if (dist > 0.0) {
        for (double e : nested_fractions(spec.eps)) {
          const double t = std::min(1.0, e / dist);
          offer_point(DensityOperator((1.0 - t) * rho.matrix() + t * target), true);
        }
      }
    }
    if (functional.kind == Functional::entropy) {
      // The ball's entropy minimizer commutes with the center, so the greedy
      // spectral transport applies verbatim.
      const Spectrum& s = rho.spectrum();
      std::vector<double> lam(s.values.data(), s.values.data() + s.values.size());
      for (double e : nested_fractions(spec.eps)) {
        offer_point(DensityOperator::from_spectrum(greedy_entropy_transport(lam, e), s.vectors),
                    true);
      }
    }
    if (functional.kind == Functional::relative_entropy && functional.omega) {
      const Eigen::MatrixXcd& target = functional.omega->matrix();
      const double dist = 0.5 * trace_norm(rho.matrix() - target);
      if (dist > 0.0) {
        for (double e : nested_fractions(spec.eps)) {
          const double t = std::min(1.0, e / dist);
          offer_point(DensityOperator((1.0 - t) * rho.matrix() + t * target), true);
        }
      }
    }
  }

  // Sampled pool.
  for (BallPoint& cand : sample_ball(spec, budget.samples, rng())) {
    offer_point(std::move(cand), false);
  }

  // Projected descent over a classical reparametrization where one exists.
  const int starts = std::max(1, budget.restarts / 16);
  auto run_descents = [&](const ClassicalProblem& prob,
                          const std::vector<std::vector<double>>& start_pool,
                          const std::function<BallPoint(const std::vector<double>&)>& lift) {
    for (int s = 0; s < starts && s < static_cast<int>(start_pool.size()); ++s) {
      DescentOutcome outcome =
          transfer_descent(prob, start_pool[s], budget.descent_iterations, rng);
      evals += outcome.evals;
      still_improving = still_improving || outcome.still_improving;
      if (outcome.value < best.value) {
        BallPoint lifted = lift(outcome.x);
        if (is_feasible(spec, lifted)) {
          descent_best = std::min(descent_best, outcome.value);
          best.offer(outcome.value, std::move(lifted));
        }
      }
    }
  };

  if (std::holds_alternative<ProbArray>(spec.center)) {
    const ProbArray& p = std::get<ProbArray>(spec.center);
    ClassicalProblem prob;
    prob.center = p.entries();
    prob.eps = spec.eps;
    prob.objective = [&](const std::vector<double>& v) {
      return evaluate_functional(functional, reshape_like(p, v));
    };
    prob.extra_feasible = [&](const std::vector<double>& v) {
      return is_feasible(spec, reshape_like(p, v));
    };
    std::vector<std::vector<double>> start_pool;
    if (std::holds_alternative<ProbArray>(best.point) && best.value < kInf) {
      start_pool.push_back(std::get<ProbArray>(best.point).entries());
    }
    start_pool.push_back(p.entries());
    run_descents(prob, start_pool,
                 [&](const std::vector<double>& v) { return BallPoint(reshape_like(p, v)); });
  } else if (std::holds_alternative<DensityOperator>(spec.center) &&
             !std::holds_alternative<RankConstraint>(spec.constraint)) {
    // Descend over states diagonal in the center's eigenbasis; such states
    // populate both the commuting and the unconstrained ball.
    const DensityOperator& rho = std::get<DensityOperator>(spec.center);
    const Spectrum& s = rho.spectrum();
    std::vector<double> lam(s.values.data(), s.values.data() + s.values.size());
    auto lift = [&](const std::vector<double>& v) {
      return BallPoint(DensityOperator::from_spectrum(v, s.vectors));
    };
    ClassicalProblem prob;
    prob.center = lam;
    prob.eps = spec.eps;
    prob.objective = [&](const std::vector<double>& v) {
      return evaluate_functional(functional, lift(v));
    };
    prob.extra_feasible = [&](const std::vector<double>& v) {
      return is_feasible(spec, lift(v));
    };
    run_descents(prob, {lam}, lift);
  } else if (std::holds_alternative<QCEnsemble>(spec.center)) {
    const QCEnsemble& center = std::get<QCEnsemble>(spec.center);
    const EnsembleFlattening f = flatten_ensemble(center);
    auto lift = [&](const std::vector<double>& v) { return BallPoint(lift_ensemble(f, v)); };
    ClassicalProblem prob;
    prob.center = f.flat;
    prob.eps = spec.eps;
    // While blocks stay diagonal in their own bases the average-entropy
    // objective reads straight off the flattened block values.
    prob.objective = [&](const std::vector<double>& v) {
      if (functional.kind == Functional::qce) {
        double total = 0.0;
        for (std::size_t k = 0; k < f.blocks; ++k) {
          double s_block = 0.0, m_block = 0.0;
          for (int i = 0; i < f.dim; ++i) {
            const double x = v[k * f.dim + i];
            if (x < 0.0) return kInf;
            s_block += eta(x);
            m_block += x;
          }
          if (m_block > 0.0) total += s_block - eta(m_block);
        }
        return total;
      }
      return evaluate_functional(functional, lift(v));
    };
    prob.extra_feasible = nullptr;
    run_descents(prob, {f.flat}, lift);
  }

  // A restricted ball can be empty; inf over the empty set is +inf and the
  // default-constructed argmin marks that case.
  result.min_value = best.value;
  result.argmin = std::move(best.point);
  result.samples_used = evals;
  result.method = method_of(best.value, greedy_best, descent_best);
  result.converged = !still_improving;
  return result;
}

OracleResult minimize_entropy_ball(const ProbArray& p, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::domain_error("minimize_entropy_ball: eps must lie in [0, 1]");
  }
  if (p.size() > 64) {
    throw std::invalid_argument("minimize_entropy_ball: support larger than 64");
  }
  FunctionalSpec entropy;
  entropy.kind = Functional::entropy;
  if (eps == 0.0) {
    return OracleResult{shannon_entropy_ext(p), p, 1, OracleMethod::greedy_transport, seed, true};
  }
  BallSpec spec{p, eps, std::monostate{}};
  return minimize_functional_ball(spec, entropy, {}, seed);
}

Certification certify_bound(const BoundReport& bound, const BallSpec& spec,
                            const FunctionalSpec& functional,
                            const OracleBudget& budget, std::uint64_t seed) {
  OracleResult oracle = minimize_functional_ball(spec, functional, budget, seed);
  Certification cert;
  cert.slack = oracle.min_value - bound.value;
  cert.sound = bound.value <= oracle.min_value + 1e-9;
  cert.oracle = std::move(oracle);
  return cert;
}

}  // namespace lolb
