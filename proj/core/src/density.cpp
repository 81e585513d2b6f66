#include "lolb/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "lolb/prob.hpp"
#include "lolb/scalars.hpp"

namespace lolb {

struct DensityOperator::LazySpectrum {
  std::once_flag flag;
  Spectrum value;
};

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix)
    : matrix_(std::move(matrix)), lazy_(std::make_shared<LazySpectrum>()) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw std::invalid_argument("DensityOperator: square nonempty matrix required");
  }
  const double herm_gap = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_gap > kHermTolerance) {
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian (gap " +
                                std::to_string(herm_gap) + ")");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
  trace_ = matrix_.trace().real();
  if (!(trace_ >= -1e-12 && trace_ <= 1.0 + 1e-10)) {
    throw std::invalid_argument("DensityOperator: trace " + std::to_string(trace_) +
                                " outside [0, 1]");
  }
}

DensityOperator DensityOperator::diagonal(const std::vector<double>& values) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::pure(const Eigen::VectorXcd& state) {
  const double n2 = state.squaredNorm();
  if (n2 <= 0.0) throw std::invalid_argument("DensityOperator::pure: zero vector");
  Eigen::VectorXcd v = state / std::sqrt(n2);
  return DensityOperator(v * v.adjoint());
}

DensityOperator DensityOperator::from_spectrum(const std::vector<double>& values,
                                               const Eigen::MatrixXcd& vectors) {
  if (vectors.rows() != vectors.cols() ||
      static_cast<std::size_t>(vectors.cols()) != values.size()) {
    throw std::invalid_argument("DensityOperator::from_spectrum: shape mismatch");
  }
  Eigen::VectorXd d(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d[i] = values[i];
  return DensityOperator(vectors * d.asDiagonal() * vectors.adjoint());
}

const Spectrum& DensityOperator::spectrum() const {
  std::call_once(lazy_->flag, [this] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("DensityOperator: eigendecomposition failed");
    }
    const int n = dim();
    Spectrum s;
    s.values.resize(n);
    s.vectors.resize(n, n);
    // Eigen returns increasing order; flip to non-increasing.
    for (int i = 0; i < n; ++i) {
      s.values[i] = solver.eigenvalues()[n - 1 - i];
      s.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    if (s.values.minCoeff() < kEigenvalueFloor) {
      throw std::domain_error("DensityOperator: not positive semidefinite (min eigenvalue " +
                              std::to_string(s.values.minCoeff()) + ")");
    }
    for (int i = 0; i < n; ++i) s.values[i] = std::max(0.0, s.values[i]);
    lazy_->value = std::move(s);
  });
  return lazy_->value;
}

int DensityOperator::rank(double tol) const {
  const auto& v = eigenvalues();
  int r = 0;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] > tol) ++r;
  return r;
}

bool DensityOperator::is_state(double tol) const { return std::abs(trace_ - 1.0) <= tol; }

double trace_norm(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  if (!rho.is_state() || !sigma.is_state()) {
    throw std::domain_error("trace_distance: both arguments must have trace 1");
  }
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

double von_neumann_entropy_ext(const DensityOperator& rho) {
  if (rho.trace() <= 0.0) return 0.0;
  const auto& v = rho.eigenvalues();
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += eta(v[i]);
  return s - eta(rho.trace());
}

OperatorClipPair operator_clip(const DensityOperator& rho, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error("operator_clip: eps must lie in (0, 1]");
  }
  const Spectrum& s = rho.spectrum();
  const int n = rho.dim();
  std::vector<double> low(n), high(n);
  for (int i = 0; i < n; ++i) {
    const double v = s.values[i];
    if (v > eps) {
      high[i] = v - eps;
      low[i] = v - high[i];
    } else {
      high[i] = 0.0;
      low[i] = v;
    }
  }
  double r = 0.0;
  for (double h : high) r += h;
  return OperatorClipPair{DensityOperator::from_spectrum(low, s.vectors),
                          DensityOperator::from_spectrum(high, s.vectors), r};
}

bool support_contained(const DensityOperator& rho, const DensityOperator& omega,
                       double kernel_tol) {
  if (rho.dim() != omega.dim()) {
    throw std::invalid_argument("support_contained: dimension mismatch");
  }
  const Spectrum& w = omega.spectrum();
  double kernel_mass = 0.0;
  for (int j = 0; j < omega.dim(); ++j) {
    if (w.values[j] <= kernel_tol) {
      const Eigen::VectorXcd psi = w.vectors.col(j);
      kernel_mass += (psi.adjoint() * rho.matrix() * psi).real()(0, 0);
    }
  }
  return kernel_mass < kernel_tol;
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& omega) {
  if (rho.dim() != omega.dim()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  if (!support_contained(rho, omega)) {
    return std::numeric_limits<double>::infinity();
  }
  const auto& lam = rho.eigenvalues();
  double tr_rho_ln_rho = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] > 0.0) tr_rho_ln_rho += lam[i] * std::log(lam[i]);
  }
  const Spectrum& w = omega.spectrum();
  double tr_rho_ln_omega = 0.0;
  for (int j = 0; j < omega.dim(); ++j) {
    if (w.values[j] > 1e-300) {
      const Eigen::VectorXcd psi = w.vectors.col(j);
      const double weight = (psi.adjoint() * rho.matrix() * psi).real()(0, 0);
      if (weight > 0.0) tr_rho_ln_omega += weight * std::log(w.values[j]);
    }
  }
  return tr_rho_ln_rho - tr_rho_ln_omega;
}

QCEnsemble::QCEnsemble(std::vector<double> weights, std::vector<DensityOperator> states)
    : weights_(std::move(weights)), states_(std::move(states)) {
  if (weights_.empty() || weights_.size() != states_.size()) {
    throw std::invalid_argument("QCEnsemble: weights and states must match and be nonempty");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("QCEnsemble: negative weight");
  }
  weight_mass_ = stable_sum(weights_);
  if (weight_mass_ > 1.0 + 1e-10) {
    throw std::invalid_argument("QCEnsemble: weights sum to more than 1");
  }
  const int d = states_.front().dim();
  for (const auto& s : states_) {
    if (s.dim() != d) throw std::invalid_argument("QCEnsemble: states live on different spaces");
    if (!s.is_state()) throw std::invalid_argument("QCEnsemble: every state must have trace 1");
  }
}

bool QCEnsemble::is_normalized(double tol) const { return std::abs(weight_mass_ - 1.0) <= tol; }

Eigen::MatrixXcd QCEnsemble::block(std::size_t k) const {
  return weights_[k] * states_[k].matrix();
}

double qce(const QCEnsemble& ensemble) {
  double s = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    if (ensemble.weights()[k] > 0.0) {
      s += ensemble.weights()[k] * von_neumann_entropy_ext(ensemble.states()[k]);
    }
  }
  return s;
}

double ensemble_block_distance(const QCEnsemble& a, const QCEnsemble& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) {
    throw std::invalid_argument("ensemble_block_distance: ensembles are incompatible");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d += trace_norm(a.block(k) - b.block(k));
  }
  return 0.5 * d;
}

std::pair<double, double> mirsky_gap(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("mirsky_gap: dimension mismatch");
  }
  const auto& a = rho.eigenvalues();
  const auto& b = sigma.eigenvalues();
  double lhs = 0.0;
  for (int i = 0; i < a.size(); ++i) lhs += std::abs(a[i] - b[i]);
  return {lhs, trace_norm(rho.matrix() - sigma.matrix())};
}

}  // namespace lolb
