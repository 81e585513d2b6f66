#pragma once

#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lolb/errors.hpp"

namespace lolb {

/// Eigendecomposition of a positive-semidefinite operator, eigenvalues in
/// non-increasing order, eigenvectors as matching columns.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

/// Finite-dimensional Hermitian positive-semidefinite operator with trace
/// <= 1. States have trace 1; subnormalized operators arise from clipping.
/// Immutable; the spectrum is computed on first use and shared between
/// copies, with internal synchronization.
class DensityOperator {
 public:
  static constexpr double kHermTolerance = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-10;

  explicit DensityOperator(Eigen::MatrixXcd matrix);

  static DensityOperator diagonal(const std::vector<double>& values);
  static DensityOperator pure(const Eigen::VectorXcd& state);
  /// V diag(values) V^dagger for unitary V.
  static DensityOperator from_spectrum(const std::vector<double>& values,
                                       const Eigen::MatrixXcd& vectors);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  double trace() const { return trace_; }

  const Spectrum& spectrum() const;
  const Eigen::VectorXd& eigenvalues() const { return spectrum().values; }

  int rank(double tol = 1e-12) const;
  bool is_state(double tol = 1e-9) const;

 private:
  struct LazySpectrum;

  Eigen::MatrixXcd matrix_;
  double trace_ = 0.0;
  std::shared_ptr<LazySpectrum> lazy_;
};

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
double trace_norm(const Eigen::MatrixXcd& hermitian);

/// Half the trace-norm distance between two states; the quantum analogue of
/// total variation distance, and the ball metric of every bound here.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Homogeneous extension of the von Neumann entropy:
/// sum eta(lambda_i) - eta(trace); 0 at the zero operator.
double von_neumann_entropy_ext(const DensityOperator& rho);

/// rho split at level eps in its own eigenbasis:
/// low = rho ^ eps I, high = [rho - eps I]+. Both commute with rho.
struct OperatorClipPair {
  DensityOperator low;
  DensityOperator high;
  double r_eps;  ///< trace of high
};

OperatorClipPair operator_clip(const DensityOperator& rho, double eps);

/// supp rho within supp omega, tested as: mass of rho on omega's numerical
/// kernel (eigenvalues <= kernel_tol) below kernel_tol.
bool support_contained(const DensityOperator& rho, const DensityOperator& omega,
                       double kernel_tol = 1e-9);

/// Quantum relative entropy Tr rho (ln rho - ln omega), evaluated through
/// both spectral decompositions; +inf iff supp rho is not contained in
/// supp omega.
double relative_entropy(const DensityOperator& rho, const DensityOperator& omega);

/// Ensemble {p_k, rho_k} on a common space; represents the q-c state
/// sum_k p_k rho_k (x) |k><k|. Weights may be subnormalized.
class QCEnsemble {
 public:
  QCEnsemble(std::vector<double> weights, std::vector<DensityOperator> states);

  std::size_t size() const { return weights_.size(); }
  int dim() const { return states_.front().dim(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityOperator>& states() const { return states_; }
  double weight_mass() const { return weight_mass_; }
  bool is_normalized(double tol = 1e-12) const;

  /// w_k rho_k, the k-th block of the q-c state.
  Eigen::MatrixXcd block(std::size_t k) const;

 private:
  std::vector<double> weights_;
  std::vector<DensityOperator> states_;
  double weight_mass_ = 0.0;
};

/// Quantum conditional entropy of the q-c state: the ensemble's average
/// entropy sum_k p_k S(rho_k) (the same expression serves as the homogeneous
/// extension for subnormalized weights).
double qce(const QCEnsemble& ensemble);

/// Block trace-norm distance between two ensembles of equal length:
/// 1/2 sum_k || p_k rho_k - q_k sigma_k ||_1.
double ensemble_block_distance(const QCEnsemble& a, const QCEnsemble& b);

/// (sorted-eigenvalue l1 gap, trace-norm distance); the first never exceeds
/// the second.
std::pair<double, double> mirsky_gap(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace lolb
