#pragma once

#include <cstddef>
#include <vector>

#include "lolb/errors.hpp"

namespace lolb {

/// Stable compensated sum (Neumaier); keeps mass checks meaningful for
/// arrays with up to ~1e6 entries.
double stable_sum(const std::vector<double>& values);

/// Nonnegative 1- or 2-variate array with total mass <= 1. Probability
/// distributions have mass + tail_mass = 1; subnormalized arrays arise from
/// clipping. Immutable after construction.
///
/// Truncations of infinite distributions carry a `tail_mass` (mass beyond
/// the explicit entries) and a `tail_entry_bound` (a bound on every entry in
/// the tail); epsilon-cut bounds are exact whenever tail_entry_bound <= eps.
class ProbArray {
 public:
  static constexpr double kMassTolerance = 1e-12;

  ProbArray() : ProbArray(std::vector<double>{}) {}  // empty array, mass 0
  explicit ProbArray(std::vector<double> entries);                               // 1-variate
  ProbArray(std::size_t rows, std::size_t cols, std::vector<double> entries);    // 2-variate, row-major

  static ProbArray truncated(std::vector<double> entries, double tail_mass,
                             double tail_entry_bound);

  int arity() const { return arity_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  double operator[](std::size_t i) const { return entries_[i]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

  double mass() const { return mass_; }
  double tail_mass() const { return tail_mass_; }
  double tail_entry_bound() const { return tail_entry_bound_; }

  /// mass + tail_mass = 1 within kMassTolerance.
  bool is_distribution() const;

  /// Number of nonzero explicit entries.
  std::size_t support_size() const;

  /// Marginal along axis 1 (rows, the X1 variable) or 2 (columns); the
  /// result has the same mass. 1-variate arrays only allow axis 1.
  ProbArray marginal(int axis) const;

 private:
  int arity_;
  std::size_t rows_, cols_;
  std::vector<double> entries_;
  double mass_;
  double tail_mass_ = 0.0;
  double tail_entry_bound_ = 0.0;

  void validate() const;
};

/// Total variation distance (half the l1 distance) between two probability
/// distributions of the same shape.
double tv_distance(const ProbArray& p, const ProbArray& q);

/// p split at level eps: low = p ^ eps (entrywise min), high = [p - eps]+.
/// low + high reproduces p exactly, entry by entry, at the bit level.
struct ClipPair {
  ProbArray low;
  ProbArray high;
  double r_eps;  ///< mass of high
};

ClipPair clip(const ProbArray& p, double eps);

/// Homogeneous extension of the Shannon entropy: sum eta(p_i) - eta(mass);
/// equals the plain Shannon entropy at mass 1 and 0 at the zero array.
double shannon_entropy_ext(const ProbArray& p);

/// Equivocation H(X1|X2) = sum_ij p_ij (-ln(p_ij / colmass_j)) for 2-variate
/// arrays. The expression is homogeneous of degree 1, so it computes the
/// homogeneous extension for subnormalized arrays directly.
double equivocation(const ProbArray& p);

/// Kullback-Leibler divergence sum p_i ln(p_i / q_i) for 1-variate arrays,
/// with the homogeneous extension (+eta(mass)) for subnormalized p.
/// Returns +inf iff supp p is not contained in supp q.
double kl_divergence(const ProbArray& p, const ProbArray& q);

/// Homogeneous extension of the mutual information I(X1:X2) for 2-variate
/// arrays: sum_ij a_ij (ln a_ij + ln mass - ln rowmass_i - ln colmass_j).
double mutual_information(const ProbArray& p);

}  // namespace lolb
