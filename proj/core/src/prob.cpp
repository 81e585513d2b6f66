#include "lolb/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "lolb/scalars.hpp"

namespace lolb {

double stable_sum(const std::vector<double>& values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

ProbArray::ProbArray(std::vector<double> entries)
    : arity_(1), rows_(entries.size()), cols_(1), entries_(std::move(entries)) {
  mass_ = stable_sum(entries_);
  validate();
}

ProbArray::ProbArray(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : arity_(2), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0 || entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("ProbArray: entry count does not match shape");
  }
  mass_ = stable_sum(entries_);
  validate();
}

ProbArray ProbArray::truncated(std::vector<double> entries, double tail_mass,
                               double tail_entry_bound) {
  if (!(tail_mass >= 0.0) || !(tail_entry_bound >= 0.0)) {
    throw std::invalid_argument("ProbArray::truncated: tail fields must be nonnegative");
  }
  ProbArray p(std::move(entries));
  p.tail_mass_ = tail_mass;
  p.tail_entry_bound_ = tail_entry_bound;
  if (p.mass_ + tail_mass > 1.0 + kMassTolerance) {
    throw std::invalid_argument("ProbArray::truncated: mass + tail_mass exceeds 1");
  }
  return p;
}

void ProbArray::validate() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i] >= 0.0)) {
      throw std::invalid_argument("ProbArray: negative or NaN entry at index " +
                                  std::to_string(i));
    }
  }
  if (mass_ > 1.0 + kMassTolerance) {
    throw std::invalid_argument("ProbArray: total mass " + std::to_string(mass_) +
                                " exceeds 1");
  }
}

bool ProbArray::is_distribution() const {
  return std::abs(mass_ + tail_mass_ - 1.0) <= kMassTolerance;
}

std::size_t ProbArray::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](double v) { return v > 0.0; }));
}

ProbArray ProbArray::marginal(int axis) const {
  if (axis != 1 && axis != 2) {
    throw std::invalid_argument("ProbArray::marginal: axis must be 1 or 2");
  }
  if (arity_ == 1) {
    if (axis != 1) throw std::invalid_argument("ProbArray::marginal: 1-variate array has only axis 1");
    return *this;
  }
  std::vector<double> out(axis == 1 ? rows_ : cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out[axis == 1 ? i : j] += (*this)(i, j);
    }
  }
  ProbArray m(std::move(out));
  m.tail_mass_ = tail_mass_;
  m.tail_entry_bound_ = tail_entry_bound_;
  return m;
}

double tv_distance(const ProbArray& p, const ProbArray& q) {
  if (p.arity() != q.arity() || p.rows() != q.rows() || p.cols() != q.cols()) {
    throw std::invalid_argument("tv_distance: shape mismatch");
  }
  if (!p.is_distribution() || !q.is_distribution()) {
    throw std::domain_error("tv_distance: both arguments must have mass 1");
  }
  std::vector<double> diff(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) diff[i] = std::abs(p[i] - q[i]);
  return 0.5 * stable_sum(diff);
}

ClipPair clip(const ProbArray& p, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error("clip: eps must lie in (0, 1]");
  }
  if (p.tail_entry_bound() > eps) {
    throw std::domain_error("clip: truncation too coarse, tail entries may exceed eps");
  }
  std::vector<double> low(p.size()), high(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = p[i];
    if (v > eps) {
      // high first, then low = v - high: by Sterbenz one of the two
      // subtractions is exact, so low + high == v at the bit level.
      high[i] = v - eps;
      low[i] = v - high[i];
    } else {
      high[i] = 0.0;
      low[i] = v;
    }
  }
  const double r = stable_sum(high);
  if (p.arity() == 2) {
    ClipPair pair{ProbArray(p.rows(), p.cols(), std::move(low)),
                  ProbArray(p.rows(), p.cols(), std::move(high)), r};
    return pair;
  }
  ProbArray low_arr = p.tail_mass() > 0.0
                          ? ProbArray::truncated(std::move(low), p.tail_mass(), p.tail_entry_bound())
                          : ProbArray(std::move(low));
  return ClipPair{std::move(low_arr), ProbArray(std::move(high)), r};
}

double shannon_entropy_ext(const ProbArray& p) {
  if (p.mass() == 0.0) return 0.0;
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) terms[i] = eta(p[i]);
  return stable_sum(terms) - eta(p.mass());
}

double equivocation(const ProbArray& p) {
  if (p.arity() != 2) {
    throw std::invalid_argument("equivocation: 2-variate array required");
  }
  std::vector<double> col(p.cols(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) col[j] += p(i, j);
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      if (v > 0.0) terms.push_back(v * (std::log(col[j]) - std::log(v)));
    }
  }
  return stable_sum(terms);
}

double kl_divergence(const ProbArray& p, const ProbArray& q) {
  if (p.arity() != 1 || q.arity() != 1 || p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: 1-variate arrays of equal length required");
  }
  if (!q.is_distribution()) {
    throw std::domain_error("kl_divergence: q must have mass 1");
  }
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
      terms.push_back(p[i] * (std::log(p[i]) - std::log(q[i])));
    }
  }
  return stable_sum(terms) + eta(p.mass());
}

double mutual_information(const ProbArray& p) {
  if (p.arity() != 2) {
    throw std::invalid_argument("mutual_information: 2-variate array required");
  }
  if (p.mass() == 0.0) return 0.0;
  std::vector<double> row(p.rows(), 0.0), col(p.cols(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      row[i] += p(i, j);
      col[j] += p(i, j);
    }
  const double log_mass = std::log(p.mass());
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      if (v > 0.0) {
        terms.push_back(v * (std::log(v) + log_mass - std::log(row[i]) - std::log(col[j])));
      }
    }
  }
  return stable_sum(terms);
}

}  // namespace lolb
