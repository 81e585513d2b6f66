#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lolb/density.hpp"
#include "lolb/gibbs.hpp"
#include "lolb/prob.hpp"
#include "lolb/report.hpp"

namespace lolb {

struct CommutingConstraint {};
struct RankConstraint { int d = 2; };
struct EnergyBallConstraint {
  EnergySpectrum spectrum;  ///< H = diag(levels) in the standard basis
  double cap = 0.0;
};
struct EnsembleBlockConstraint {};

using BallConstraint = std::variant<std::monostate, CommutingConstraint, RankConstraint,
                                    EnergyBallConstraint, EnsembleBlockConstraint>;

using BallCenter = std::variant<ProbArray, DensityOperator, QCEnsemble>;
using BallPoint = std::variant<ProbArray, DensityOperator, QCEnsemble>;

/// An epsilon-ball around a center, optionally cut down by a constraint.
/// Distances: TV for arrays, half trace norm for operators, half block
/// trace norm for ensembles.
struct BallSpec {
  BallCenter center;
  double eps = 0.0;
  BallConstraint constraint;
};

double ball_distance(const BallSpec& spec, const BallPoint& x);
bool is_feasible(const BallSpec& spec, const BallPoint& x, double tol = 1e-9);

/// Deterministic feasible points: structured candidates (mass transports,
/// clipped-and-renormalized center, boundary mixes) followed by seeded
/// random draws, all filtered for feasibility.
std::vector<BallPoint> sample_ball(const BallSpec& spec, int count, std::uint64_t seed);

enum class OracleMethod { greedy_transport, projected_descent, random_restart };

struct OracleResult {
  double min_value = 0.0;
  BallPoint argmin;
  int samples_used = 0;
  OracleMethod method = OracleMethod::random_restart;
  std::uint64_t seed = 0;
  bool converged = true;
};

enum class Functional {
  entropy,
  equivocation,
  mutual_information,
  kl,
  energy,
  relative_entropy,
  qce,
};

/// A functional together with its fixed data (the divergence reference, the
/// energy spectrum and optional eigenbasis).
struct FunctionalSpec {
  Functional kind = Functional::entropy;
  std::optional<ProbArray> q;
  std::optional<DensityOperator> omega;
  std::optional<EnergySpectrum> spectrum;
  std::optional<Eigen::MatrixXcd> eigenbasis;
};

double evaluate_functional(const FunctionalSpec& functional, const BallPoint& x);

struct OracleBudget {
  int restarts = 64;
  int descent_iterations = 500;
  int samples = 256;
};

/// Entropy minimization over the TV ball: greedy transport (mass moves from
/// the smallest entries onto the largest) polished by projected coordinate
/// descent. The result never exceeds any sampled value.
OracleResult minimize_entropy_ball(const ProbArray& p, double eps, std::uint64_t seed = 1);

/// Upper estimate of the constrained infimum of the functional over the
/// ball: best of structured candidates, seeded random restarts, and
/// projected descent. Any feasible point upper-bounds the infimum, so the
/// estimate is valid even when the search has not converged.
OracleResult minimize_functional_ball(const BallSpec& spec, const FunctionalSpec& functional,
                                      const OracleBudget& budget = {}, std::uint64_t seed = 1);

struct Certification {
  bool sound = false;
  double slack = 0.0;  ///< oracle minimum minus bound value
  OracleResult oracle;
};

/// sound iff bound.value <= oracle minimum + 1e-9.
Certification certify_bound(const BoundReport& bound, const BallSpec& spec,
                            const FunctionalSpec& functional,
                            const OracleBudget& budget = {}, std::uint64_t seed = 1);

}  // namespace lolb
