#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "lolb/classical_bounds.hpp"
#include "lolb/density.hpp"
#include "lolb/quantum_bounds.hpp"
#include "lolb/scalars.hpp"
#include "testers.hpp"

using namespace lolb;
using namespace lolb::testing;

namespace {
constexpr double ln2 = std::numbers::ln2;
constexpr double inf = std::numeric_limits<double>::infinity();

double raw_of(const std::vector<BoundReport>& reports, const std::string& id) {
  for (const auto& r : reports) {
    if (r.bound_id == id) return r.raw_value;
  }
  FAIL("missing bound " << id);
  return 0.0;
}

const BoundReport& report_of(const std::vector<BoundReport>& reports, const std::string& id) {
  for (const auto& r : reports) {
    if (r.bound_id == id) return r;
  }
  REQUIRE(false);
  return reports.front();
}

}  // namespace

TEST_CASE("DensityOperator invariants") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, std::complex<double>(0.0, 0.5), std::complex<double>(0.0, 0.5), 0.0;
  CHECK_THROWS_AS(DensityOperator{bad}, std::invalid_argument);  // not Hermitian

  Eigen::MatrixXcd over(2, 2);
  over << 0.9, 0.0, 0.0, 0.9;
  CHECK_THROWS_AS(DensityOperator{over}, std::invalid_argument);  // trace > 1

  Eigen::MatrixXcd neg(2, 2);
  neg << 0.6, 0.55, 0.55, 0.4;
  CHECK_THROWS_AS(DensityOperator{neg}.spectrum(), std::domain_error);  // not PSD
}

TEST_CASE("spectral reconstruction") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = random_state(rng, 2 + trial % 5);
    const Spectrum& s = rho.spectrum();
    const Eigen::MatrixXcd rebuilt =
        s.vectors * s.values.asDiagonal() * s.vectors.adjoint();
    CHECK((rebuilt - rho.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s.vectors.adjoint() * s.vectors -
           Eigen::MatrixXcd::Identity(rho.dim(), rho.dim()))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
    for (int i = 1; i < rho.dim(); ++i) CHECK(s.values[i] <= s.values[i - 1] + 1e-15);
  }
}

TEST_CASE("trace distance") {
  const DensityOperator a = DensityOperator::diagonal({0.9, 0.05, 0.05});
  CHECK(trace_distance(a, a) == 0.0);
  CHECK(trace_distance(a, DensityOperator::diagonal({1.0, 0.0, 0.0})) ==
        doctest::Approx(0.1).epsilon(1e-13));
  Eigen::VectorXcd e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  CHECK(trace_distance(DensityOperator::pure(e0), DensityOperator::pure(e1)) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("extended von Neumann entropy") {
  CHECK(von_neumann_entropy_ext(DensityOperator::diagonal({0.25, 0.25, 0.25, 0.25})) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-13));
  CHECK(von_neumann_entropy_ext(DensityOperator::diagonal({0.25, 0.05, 0.0})) ==
        doctest::Approx(0.13516836265989141440).epsilon(1e-12));
  Eigen::VectorXcd v(3);
  v << 0.6, std::complex<double>(0.48, 0.64), 0.0;
  CHECK(von_neumann_entropy_ext(DensityOperator::pure(v)) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("operator clip") {
  const DensityOperator rho = DensityOperator::diagonal({0.5, 0.3, 0.2});
  const auto parts = operator_clip(rho, 0.25);
  CHECK(parts.high.eigenvalues()[0] == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(parts.high.eigenvalues()[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(parts.r_eps == doctest::Approx(0.3).epsilon(1e-13));

  // Unitary covariance and exact reconstruction.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 2 + trial % 5;
    const DensityOperator sigma = random_state(rng, dim);
    const double eps = 0.05 + 0.9 * (trial % 7) / 7.0;
    const auto split = operator_clip(sigma, eps);
    CHECK((split.low.matrix() + split.high.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() <
          1e-10);
    const Eigen::MatrixXcd U = random_unitary(rng, dim);
    const DensityOperator rotated(U * sigma.matrix() * U.adjoint());
    const auto split_rotated = operator_clip(rotated, eps);
    CHECK((split_rotated.high.matrix() - U * split.high.matrix() * U.adjoint())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }

  // eps at or above the top eigenvalue kills the cut part.
  CHECK(operator_clip(rho, 0.5).r_eps == 0.0);
}

TEST_CASE("entropy bounds: Hanson-Datta equality case") {
  const DensityOperator rho = DensityOperator::diagonal({0.9, 0.05, 0.05});
  const auto reports = entropy_lower_bounds(rho, 0.1);
  // Spectrum (1-eps, eps/d, eps/d) lands exactly on the rank bound.
  CHECK(std::abs(raw_of(reports, "B-lb-1")) <= 1e-9);
  // The universal cut bound is strictly coarser here.
  const auto& cut = report_of(reports, "B-lb-3+");
  CHECK(cut.value == 0.0);
  CHECK(cut.raw_value == doctest::Approx(-g_fun(0.1)).epsilon(1e-12));
}

TEST_CASE("entropy bounds: clip-difference form dominates the cut form") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = random_state(rng, 2 + trial % 5);
    const double eps = 0.02 + 0.96 * (trial % 11) / 11.0;
    const auto reports = entropy_lower_bounds(rho, eps);
    CHECK(raw_of(reports, "B-lb-3++") >= raw_of(reports, "B-lb-3+") - 1e-10);
  }
}

TEST_CASE("entropy bounds: B-lb-1 omitted outside its eps range") {
  const DensityOperator rho = DensityOperator::diagonal({0.6, 0.4});
  const auto reports = entropy_lower_bounds(rho, 0.7);  // 1 - 1/rank = 0.5 < 0.7
  for (const auto& r : reports) CHECK(r.bound_id != "B-lb-1");
  Eigen::VectorXcd v(2);
  v << 1.0, 0.0;
  const auto pure_reports = entropy_lower_bounds(DensityOperator::pure(v), 0.3);
  for (const auto& r : pure_reports) CHECK(r.bound_id != "B-lb-1");
}

TEST_CASE("entropy bounds with an energy constraint") {
  const DensityOperator rho = DensityOperator::diagonal({0.5, 0.3, 0.2});
  EntropyBoundOptions options;
  options.energy = EnergyConstraint{EnergySpectrum::from_levels({0, 1, 2}), 0.7817};
  const auto reports = entropy_lower_bounds(rho, 0.1, options);
  const auto& coarse = report_of(reports, "B-lb-2");
  const auto& sharp = report_of(reports, "B-lb-2+");
  // E_eps <= E makes the sharp variant at least as strong.
  CHECK(sharp.raw_value >= coarse.raw_value - 1e-12);
  CHECK(sharp.terms.at("E_eps") <= 0.7817 + 1e-12);
  options.energy->cap = 0.5;  // actual mean is 0.7
  CHECK_THROWS_AS(entropy_lower_bounds(rho, 0.1, options), std::domain_error);
}

TEST_CASE("conv-ineq estimate") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const DensityOperator rho = random_state(rng, 2 + trial % 6);
    const double eps = 0.01 + 0.5 * (trial % 9) / 9.0;
    if (!(eps < rho.trace())) continue;
    const auto sides = conv_ineq_check(rho, eps);
    if (sides.applicable) CHECK(sides.lhs >= sides.rhs - 1e-10);
  }
  // Single-index case reduces the right side to -h2(eps).
  const DensityOperator spike = DensityOperator::diagonal({0.9, 0.05, 0.05});
  const auto sides = conv_ineq_check(spike, 0.2);
  CHECK(sides.rhs == doctest::Approx(eta(0.9) - eta(0.9) - h2(0.2)).epsilon(1e-12));
  CHECK(sides.lhs >= sides.rhs);
  // eps |I_eps| <= 1 is forced by trace <= 1 (entries above eps on I_eps sum
  // past eps |I_eps|), so the applicability flag stays set for states.
  const DensityOperator flat = DensityOperator::diagonal({0.35, 0.35, 0.3});
  CHECK(conv_ineq_check(flat, 0.34).applicable);
}

TEST_CASE("energy lower bound H-LB+") {
  // Pure excited state: both sides equal E_k (1 - eps).
  const DensityOperator excited = DensityOperator::diagonal({0.0, 0.0, 0.0, 1.0, 0.0});
  const EnergySpectrum ladder = EnergySpectrum::from_levels({0, 1, 2, 3, 4});
  CHECK(energy_lower_bound(excited, ladder, 0.3).value ==
        doctest::Approx(2.1).epsilon(1e-14));

  // eps above every diagonal entry gives the trivial bound.
  const DensityOperator mixed = DensityOperator::diagonal({0.25, 0.25, 0.25, 0.25, 0.0});
  CHECK(energy_lower_bound(mixed, ladder, 0.3).value == 0.0);

  // Cross-module consistency with the classical affine bound.
  const DensityOperator diag = DensityOperator::diagonal({0.2, 0.3, 0.5});
  const EnergySpectrum levels = EnergySpectrum::from_levels({0, 1, 2});
  CHECK(energy_lower_bound(diag, levels, 0.25).value == doctest::Approx(0.55).epsilon(1e-13));
}

TEST_CASE("relative entropy") {
  const DensityOperator rho = DensityOperator::diagonal({0.5, 0.5});
  CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));
  // Commuting diagonals reduce to classical KL.
  const DensityOperator omega = DensityOperator::diagonal({0.75, 0.25});
  CHECK(relative_entropy(rho, omega) ==
        doctest::Approx(kl_divergence(ProbArray({0.5, 0.5}), ProbArray({0.75, 0.25})))
            .epsilon(1e-12));
  CHECK(relative_entropy(rho, DensityOperator::diagonal({1.0, 0.0})) == inf);
}

TEST_CASE("relative entropy bounds") {
  const DensityOperator rho = DensityOperator::diagonal({0.5, 0.5});
  const DensityOperator omega = DensityOperator::diagonal({0.75, 0.25});

  // Faithfulness of RE-LB+C for commuting pairs.
  double prev_gap = inf;
  const double D = relative_entropy(rho, omega);
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const auto reports = relative_entropy_lower_bounds(rho, omega, eps);
    const double gap = D - report_of(reports, "RE-LB+C").value;
    CHECK(gap >= -1e-12);
    CHECK(gap <= prev_gap + 1e-15);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);

  // On commuting diagonal pairs the quantum statement (eta(1 - r_eps) tail,
  // no normalization inside the log) and the classical KLD-LB+ (h2(1 - c_eps)
  // tail, c_eps inside the log) agree exactly: the two differences are both
  // eta(c_eps) and cancel.
  const auto reports = relative_entropy_lower_bounds(rho, omega, 0.1);
  const auto& d_report = report_of(reports, "RE-LB+D");
  const auto classical = kl_lower_bounds(ProbArray({0.5, 0.5}), ProbArray({0.75, 0.25}), 0.1);
  const double r = d_report.terms.at("r_eps");
  CHECK(r == doctest::Approx(classical[0].terms.at("c_eps")).epsilon(1e-13));
  CHECK(d_report.terms.at("lead") + eta(r) ==
        doctest::Approx(classical[0].terms.at("lead")).epsilon(1e-12));
  CHECK(d_report.raw_value == doctest::Approx(classical[0].raw_value).epsilon(1e-12));
  CHECK(d_report.raw_value == doctest::Approx(-1.0455122750330856625).epsilon(1e-13));

  // The proof-variant tail is exposed behind a flag but not asserted sharper.
  RelativeEntropyBoundOptions variant;
  variant.proof_variant_tail = true;
  const auto proof = relative_entropy_lower_bounds(rho, omega, 0.1, variant);
  CHECK(report_of(proof, "RE-LB+D").terms.count("h2_tail") == 1);

  // Support violation throws.
  CHECK_THROWS_AS(
      relative_entropy_lower_bounds(rho, DensityOperator::diagonal({1.0, 0.0}), 0.1),
      support_violation);

  // Rank-restricted variant at small eps approaches D(rho||omega) too.
  RelativeEntropyBoundOptions with_d;
  with_d.d = 2;
  const auto rd = relative_entropy_lower_bounds(rho, omega, 1e-6, with_d);
  CHECK(report_of(rd, "RE-LB+A").value == doctest::Approx(D).epsilon(1e-3));

  // Pure center against a full-rank reference: S(rho) = 0, so the rank
  // variant tends to Tr rho (-ln omega).
  Eigen::VectorXcd e0(2);
  e0 << 1.0, 0.0;
  const DensityOperator pure = DensityOperator::pure(e0);
  const auto pure_reports = relative_entropy_lower_bounds(pure, omega, 1e-6, with_d);
  CHECK(report_of(pure_reports, "RE-LB+A").value ==
        doctest::Approx(-std::log(0.75)).epsilon(1e-3));

  // Energy variant: spectrum must satisfy E_0 = 0.
  RelativeEntropyBoundOptions with_energy;
  with_energy.energy = EnergyConstraint{EnergySpectrum::from_levels({1, 2}), 1.5};
  CHECK_THROWS_AS(relative_entropy_lower_bounds(rho, omega, 0.1, with_energy),
                  std::domain_error);
  with_energy.energy = EnergyConstraint{EnergySpectrum::from_levels({0, 1}), 0.9};
  const auto re = relative_entropy_lower_bounds(rho, omega, 0.1, with_energy);
  CHECK(report_of(re, "RE-LB+B").target == InfimumTarget::energy_constrained);
}

TEST_CASE("qce") {
  Eigen::VectorXcd e0(2);
  e0 << 1.0, 0.0;
  const DensityOperator pure = DensityOperator::pure(e0);
  const DensityOperator mixed = DensityOperator::diagonal({0.5, 0.5});
  CHECK(qce(QCEnsemble({0.5, 0.5}, {pure, pure})) == 0.0);
  CHECK(qce(QCEnsemble({0.5, 0.5}, {pure, mixed})) == doctest::Approx(0.5 * ln2).epsilon(1e-13));
  CHECK(qce(QCEnsemble({1.0}, {mixed})) == doctest::Approx(ln2).epsilon(1e-13));
}

TEST_CASE("qce lower bounds") {
  const DensityOperator mixed = DensityOperator::diagonal({0.5, 0.5});
  // Single maximally mixed state: frozen fixture 2 eta(0.4) - eta(0.8) - g(0.1).
  const auto reports = qce_lower_bounds(QCEnsemble({1.0}, {mixed}), 0.1);
  CHECK(report_of(reports, "CE-LB-3+").raw_value ==
        doctest::Approx(0.21941803736379433308).epsilon(1e-12));

  // Identical pure states clamp everything to 0.
  Eigen::VectorXcd e0(2);
  e0 << 1.0, 0.0;
  const DensityOperator pure = DensityOperator::pure(e0);
  for (const auto& r : qce_lower_bounds(QCEnsemble({0.6, 0.4}, {pure, pure}), 0.2)) {
    CHECK(r.value == 0.0);
  }

  // Blockwise ordering of the two clipping bounds on random ensembles.
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 3;
    const std::size_t blocks = 2 + trial % 3;
    std::vector<double> weights = random_distribution(rng, blocks);
    std::vector<DensityOperator> states;
    for (std::size_t k = 0; k < blocks; ++k) states.push_back(random_state(rng, dim));
    const QCEnsemble ensemble(weights, std::move(states));
    const double eps = 0.02 + 0.9 * (trial % 8) / 8.0;
    const auto rs = qce_lower_bounds(ensemble, eps);
    CHECK(raw_of(rs, "CE-LB-3++") >= raw_of(rs, "CE-LB-3+") - 1e-10);
  }
}

TEST_CASE("mirsky inequality on random pairs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 2 + trial % 5;
    const DensityOperator a = random_state(rng, dim);
    const DensityOperator b = random_state(rng, dim);
    const auto [lhs, rhs] = mirsky_gap(a, b);
    CHECK(lhs <= rhs + 1e-9);
  }
  const DensityOperator c = DensityOperator::diagonal({0.7, 0.3});
  const auto [l0, r0] = mirsky_gap(c, c);
  CHECK(l0 == 0.0);
  CHECK(r0 == doctest::Approx(0.0).epsilon(1e-12));
  // Aligned commuting pair: equality.
  const auto [l1, r1] = mirsky_gap(c, DensityOperator::diagonal({0.9, 0.1}));
  CHECK(l1 == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("entropy sandwich for subnormalized pairs") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 4;
    const double split = unif(rng);
    const DensityOperator a = random_subnormalized(rng, dim, 0.9 * split);
    const DensityOperator b = random_subnormalized(rng, dim, 0.9 * (1.0 - split));
    const DensityOperator sum(a.matrix() + b.matrix());
    const double Sa = von_neumann_entropy_ext(a);
    const double Sb = von_neumann_entropy_ext(b);
    const double Ssum = von_neumann_entropy_ext(sum);
    CHECK(Ssum >= Sa + Sb - 1e-10);
    CHECK(Ssum <= Sa + Sb + ext_binary_entropy(a.trace(), b.trace()) + 1e-10);
  }
}

TEST_CASE("classical reduction of quantum bounds on diagonal states") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 4;
    std::vector<double> probs = random_distribution(rng, n);
    std::sort(probs.begin(), probs.end(), std::greater<>());
    const ProbArray p(probs);
    const DensityOperator rho = DensityOperator::diagonal(probs);
    const double eps = 0.02 + 0.9 * (trial % 10) / 10.0;

    // Entropy: B-lb-3+ against B-lb-3+c.
    const auto qreports = entropy_lower_bounds(rho, eps);
    CHECK(raw_of(qreports, "B-lb-3+") ==
          doctest::Approx(entropy_lower_bound(p, eps).raw_value).epsilon(1e-10));

    // Energy: H-LB+ against H-LB+c.
    std::vector<double> levels(n);
    for (std::size_t i = 0; i < n; ++i) levels[i] = static_cast<double>(i) * 0.7;
    const EnergySpectrum spectrum = EnergySpectrum::from_levels(levels);
    CHECK(energy_lower_bound(rho, spectrum, eps).raw_value ==
          doctest::Approx(affine_functional_lower_bound(p, spectrum, eps).raw_value)
              .epsilon(1e-10));

    // Relative entropy against KL for a commuting reference.
    std::vector<double> qprobs = random_distribution(rng, n);
    for (auto& v : qprobs) v = 0.9 * v + 0.1 / n;  // keep full support
    double qs = 0.0;
    for (double v : qprobs) qs += v;
    for (auto& v : qprobs) v /= qs;
    std::sort(qprobs.begin(), qprobs.end(), std::greater<>());
    const DensityOperator omega = DensityOperator::diagonal(qprobs);
    RelativeEntropyBoundOptions options;
    options.d = static_cast<int>(n);
    const auto rq = relative_entropy_lower_bounds(rho, omega, eps, options);
    const auto rc = kl_lower_bounds(p, ProbArray(qprobs), eps, static_cast<int>(n));
    CHECK(raw_of(rq, "RE-LB+C") == doctest::Approx(rc[0].raw_value).epsilon(1e-10));
    if (eps <= 1.0 - 1.0 / n) {
      CHECK(raw_of(rq, "RE-LB+A") == doctest::Approx(rc[1].raw_value).epsilon(1e-10));
    }
  }
}
