#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "discordlab/analysis.hpp"
#include "discordlab/error.hpp"
#include "discordlab/simplex.hpp"
#include "discordlab/states.hpp"
#include "discordlab/tomo.hpp"
#include "support.hpp"

using namespace discordlab;

TEST_CASE("simplex minimizes a shifted quadratic and Rosenbrock") {
  auto quad = [](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2); };
  const SimplexResult q = simplex_minimize(quad, {0.0, 0.0}, {});
  CHECK(q.converged);
  CHECK(q.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(q.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
  auto rosen = [](std::span<const double> x) {
    return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
  };
  SimplexOptions o;
  o.f_tol = 1e-16;
  o.x_tol = 1e-10;
  const SimplexResult r = simplex_minimize(rosen, {-1.2, 1.0}, o);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Cholesky parameterization is always physical") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    CholeskyParams t;
    for (double& v : t.t) v = rng.normal();
    const DensityMatrix rho = rho_from_cholesky(t);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(rho.eigenvalues()(0) >= 0.0);
  }
  CholeskyParams zero;
  CHECK_THROWS_AS(rho_from_cholesky(zero), Error);
}

TEST_CASE("cholesky_from_rho round-trips") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = testing::random_state(rng);
    const DensityMatrix back = rho_from_cholesky(cholesky_from_rho(rho, 0.0));
    CHECK((back.matrix() - rho.matrix()).norm() < 1e-10);
  }
}

TEST_CASE("likelihood is minimal near the truth for exact counts") {
  const DensityMatrix rho = werner(MixingParam(0.5), BellKind::PhiPlus);
  const CountRecord counts = exact_counts(born_probabilities(rho, standard_projector_set()), 1000000);
  const double at_truth = neg_log_likelihood(cholesky_from_rho(rho, 0.0), counts);
  CHECK(at_truth < 1e-6);
  const DensityMatrix other = werner(MixingParam(0.45), BellKind::PhiPlus);
  CHECK(neg_log_likelihood(cholesky_from_rho(other, 0.0), counts) > 100 * (at_truth + 1e-9));
}

TEST_CASE("linear inversion of exact probabilities") {
  Rng rng(14);
  const DensityMatrix rho = testing::random_state(rng);
  const CountRecord counts = exact_counts(born_probabilities(rho, standard_projector_set()), 1000000000000LL);
  CHECK((linear_inversion(counts) - rho.matrix()).norm() < 1e-9);
}

TEST_CASE("ML reconstruction of noiseless counts") {
  for (const auto& ref : reference_states()) {
    if (ref.mu != 1.0 && ref.mu != 0.5) continue;
    const DensityMatrix truth = ref.state();
    const CountRecord counts = exact_counts(born_probabilities(truth, standard_projector_set()), 1000000);
    const ReconstructionResult r = ml_reconstruct(counts);
    CHECK(r.converged);
    CHECK(fidelity(r.rho, truth) >= 0.9999);
  }
}

TEST_CASE("ML optimum is stationary under restart") {
  const DensityMatrix truth = werner(MixingParam(0.7), BellKind::PsiPlus);
  const CountRecord counts = sample_counts(born_probabilities(truth, standard_projector_set()), 40000, 21);
  const ReconstructionResult r = ml_reconstruct(counts);
  const LikelihoodObjective f(counts);
  SimplexOptions o;
  o.initial_step = 1e-3;
  const SimplexResult again = simplex_minimize([&](std::span<const double> t) { return f(t); },
                                               std::vector<double>(r.params.t.begin(), r.params.t.end()), o);
  CHECK(r.final_loglike - again.f < 1e-10);
}

TEST_CASE("ML result does not depend on record ordering") {
  const DensityMatrix truth = phase_damped(MixingParam(0.6), BellKind::PhiPlus);
  const CountRecord counts = sample_counts(born_probabilities(truth, standard_projector_set()), 40000, 22);
  CountRecord shuffled = counts;
  std::reverse(shuffled.labels.begin(), shuffled.labels.end());
  std::reverse(shuffled.counts.begin(), shuffled.counts.end());
  const auto a = ml_reconstruct(counts), b = ml_reconstruct(shuffled);
  CHECK((a.rho.matrix() - b.rho.matrix()).norm() < 1e-14);
}

TEST_CASE("ML needs an informationally complete record") {
  CountRecord partial = make_count_record({"HH", "HV", "VH", "VV"}, {10, 0, 0, 10});
  try {
    ml_reconstruct(partial);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadCounts);
  }
}

TEST_CASE("single-qubit linear tomography") {
  const DensityMatrix h = linear_singlequbit_tomo({1.0, 0.0, 0.5, 0.5});
  CHECK(h(0, 0).real() == doctest::Approx(1.0));
  const DensityMatrix d = linear_singlequbit_tomo({0.5, 0.5, 1.0, 0.5});
  CHECK(d(0, 1).real() == doctest::Approx(0.5));
  const DensityMatrix clipped = linear_singlequbit_tomo({1.0, 0.0, 1.0, 1.0});
  CHECK(clipped.eigenvalues()(0) >= 0.0);
}

TEST_CASE("partial tomography from a full record") {
  const DensityMatrix truth = phase_damped(MixingParam(0.5), BellKind::PhiPlus);
  const CountRecord counts = exact_counts(born_probabilities(truth, standard_projector_set()), 1000000);
  const PartialCounts pc = partial_counts_from_record(counts);
  CHECK(pc.axis.theta == 0.0);
  const auto conds = conditionals_from_partial(pc);
  CHECK(conds[0].probability + conds[1].probability == doctest::Approx(1.0));
  const Conditional exact0 = conditional_state(truth, MeasurementAxis{0, 0}, 0, Party::A);
  CHECK((conds[0].state.matrix() - exact0.state.matrix()).norm() < 1e-5);

  const PartialCounts sim = simulate_partial_counts(truth, MeasurementAxis{0, 0}, 1000000, 3);
  const auto sc = conditionals_from_partial(sim);
  CHECK(sc[0].probability == doctest::Approx(0.5).epsilon(0.01));

  CountRecord missing = make_count_record({"HH", "HV", "VH", "VV"}, {10, 0, 0, 10});
  try {
    partial_counts_from_record(missing);
    FAIL("expected MissingProjectors");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingProjectors);
  }
}
