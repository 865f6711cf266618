#include <doctest.h>

#include <cmath>

#include "discordlab/analysis.hpp"
#include "discordlab/error.hpp"
#include "discordlab/rng.hpp"
#include "support.hpp"

using namespace discordlab;

TEST_CASE("fidelity examples") {
  const DensityMatrix phi = bell(BellKind::PhiPlus);
  CHECK(fidelity(phi, phi) == doctest::Approx(1.0));
  CHECK(fidelity(phi, bell(BellKind::PsiPlus)) == doctest::Approx(0.0).epsilon(1e-12));
  // <Phi+| W(0.5) |Phi+> = (1 + 3p)/4
  CHECK(fidelity(phi, werner(MixingParam(0.5), BellKind::PhiPlus)) == doctest::Approx(0.625));
  CHECK(fidelity(phi, werner(MixingParam(0.5), BellKind::PhiPlus), FidelityConvention::Root) ==
        doctest::Approx(std::sqrt(0.625)));
  CHECK(fidelity(DensityMatrix(0.25 * identity(4)), DensityMatrix(0.25 * identity(4))) == doctest::Approx(1.0));
}

TEST_CASE("fidelity is symmetric and bounded") {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const DensityMatrix a = testing::random_state(rng), b = testing::random_state(rng);
    const double fab = fidelity(a, b), fba = fidelity(b, a);
    CHECK(std::abs(fab - fba) <= 1e-10);
    CHECK(fab >= 0.0);
    CHECK(fab <= 1.0);
  }
}

TEST_CASE("fidelity of pure states is the squared overlap") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix u = testing::random_pure(rng, 4), v = testing::random_pure(rng, 4);
    const double overlap = (u.matrix() * v.matrix()).trace().real();
    CHECK(fidelity(u, v) == doctest::Approx(overlap).epsilon(1e-8));
  }
}

TEST_CASE("purity") {
  CHECK(purity(bell(BellKind::PhiPlus)) == doctest::Approx(1.0));
  CHECK(purity(DensityMatrix(0.25 * identity(4))) == doctest::Approx(0.25));
  CHECK(purity(werner(purity_to_p(2.0 / 3, Family::Werner), BellKind::PsiPlus)) == doctest::Approx(2.0 / 3));
}

TEST_CASE("summarize") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const UncertainValue u = summarize(v, "x");
  CHECK(u.mean == doctest::Approx(2.5));
  CHECK(u.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(u.n_samples == 4);
  CHECK(u.quantity == "x");
  const std::vector<double> one = {1.0};
  try {
    summarize(one, "x");
    FAIL("expected TooFewSamples");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSamples);
  }
}

TEST_CASE("compatibility") {
  const UncertainValue a{1.0, 0.1, 10, "q"}, b{1.25, 0.1, 10, "q"}, c{1.5, 0.1, 10, "q"};
  CHECK(compatible(a, b));
  CHECK_FALSE(compatible(a, c));
  CHECK(separation_sigma(a, c) == doctest::Approx(0.5 / std::sqrt(0.02)));
}

TEST_CASE("Monte Carlo spread shrinks like 1/sqrt(N_T)") {
  const DensityMatrix rho = werner(MixingParam(0.5), BellKind::PhiPlus);
  const auto probs = born_probabilities(rho, standard_projector_set());
  const Quantity q = Quantity::purity();
  const UncertainValue small = mc_uncertainty(exact_counts(probs, 10000), q, 40, 5);
  const UncertainValue large = mc_uncertainty(exact_counts(probs, 160000), q, 40, 5);
  const double ratio = small.std / large.std;
  CHECK(ratio > 4.0 * 0.7);
  CHECK(ratio < 4.0 * 1.3);
}

TEST_CASE("X-model purity follows the fitted p") {
  const auto c = exact_counts(born_probabilities(phase_damped(MixingParam(0.5), BellKind::PsiPlus), standard_projector_set()),
                              40000);
  const std::vector<Quantity> q = {Quantity::purity_xmodel(Family::Damped, BellKind::PsiPlus),
                                   Quantity::discord_xmodel(Family::Damped, BellKind::PsiPlus)};
  const auto v = evaluate_quantities(c, q, 3);
  CHECK(v[0] == doctest::Approx(p_to_purity(MixingParam(0.5), Family::Damped)));
  CHECK(v[1] == doctest::Approx(discord_analytic_damped(MixingParam(0.5))));
}

TEST_CASE("fd_scatter is reproducible") {
  const DensityMatrix ref = werner(MixingParam(0.8), BellKind::PhiPlus);
  const auto base = exact_counts(born_probabilities(ref, standard_projector_set()), 40000);
  const auto a = fd_scatter(ref, base, 4, 11, "w");
  const auto b = fd_scatter(ref, base, 4, 11, "w");
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fidelity == b[i].fidelity);
    CHECK(a[i].discord == b[i].discord);
    CHECK(a[i].reference_tag == "w");
    CHECK(a[i].fidelity > 0.98);
  }
}

TEST_CASE("compare_methods on noiseless extremes") {
  const MethodComparison bell_row = compare_methods({Family::Werner, BellKind::PhiPlus, 1.0}, 40000, 0, 1, true);
  CHECK(bell_row.tt.mean == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(bell_row.pt.mean == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(bell_row.x.mean == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(bell_row.fidelity.mean == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(bell_row.tt.std == 0.0);
  CHECK(bell_row.tt.n_samples == 1);
  const MethodComparison mixed = compare_methods({Family::Werner, BellKind::PsiPlus, 0.25}, 40000, 0, 1, true);
  CHECK(std::abs(mixed.x.mean) < 1e-9);
  CHECK(std::abs(mixed.tt.mean) < 1e-3);
  CHECK(mixed.purity_x.mean == doctest::Approx(0.25));
}

TEST_CASE("pipeline failures carry the sample index") {
  // A record with only the sigma_z block cannot be reconstructed.
  const CountRecord c = make_count_record({"HH", "HV", "VH", "VV"}, {100, 0, 0, 100});
  try {
    mc_uncertainty(c, Quantity::purity(), 3, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Monte Carlo sample 0") != std::string::npos);
  }
}

TEST_CASE("quantity tags") {
  CHECK(Quantity::discord_tt().tag() == "discord-tt");
  CHECK(Quantity::purity().tag() == "purity");
  CHECK(Quantity::fidelity_to(bell(BellKind::PhiPlus)).tag() == "fidelity-to");
}
