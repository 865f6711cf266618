#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discordlab/measure.hpp"
#include "discordlab/qmat.hpp"
#include "discordlab/states.hpp"
#include "discordlab/tomo.hpp"

namespace discordlab {

// All entropic quantities are in bits.

enum class Method { TT, PT, XModel };
std::string to_string(Method m);

struct DiscordEstimate {
  double discord = 0.0;
  double mutual_info = 0.0;
  double classical_corr = 0.0;
  Method method = Method::TT;
  std::optional<MeasurementAxis> optimal_axis;  // TT and PT
  std::optional<double> fitted_p;               // XModel
  /// The conditional-entropy objective was flat over the search grid.
  bool degenerate = false;
  /// A value in [-1e-6, 0) was reported as zero.
  bool clamped = false;
};

/// -sum lambda log2 lambda over clipped eigenvalues, 0 log 0 = 0.
double entropy(const DensityMatrix& rho);

/// I = S(rho_A) + S(rho_B) - S(rho)
double mutual_information(const DensityMatrix& rho);

/// sum_k p_k S(rho_{other|k}) for the projective measurement `axis` on
/// `measured`. Outcomes of vanishing probability contribute zero.
double conditional_entropy(const DensityMatrix& rho, const MeasurementAxis& axis, Party measured);

struct ClassicalCorrelations {
  double value = 0.0;
  /// Minimizing measurement, reported with theta in [0, pi/2].
  MeasurementAxis axis;
  double min_conditional_entropy = 0.0;
  bool degenerate = false;
};

/// J = S(rho_other) - min over axes of the conditional entropy. The minimum
/// is located on a 32 x 32 grid over theta in [0, pi], phi in [0, 2 pi),
/// then refined by simplex descent from the three best grid points. When the
/// objective varies by less than 1e-9 across the grid the first grid
/// minimizer in scan order (theta-major) is reported and `degenerate` is set.
ClassicalCorrelations classical_correlations(const DensityMatrix& rho, Party measured = Party::A);

/// Discord from the full state with a numerically optimized measurement.
DiscordEstimate discord_full(const DensityMatrix& rho, Party measured = Party::A);

/// Discord with the measurement fixed to `axis` and the conditional states
/// supplied (e.g. from partial tomography). Mutual information and the
/// unconditioned marginal come from `rho_full`. Throws
/// InconsistentConditionals if the outcome probabilities do not sum to one
/// within 1e-6.
DiscordEstimate discord_partial(const DensityMatrix& rho_full, const MeasurementAxis& axis,
                                std::span<const Conditional> conditionals,
                                Party measured = Party::A);

/// Closed forms for the two families, base-2 logs:
///   Werner:  [3(1-p)log(1-p) + (1+3p)log(1+3p)]/4 - [(1-p)log(1-p) + (1+p)log(1+p)]/2
///   damped:  [(1-p)log(1-p) + (1+p)log(1+p)]/2
double discord_analytic_werner(MixingParam p);
double discord_analytic_damped(MixingParam p);
double discord_analytic(Family family, MixingParam p);

enum class Combiner { RandomDraw, Mean };

/// One count relation (1 + sign * p)/4 = n_label / N_T.
struct EstimatorRelation {
  std::string_view label;
  int sign;
};

/// Werner: the four computational-basis projectors. For |Phi+> HH and VV
/// carry (1+p)/4 and HV, VH carry (1-p)/4; the roles swap for |Psi+>.
/// Phase-damped: DD and LL. For |Phi+> DD carries (1+p)/4 and LL (1-p)/4;
/// for |Psi+> both carry (1+p)/4.
std::vector<EstimatorRelation> estimator_relations(Family family, BellKind kind);

/// Mixing parameter from a single relation picked uniformly at random
/// (seeded), or from the mean over all relations; clipped to [0, 1].
/// Throws MissingProjectors if a relation's projector is absent.
MixingParam estimate_p(const CountRecord& counts, Family family, BellKind kind,
                       std::uint64_t rng_seed, Combiner combiner = Combiner::RandomDraw);

/// Discord of the single-parameter model at the estimated p.
DiscordEstimate discord_xmodel(const CountRecord& counts, Family family, BellKind kind,
                               std::uint64_t rng_seed, Combiner combiner = Combiner::RandomDraw);

struct AngleSample {
  MeasurementAxis axis;
  bool degenerate = false;
};

/// Optimal measurement axis of the ML reconstruction of each of n_samples
/// Poisson resamples of `counts`.
std::vector<AngleSample> optimal_angle_distribution(const CountRecord& counts, int n_samples,
                                                    std::uint64_t rng_seed,
                                                    const MlConfig& ml = {});

inline constexpr int kDefaultAngleSamples = 900;

}  // namespace discordlab
