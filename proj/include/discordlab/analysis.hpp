#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discordlab/discord.hpp"
#include "discordlab/measure.hpp"
#include "discordlab/qmat.hpp"
#include "discordlab/states.hpp"
#include "discordlab/tomo.hpp"

namespace discordlab {

struct UncertainValue {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (1 sigma)
  int n_samples = 0;
  std::string quantity;
};

/// Two-pass mean and sample standard deviation. Throws TooFewSamples for
/// fewer than two values.
UncertainValue summarize(std::span<const double> values, std::string quantity);

/// |a - b| <= n_sigma * sqrt(sa^2 + sb^2)
bool compatible(const UncertainValue& a, const UncertainValue& b, double n_sigma = 3.0);

/// |a - b| / sqrt(sa^2 + sb^2); infinite when both spreads vanish and a != b.
double separation_sigma(const UncertainValue& a, const UncertainValue& b);

enum class FidelityConvention { Squared, Root };

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, or its square
/// root with FidelityConvention::Root. Clipped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                FidelityConvention convention = FidelityConvention::Squared);

double purity(const DensityMatrix& rho);

enum class QuantityKind { FidelityTo, Purity, DiscordTT, DiscordPT, DiscordXModel, PurityXModel, OptimalAngle };

/// A named pipeline evaluated on one count record.
struct Quantity {
  QuantityKind kind = QuantityKind::Purity;
  std::optional<DensityMatrix> target;  // FidelityTo
  Family family = Family::Werner;       // XModel quantities
  BellKind bell = BellKind::PhiPlus;

  static Quantity fidelity_to(const DensityMatrix& target);
  static Quantity purity();
  static Quantity discord_tt();
  static Quantity discord_pt();
  static Quantity discord_xmodel(Family family, BellKind kind);
  static Quantity purity_xmodel(Family family, BellKind kind);
  /// Polar angle of the optimal measurement, theta in [0, pi/2].
  static Quantity optimal_angle();

  std::string tag() const;
};

struct PipelineOptions {
  MlConfig ml;
  FidelityConvention fidelity = FidelityConvention::Squared;
  Combiner combiner = Combiner::RandomDraw;
};

/// Evaluates every quantity on one record, sharing a single ML
/// reconstruction. Partial-tomography discord takes its conditional states
/// from the sigma_z block of the record and its mutual information from the
/// shared reconstruction.
std::vector<double> evaluate_quantities(const CountRecord& counts, std::span<const Quantity> quantities,
                                        std::uint64_t rng_seed, const PipelineOptions& options = {});

/// Poisson-resamples `base_counts` n_samples times and summarizes each
/// quantity. Failures are rethrown with the failing sample index.
std::vector<UncertainValue> mc_uncertainty(const CountRecord& base_counts, std::span<const Quantity> quantities,
                                           int n_samples, std::uint64_t rng_seed,
                                           const PipelineOptions& options = {});
UncertainValue mc_uncertainty(const CountRecord& base_counts, const Quantity& quantity, int n_samples,
                              std::uint64_t rng_seed, const PipelineOptions& options = {});

struct FDPoint {
  double fidelity = 0.0;
  double discord = 0.0;
  std::string reference_tag;
};

/// Neighbour states of `reference`: each point ML-reconstructs a Poisson
/// resample of `base_counts` and records its fidelity to the reference and
/// its TT discord.
std::vector<FDPoint> fd_scatter(const DensityMatrix& reference, const CountRecord& base_counts, int n_points,
                                std::uint64_t rng_seed, const std::string& reference_tag = "",
                                const PipelineOptions& options = {});

/// One reference state evaluated by all three discord methods, plus the
/// fidelity and purity columns of the companion tables.
struct MethodComparison {
  std::string tag;
  Family family = Family::Werner;
  BellKind kind = BellKind::PhiPlus;
  double mu_th = 0.0;
  double discord_th = 0.0;
  UncertainValue fidelity;   // reconstruction vs theoretical state
  UncertainValue purity;     // reconstruction
  UncertainValue purity_x;   // single-parameter model
  UncertainValue tt, pt, x;  // discord
};

/// Simulates base counts for `ref` (Poisson at n_total, or rounded Born
/// counts when `exact`), then propagates uncertainty with n_mc resamples.
/// n_mc = 0 evaluates the base record once and reports zero spread.
MethodComparison compare_methods(const ReferenceState& ref, std::int64_t n_total, int n_mc, std::uint64_t rng_seed,
                                 bool exact = false, const PipelineOptions& options = {});

inline constexpr int kDefaultMcSamples = 100;
inline constexpr int kDefaultScatterPoints = 500;

}  // namespace discordlab
