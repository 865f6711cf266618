#include "discordlab/discord.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "discordlab/error.hpp"
#include "discordlab/rng.hpp"
#include "discordlab/simplex.hpp"

namespace discordlab {

namespace {

constexpr int kGridTheta = 32;
constexpr int kGridPhi = 32;
constexpr int kRefineStarts = 3;
constexpr double kObjectiveTol = 1e-9;
constexpr double kNegativeDiscordTol = 1e-6;
constexpr double kConditionalSumTol = 1e-6;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double entropy_of(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) s -= xlog2x(std::max(0.0, eigenvalues(k)));
  return s;
}

/// p S(M/p) for an unnormalized 2x2 Hermitian PSD M with trace p, written
/// as -sum mu log mu + p log p to stay finite as p -> 0.
double weighted_entropy_2x2(const ComplexMatrix& m) {
  const double a = m(0, 0).real(), d = m(1, 1).real();
  const double p = a + d;
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
  const double hi = std::max(0.0, 0.5 * p + half_gap);
  const double lo = std::max(0.0, 0.5 * p - half_gap);
  return -xlog2x(hi) - xlog2x(lo) + xlog2x(std::max(0.0, p));
}

double conditional_entropy_raw(const ComplexMatrix& rho, double theta, double phi, Party measured) {
  const MeasurementAxis axis{theta, phi};
  double s = 0.0;
  for (int k = 0; k < 2; ++k) s += weighted_entropy_2x2(conditional_operator(rho, axis.outcome_ket(k), measured));
  return s;
}

/// Reports D = I - J, zeroing tiny negative values and keeping J consistent.
DiscordEstimate finish(double mutual_info, double classical_corr, Method method, bool allow_negative) {
  DiscordEstimate e;
  e.method = method;
  e.mutual_info = mutual_info;
  e.classical_corr = classical_corr;
  e.discord = mutual_info - classical_corr;
  if (e.discord < 0.0) {
    if (e.discord >= -kNegativeDiscordTol) {
      e.discord = 0.0;
      e.classical_corr = mutual_info;
      e.clamped = true;
    } else if (!allow_negative) {
      std::ostringstream os;
      os << "discord " << e.discord << " is below -1e-6; the measurement optimization failed";
      throw Error(ErrorCode::NegativeDiscord, os.str());
    }
  }
  return e;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::TT: return "TT";
    case Method::PT: return "PT";
    case Method::XModel: return "XModel";
  }
  return "?";
}

double entropy(const DensityMatrix& rho) { return entropy_of(rho.eigenvalues()); }

double mutual_information(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "mutual_information: expected a two-qubit state");
  return entropy(partial_trace(rho, Party::A)) + entropy(partial_trace(rho, Party::B)) - entropy(rho);
}

double conditional_entropy(const DensityMatrix& rho, const MeasurementAxis& axis, Party measured) {
  if (rho.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "conditional_entropy: expected a two-qubit state");
  return conditional_entropy_raw(rho.matrix(), axis.theta, axis.phi, measured);
}

ClassicalCorrelations classical_correlations(const DensityMatrix& rho, Party measured) {
  if (rho.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "classical_correlations: expected a two-qubit state");
  const ComplexMatrix& m = rho.matrix();
  auto objective = [&](double theta, double phi) { return conditional_entropy_raw(m, theta, phi, measured); };

  struct GridPoint {
    double value, theta, phi;
  };
  std::vector<GridPoint> grid;
  grid.reserve(kGridTheta * kGridPhi);
  for (int i = 0; i < kGridTheta; ++i) {
    const double theta = std::numbers::pi * i / (kGridTheta - 1);
    for (int j = 0; j < kGridPhi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / kGridPhi;
      grid.push_back({objective(theta, phi), theta, phi});
    }
  }
  std::vector<GridPoint> ranked = grid;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const GridPoint& a, const GridPoint& b) { return a.value < b.value; });
  const double spread = ranked.back().value - ranked.front().value;

  const bool degenerate = spread < kObjectiveTol;
  // Flat objective: keep the first grid point in scan order.
  GridPoint best = degenerate ? grid.front() : ranked.front();
  if (!degenerate) {
    SimplexOptions opts;
    opts.f_tol = kObjectiveTol;
    opts.x_tol = 1e-9;
    opts.max_evaluations = 2000;
    opts.initial_step = std::numbers::pi / kGridPhi;
    auto f = [&](std::span<const double> x) { return objective(x[0], x[1]); };
    for (int s = 0; s < kRefineStarts; ++s) {
      const auto& g = ranked[static_cast<std::size_t>(s)];
      const SimplexResult r = simplex_minimize(f, {g.theta, g.phi}, opts);
      if (r.f < best.value) best = {r.f, r.x[0], r.x[1]};
    }
  }

  const double s_other = entropy(partial_trace(rho, other(measured)));
  ClassicalCorrelations out;
  out.min_conditional_entropy = best.value;
  out.value = std::max(0.0, s_other - best.value);
  out.axis = MeasurementAxis::upper_hemisphere(best.theta, best.phi);
  out.degenerate = degenerate;
  return out;
}

DiscordEstimate discord_full(const DensityMatrix& rho, Party measured) {
  const double info = mutual_information(rho);
  const ClassicalCorrelations cc = classical_correlations(rho, measured);
  DiscordEstimate e = finish(info, cc.value, Method::TT, false);
  e.optimal_axis = cc.axis;
  e.degenerate = cc.degenerate;
  return e;
}

DiscordEstimate discord_partial(const DensityMatrix& rho_full, const MeasurementAxis& axis,
                                std::span<const Conditional> conditionals, Party measured) {
  double total = 0.0, cond_entropy = 0.0;
  for (const auto& c : conditionals) {
    if (c.state.dim() != 2)
      throw Error(ErrorCode::DimensionMismatch, "discord_partial: conditional states must be single-qubit");
    total += c.probability;
    cond_entropy += c.probability * entropy(c.state);
  }
  if (std::abs(total - 1.0) > kConditionalSumTol) {
    std::ostringstream os;
    os << "discord_partial: outcome probabilities sum to " << total;
    throw Error(ErrorCode::InconsistentConditionals, os.str());
  }
  const double info = mutual_information(rho_full);
  const double s_other = entropy(partial_trace(rho_full, other(measured)));
  DiscordEstimate e = finish(info, s_other - cond_entropy, Method::PT, true);
  e.optimal_axis = axis;
  return e;
}

double discord_analytic_werner(MixingParam mp) {
  const double p = mp.value();
  return 0.25 * (3.0 * xlog2x(1.0 - p) + xlog2x(1.0 + 3.0 * p)) -
         0.5 * (xlog2x(1.0 - p) + xlog2x(1.0 + p));
}

double discord_analytic_damped(MixingParam mp) {
  const double p = mp.value();
  return 0.5 * (xlog2x(1.0 - p) + xlog2x(1.0 + p));
}

double discord_analytic(Family family, MixingParam p) {
  return family == Family::Werner ? discord_analytic_werner(p) : discord_analytic_damped(p);
}

std::vector<EstimatorRelation> estimator_relations(Family family, BellKind kind) {
  const bool phi = kind == BellKind::PhiPlus;
  if (family == Family::Werner) {
    const int s = phi ? 1 : -1;
    return {{"HH", s}, {"HV", -s}, {"VH", -s}, {"VV", s}};
  }
  return {{"DD", 1}, {"LL", phi ? -1 : 1}};
}

MixingParam estimate_p(const CountRecord& counts, Family family, BellKind kind, std::uint64_t rng_seed,
                       Combiner combiner) {
  validate(counts);
  const auto relations = estimator_relations(family, kind);
  std::vector<double> estimates;
  for (const auto& rel : relations) {
    const auto n = counts.count_of(rel.label);
    if (!n) {
      throw Error(ErrorCode::MissingProjectors,
                  "estimate_p: count record lacks projector " + std::string(rel.label));
    }
    const double f = static_cast<double>(*n) / static_cast<double>(counts.n_total);
    estimates.push_back(rel.sign * (4.0 * f - 1.0));
  }
  double p;
  if (combiner == Combiner::RandomDraw) {
    Rng rng(rng_seed);
    p = estimates[rng.below(estimates.size())];
  } else {
    p = 0.0;
    for (double e : estimates) p += e;
    p /= static_cast<double>(estimates.size());
  }
  return MixingParam(std::clamp(p, 0.0, 1.0));
}

DiscordEstimate discord_xmodel(const CountRecord& counts, Family family, BellKind kind,
                               std::uint64_t rng_seed, Combiner combiner) {
  const MixingParam p = estimate_p(counts, family, kind, rng_seed, combiner);
  const double d = discord_analytic(family, p);
  const double info = mutual_information(family_state(family, p, kind));
  DiscordEstimate e;
  e.method = Method::XModel;
  e.discord = d;
  e.mutual_info = info;
  e.classical_corr = info - d;
  e.fitted_p = p.value();
  return e;
}

std::vector<AngleSample> optimal_angle_distribution(const CountRecord& counts, int n_samples,
                                                    std::uint64_t rng_seed, const MlConfig& ml) {
  if (n_samples < 1) throw Error(ErrorCode::OutOfRange, "optimal_angle_distribution: n_samples must be positive");
  validate(counts);
  std::vector<AngleSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const CountRecord sample = resample_counts(counts, derive_seed(rng_seed, streams::kResample, idx));
    MlConfig cfg = ml;
    cfg.seed = derive_seed(rng_seed, streams::kOptimizer, idx);
    const ReconstructionResult rec = ml_reconstruct(sample, cfg);
    const ClassicalCorrelations cc = classical_correlations(rec.rho, Party::A);
    out.push_back({cc.axis, cc.degenerate});
  }
  return out;
}

}  // namespace discordlab
