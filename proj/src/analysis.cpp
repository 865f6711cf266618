#include "discordlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "discordlab/error.hpp"
#include "discordlab/rng.hpp"

namespace discordlab {

UncertainValue summarize(std::span<const double> values, std::string quantity) {
  if (values.size() < 2) throw Error(ErrorCode::TooFewSamples, "summarize: need at least two samples");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return {mean, std, static_cast<int>(values.size()), std::move(quantity)};
}

double separation_sigma(const UncertainValue& a, const UncertainValue& b) {
  const double gap = std::abs(a.mean - b.mean);
  const double sigma = std::hypot(a.std, b.std);
  if (sigma == 0.0) return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return gap / sigma;
}

bool compatible(const UncertainValue& a, const UncertainValue& b, double n_sigma) {
  return std::abs(a.mean - b.mean) <= n_sigma * std::hypot(a.std, b.std);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, FidelityConvention convention) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity: dimensions differ");
  const ComplexMatrix s = sqrt_psd(rho.matrix());
  ComplexMatrix m = s * sigma.matrix() * s;
  m = 0.5 * (m + m.adjoint()).eval();
  const double root = std::clamp(sqrt_psd(m).trace().real(), 0.0, 1.0);
  return convention == FidelityConvention::Root ? root : root * root;
}

double purity(const DensityMatrix& rho) {
  return std::clamp((rho.matrix() * rho.matrix()).trace().real(), 1.0 / rho.dim(), 1.0);
}

Quantity Quantity::fidelity_to(const DensityMatrix& target) {
  Quantity q;
  q.kind = QuantityKind::FidelityTo;
  q.target = target;
  return q;
}

Quantity Quantity::purity() { return {}; }

Quantity Quantity::discord_tt() {
  Quantity q;
  q.kind = QuantityKind::DiscordTT;
  return q;
}

Quantity Quantity::discord_pt() {
  Quantity q;
  q.kind = QuantityKind::DiscordPT;
  return q;
}

Quantity Quantity::discord_xmodel(Family family, BellKind kind) {
  Quantity q;
  q.kind = QuantityKind::DiscordXModel;
  q.family = family;
  q.bell = kind;
  return q;
}

Quantity Quantity::purity_xmodel(Family family, BellKind kind) {
  Quantity q = discord_xmodel(family, kind);
  q.kind = QuantityKind::PurityXModel;
  return q;
}

Quantity Quantity::optimal_angle() {
  Quantity q;
  q.kind = QuantityKind::OptimalAngle;
  return q;
}

std::string Quantity::tag() const {
  switch (kind) {
    case QuantityKind::FidelityTo: return "fidelity-to";
    case QuantityKind::Purity: return "purity";
    case QuantityKind::DiscordTT: return "discord-tt";
    case QuantityKind::DiscordPT: return "discord-pt";
    case QuantityKind::DiscordXModel: return "discord-xmodel";
    case QuantityKind::PurityXModel: return "purity-xmodel";
    case QuantityKind::OptimalAngle: return "optimal-angle";
  }
  return "?";
}

std::vector<double> evaluate_quantities(const CountRecord& counts, std::span<const Quantity> quantities,
                                        std::uint64_t rng_seed, const PipelineOptions& options) {
  const bool needs_rho = std::any_of(quantities.begin(), quantities.end(), [](const Quantity& q) {
    return q.kind != QuantityKind::DiscordXModel && q.kind != QuantityKind::PurityXModel;
  });
  std::optional<DensityMatrix> rho;
  if (needs_rho) {
    MlConfig cfg = options.ml;
    cfg.seed = derive_seed(rng_seed, streams::kOptimizer, 0);
    rho = ml_reconstruct(counts, cfg).rho;
  }
  std::optional<DiscordEstimate> tt;
  auto full = [&]() -> const DiscordEstimate& {
    if (!tt) tt = discord_full(*rho);
    return *tt;
  };

  const std::uint64_t estimator_seed = derive_seed(rng_seed, streams::kEstimator, 0);
  std::vector<double> out;
  out.reserve(quantities.size());
  for (const auto& q : quantities) {
    switch (q.kind) {
      case QuantityKind::FidelityTo:
        if (!q.target) throw Error(ErrorCode::BadInput, "fidelity-to quantity without a target state");
        out.push_back(fidelity(*rho, *q.target, options.fidelity));
        break;
      case QuantityKind::Purity:
        out.push_back(purity(*rho));
        break;
      case QuantityKind::DiscordTT:
        out.push_back(full().discord);
        break;
      case QuantityKind::OptimalAngle:
        out.push_back(full().optimal_axis->theta);
        break;
      case QuantityKind::DiscordPT: {
        const PartialCounts pc = partial_counts_from_record(counts);
        const auto conds = conditionals_from_partial(pc);
        out.push_back(discord_partial(*rho, pc.axis, conds).discord);
        break;
      }
      case QuantityKind::DiscordXModel:
        out.push_back(discord_xmodel(counts, q.family, q.bell, estimator_seed, options.combiner).discord);
        break;
      case QuantityKind::PurityXModel:
        out.push_back(p_to_purity(estimate_p(counts, q.family, q.bell, estimator_seed, options.combiner), q.family));
        break;
    }
  }
  return out;
}

std::vector<UncertainValue> mc_uncertainty(const CountRecord& base_counts, std::span<const Quantity> quantities,
                                           int n_samples, std::uint64_t rng_seed, const PipelineOptions& options) {
  if (n_samples < 2) throw Error(ErrorCode::TooFewSamples, "mc_uncertainty: n_samples must be at least 2");
  validate(base_counts);
  std::vector<std::vector<double>> values(quantities.size());
  for (int i = 0; i < n_samples; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    try {
      const CountRecord sample = resample_counts(base_counts, derive_seed(rng_seed, streams::kResample, idx));
      const auto v = evaluate_quantities(sample, quantities, derive_seed(rng_seed, streams::kEstimator, idx), options);
      for (std::size_t q = 0; q < v.size(); ++q) values[q].push_back(v[q]);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "Monte Carlo sample " << i << ": " << e.what();
      throw Error(e.code(), os.str());
    }
  }
  std::vector<UncertainValue> out;
  for (std::size_t q = 0; q < quantities.size(); ++q) out.push_back(summarize(values[q], quantities[q].tag()));
  return out;
}

UncertainValue mc_uncertainty(const CountRecord& base_counts, const Quantity& quantity, int n_samples,
                              std::uint64_t rng_seed, const PipelineOptions& options) {
  return mc_uncertainty(base_counts, std::span<const Quantity>(&quantity, 1), n_samples, rng_seed, options).front();
}

std::vector<FDPoint> fd_scatter(const DensityMatrix& reference, const CountRecord& base_counts, int n_points,
                                std::uint64_t rng_seed, const std::string& reference_tag,
                                const PipelineOptions& options) {
  if (n_points < 1) throw Error(ErrorCode::TooFewSamples, "fd_scatter: n_points must be positive");
  validate(base_counts);
  const Quantity quantities[] = {Quantity::fidelity_to(reference), Quantity::discord_tt()};
  std::vector<FDPoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    try {
      const CountRecord sample = resample_counts(base_counts, derive_seed(rng_seed, streams::kResample, idx));
      const auto v = evaluate_quantities(sample, quantities, derive_seed(rng_seed, streams::kEstimator, idx), options);
      out.push_back({v[0], v[1], reference_tag});
    } catch (const Error& e) {
      std::ostringstream os;
      os << "scatter point " << i << ": " << e.what();
      throw Error(e.code(), os.str());
    }
  }
  return out;
}

MethodComparison compare_methods(const ReferenceState& ref, std::int64_t n_total, int n_mc, std::uint64_t rng_seed,
                                 bool exact, const PipelineOptions& options) {
  const DensityMatrix truth = ref.state();
  const auto probs = born_probabilities(truth, standard_projector_set());
  const CountRecord base = exact ? exact_counts(probs, n_total)
                                 : sample_counts(probs, n_total, derive_seed(rng_seed, streams::kBaseCounts, 0));
  const Quantity quantities[] = {
      Quantity::fidelity_to(truth),
      Quantity::purity(),
      Quantity::purity_xmodel(ref.family, ref.kind),
      Quantity::discord_tt(),
      Quantity::discord_pt(),
      Quantity::discord_xmodel(ref.family, ref.kind),
  };
  std::vector<UncertainValue> v;
  if (n_mc == 0) {
    const auto point = evaluate_quantities(base, quantities, rng_seed, options);
    for (std::size_t q = 0; q < point.size(); ++q) v.push_back({point[q], 0.0, 1, quantities[q].tag()});
  } else {
    v = mc_uncertainty(base, quantities, n_mc, rng_seed, options);
  }
  MethodComparison row;
  row.tag = ref.tag();
  row.family = ref.family;
  row.kind = ref.kind;
  row.mu_th = ref.mu;
  row.discord_th = discord_analytic(ref.family, ref.p());
  row.fidelity = v[0];
  row.purity = v[1];
  row.purity_x = v[2];
  row.tt = v[3];
  row.pt = v[4];
  row.x = v[5];
  return row;
}

}  // namespace discordlab
