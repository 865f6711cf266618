#include "discordlab/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "discordlab/error.hpp"
#include "discordlab/rng.hpp"

namespace discordlab {

namespace {

constexpr double kDegenerateNorm = 1e-30;
constexpr double kProbabilityFloor = 1e-10;

// Strict lower triangle in row-major order.
constexpr std::array<std::pair<int, int>, 6> kLowerEntries = {
    {{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}}};

}  // namespace

ComplexMatrix cholesky_factor(std::span<const double> t) {
  if (t.size() != 16) throw Error(ErrorCode::DimensionMismatch, "cholesky_factor: expected 16 parameters");
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) m(i, i) = t[static_cast<std::size_t>(i)];
  for (std::size_t k = 0; k < kLowerEntries.size(); ++k) {
    const auto [r, c] = kLowerEntries[k];
    m(r, c) = cd(t[4 + 2 * k], t[5 + 2 * k]);
  }
  return m;
}

DensityMatrix rho_from_cholesky(const CholeskyParams& params) {
  const ComplexMatrix t = cholesky_factor(params.t);
  const ComplexMatrix g = t.adjoint() * t;
  const double norm = g.trace().real();
  if (norm <= kDegenerateNorm)
    throw Error(ErrorCode::DegenerateParams, "rho_from_cholesky: Tr[T^H T] vanishes");
  return DensityMatrix::from_unnormalized(g / norm);
}

CholeskyParams cholesky_from_rho(const DensityMatrix& rho, double mix) {
  if (rho.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "cholesky_from_rho: expected a two-qubit state");
  // rho = T^H T with T lower triangular is a Cholesky factorization in
  // reversed index order: J rho J = L L^H gives T = (J L J)^H.
  const ComplexMatrix mixed = (1.0 - mix) * rho.matrix() + mix * 0.25 * identity(4);
  ComplexMatrix reversed(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) reversed(i, j) = mixed(3 - i, 3 - j);
  const Eigen::Matrix4cd l = Eigen::Matrix4cd(reversed).llt().matrixL();
  ComplexMatrix t(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t(i, j) = std::conj(l(3 - j, 3 - i));

  CholeskyParams p;
  for (int i = 0; i < 4; ++i) p.t[static_cast<std::size_t>(i)] = t(i, i).real();
  for (std::size_t k = 0; k < kLowerEntries.size(); ++k) {
    const auto [r, c] = kLowerEntries[k];
    p.t[4 + 2 * k] = t(r, c).real();
    p.t[5 + 2 * k] = t(r, c).imag();
  }
  return p;
}

LikelihoodObjective::LikelihoodObjective(const CountRecord& counts) {
  validate(counts);
  const ProjectorSet set = projector_set_from_labels(counts.labels);
  n_total_ = static_cast<double>(counts.n_total);
  for (std::size_t nu = 0; nu < set.size(); ++nu) {
    kets_.push_back(set[nu].ket);
    freqs_.push_back(static_cast<double>(counts.counts[nu]) / n_total_);
  }
}

double LikelihoodObjective::operator()(std::span<const double> t) const {
  double norm = 0.0;
  for (double x : t) norm += x * x;
  if (norm <= kDegenerateNorm) return std::numeric_limits<double>::max();

  // T as dense complex entries; p_nu = |T psi|^2 / Tr[T^H T].
  cd m[4][4] = {};
  for (int i = 0; i < 4; ++i) m[i][i] = t[static_cast<std::size_t>(i)];
  for (std::size_t k = 0; k < kLowerEntries.size(); ++k) {
    const auto [r, c] = kLowerEntries[k];
    m[r][c] = cd(t[4 + 2 * k], t[5 + 2 * k]);
  }

  double total = 0.0;
  for (std::size_t nu = 0; nu < kets_.size(); ++nu) {
    const Ket4& v = kets_[nu];
    double p = 0.0;
    for (int r = 0; r < 4; ++r) {
      cd acc = 0.0;
      for (int c = 0; c <= r; ++c) acc += m[r][c] * v(c);
      p += std::norm(acc);
    }
    p /= norm;
    const double residual = p - freqs_[nu];
    total += residual * residual / (2.0 * std::max(p, kProbabilityFloor));
  }
  return n_total_ * total;
}

double neg_log_likelihood(const CholeskyParams& params, const CountRecord& counts) {
  return LikelihoodObjective(counts)(params.t);
}

ComplexMatrix linear_inversion(const CountRecord& counts) {
  validate(counts);
  const ProjectorSet set = projector_set_from_labels(counts.labels);
  const Eigen::MatrixXd design = set.design_matrix();
  Eigen::VectorXd freqs(static_cast<Eigen::Index>(counts.counts.size()));
  for (std::size_t i = 0; i < counts.counts.size(); ++i)
    freqs(static_cast<Eigen::Index>(i)) = static_cast<double>(counts.counts[i]) / static_cast<double>(counts.n_total);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 16) {
    std::ostringstream os;
    os << "count record is not informationally complete (design matrix rank " << qr.rank() << " < 16)";
    throw Error(ErrorCode::BadCounts, os.str());
  }
  const Eigen::VectorXd r = qr.solve(freqs);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m += 0.25 * r(4 * i + j) * kron(pauli(i), pauli(j));
  return 0.5 * (m + m.adjoint());
}

DensityMatrix project_to_physical(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  const Spectrum spec = eig_hermitian(h / h.trace().real());
  const Eigen::Index n = spec.values.size();
  RealVector lambda = spec.values;  // ascending
  double removed = 0.0;
  Eigen::Index lo = 0;
  while (lo < n) {
    const double shifted = lambda(lo) + removed / static_cast<double>(n - lo);
    if (shifted >= 0.0) break;
    removed += lambda(lo);
    lambda(lo) = 0.0;
    ++lo;
  }
  for (Eigen::Index k = lo; k < n; ++k) lambda(k) += removed / static_cast<double>(n - lo);
  const ComplexMatrix out = spec.vectors * lambda.cast<cd>().asDiagonal() * spec.vectors.adjoint();
  return DensityMatrix::from_unnormalized(out);
}

namespace {
constexpr int kRebuilds = 3;
}  // namespace

ReconstructionResult ml_reconstruct(const CountRecord& raw_counts, const MlConfig& config) {
  // Canonical ordering makes the result independent of how the record lists
  // its (label, count) pairs.
  const CountRecord counts = canonical_order(raw_counts);
  const ComplexMatrix linear = linear_inversion(counts);
  const LikelihoodObjective objective(counts);
  auto f = [&objective](std::span<const double> t) { return objective(t); };

  struct Start {
    std::vector<double> x0;
    double step;
  };
  std::vector<Start> starts;
  if (config.warm_start) {
    const CholeskyParams warm = cholesky_from_rho(project_to_physical(linear), 1e-3);
    starts.push_back({std::vector<double>(warm.t.begin(), warm.t.end()), 0.05});
  }
  Rng rng(derive_seed(config.seed, streams::kOptimizer, 0));
  for (int r = 0; r < config.random_restarts; ++r) {
    std::vector<double> x(16);
    for (double& v : x) v = 0.5 * rng.normal();
    starts.push_back({std::move(x), 0.2});
  }
  if (starts.empty()) throw Error(ErrorCode::NotConverged, "ml_reconstruct: no starting points configured");

  int iterations = 0, evaluations = 0, restarts_used = 0;
  SimplexResult best;
  bool have_best = false;
  bool any_converged = false;
  for (const auto& start : starts) {
    SimplexOptions opts = config.simplex;
    opts.initial_step = start.step;
    SimplexResult run = simplex_minimize(f, start.x0, opts);
    iterations += run.iterations;
    evaluations += run.evaluations;
    // A simplex that has collapsed onto a slow valley often recovers when
    // rebuilt around its best vertex.
    for (int k = 0; !run.converged && k < kRebuilds; ++k) {
      opts.initial_step = std::max(1e-3, 0.5 * opts.initial_step);
      SimplexResult again = simplex_minimize(f, run.x, opts);
      iterations += again.iterations;
      evaluations += again.evaluations;
      if (again.f <= run.f) run = std::move(again);
    }
    ++restarts_used;
    any_converged = any_converged || run.converged;
    if (!have_best || run.f < best.f) {
      best = std::move(run);
      have_best = true;
    }
  }
  if (!any_converged) {
    std::ostringstream os;
    os << "ml_reconstruct: no start converged within " << config.simplex.max_evaluations
       << " evaluations (" << starts.size() << " starts)";
    throw Error(ErrorCode::NotConverged, os.str());
  }

  bool polished = config.max_polish == 0;
  for (int round = 0; round < config.max_polish; ++round) {
    SimplexOptions opts = config.simplex;
    opts.initial_step = 1e-3;
    SimplexResult run = simplex_minimize(f, best.x, opts);
    iterations += run.iterations;
    evaluations += run.evaluations;
    const double gain = best.f - run.f;
    if (run.f < best.f) best = std::move(run);
    if (gain < config.polish_tol) {
      polished = true;
      break;
    }
  }

  CholeskyParams params;
  std::copy(best.x.begin(), best.x.end(), params.t.begin());
  return {rho_from_cholesky(params), params, best.f, iterations, evaluations, restarts_used, polished};
}

DensityMatrix linear_singlequbit_tomo(const std::array<double, 4>& freqs) {
  const auto [fh, fv, fd, fl] = freqs;
  double sx = 2.0 * fd - 1.0, sy = 2.0 * fl - 1.0, sz = fh - fv;
  const double len = std::sqrt(sx * sx + sy * sy + sz * sz);
  if (len > 1.0) {
    sx /= len;
    sy /= len;
    sz /= len;
  }
  const ComplexMatrix m = 0.5 * (identity(2) + sx * pauli(1) + sy * pauli(2) + sz * pauli(3));
  return DensityMatrix::from_unnormalized(m);
}

PartialCounts simulate_partial_counts(const DensityMatrix& rho, const MeasurementAxis& axis,
                                      std::int64_t n_total, std::uint64_t rng_seed, Party measured) {
  if (n_total <= 0) throw Error(ErrorCode::BadCounts, "n_total must be positive");
  static constexpr char kLocal[4] = {'H', 'V', 'D', 'L'};
  PartialCounts out{axis, measured, {}};
  Rng rng(rng_seed);
  for (int k = 0; k < 2; ++k) {
    const ComplexMatrix cond = conditional_operator(rho.matrix(), axis.outcome_ket(k), measured);
    for (int b = 0; b < 4; ++b) {
      const Ket2 v = polarization_ket(kLocal[b]);
      const double p = std::max(0.0, (v.adjoint() * cond * v)(0, 0).real());
      out.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)] =
          sample_poisson(static_cast<double>(n_total) * p, rng);
    }
  }
  return out;
}

PartialCounts partial_counts_from_record(const CountRecord& counts) {
  validate(counts);
  static constexpr const char* kLabels[2][4] = {{"HH", "HV", "HD", "HL"}, {"VH", "VV", "VD", "VL"}};
  PartialCounts out{MeasurementAxis{0.0, 0.0}, Party::A, {}};
  for (int k = 0; k < 2; ++k)
    for (int b = 0; b < 4; ++b) {
      const auto c = counts.count_of(kLabels[k][b]);
      if (!c) throw Error(ErrorCode::MissingProjectors, std::string("partial tomography needs projector ") + kLabels[k][b]);
      out.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)] = *c;
    }
  return out;
}

std::array<Conditional, 2> conditionals_from_partial(const PartialCounts& partial) {
  double block[2];
  for (int k = 0; k < 2; ++k)
    block[k] = static_cast<double>(partial.counts[static_cast<std::size_t>(k)][0] +
                                   partial.counts[static_cast<std::size_t>(k)][1]);
  const double total = block[0] + block[1];
  if (total <= 0.0) throw Error(ErrorCode::BadCounts, "partial tomography counts are empty");

  auto make = [&](int k) -> Conditional {
    if (block[k] <= 0.0) {
      std::ostringstream os;
      os << "partial tomography: no counts for outcome " << k;
      throw Error(ErrorCode::ConditionalOnNullEvent, os.str());
    }
    const auto& c = partial.counts[static_cast<std::size_t>(k)];
    const std::array<double, 4> f = {static_cast<double>(c[0]) / block[k], static_cast<double>(c[1]) / block[k],
                                     static_cast<double>(c[2]) / block[k], static_cast<double>(c[3]) / block[k]};
    return {block[k] / total, linear_singlequbit_tomo(f)};
  };
  return {make(0), make(1)};
}

}  // namespace discordlab
