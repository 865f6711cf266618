#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "discordlab/measure.hpp"
#include "discordlab/qmat.hpp"
#include "discordlab/simplex.hpp"

namespace discordlab {

/// Sixteen reals filling a complex lower-triangular 4x4 matrix T:
/// t[0..3] are the (real) diagonal entries T(0,0)..T(3,3); t[4..15] are
/// (re, im) pairs for the strict lower triangle in row-major order,
/// T(1,0), T(2,0), T(2,1), T(3,0), T(3,1), T(3,2).
struct CholeskyParams {
  std::array<double, 16> t{};
};

ComplexMatrix cholesky_factor(std::span<const double> t);

/// rho = T^H T / Tr[T^H T]. Throws DegenerateParams when Tr[T^H T] <= 1e-30.
DensityMatrix rho_from_cholesky(const CholeskyParams& params);

/// Parameters reproducing (1 - mix) rho + mix I/4; the admixture keeps the
/// factorization well defined for rank-deficient states.
CholeskyParams cholesky_from_rho(const DensityMatrix& rho, double mix = 1e-6);

/// Gaussian-approximation objective
///   N_T * sum_nu (p_nu(t) - n_nu/N_T)^2 / (2 p_nu(t)),
/// with p_nu(t) = <Psi_nu|rho(t)|Psi_nu> floored at 1e-10 in the denominator.
/// Zero iff every predicted probability matches its observed frequency.
class LikelihoodObjective {
 public:
  explicit LikelihoodObjective(const CountRecord& counts);

  double operator()(std::span<const double> t) const;

  double n_total() const noexcept { return n_total_; }

 private:
  std::vector<Ket4> kets_;
  std::vector<double> freqs_;
  double n_total_;
};

double neg_log_likelihood(const CholeskyParams& params, const CountRecord& counts);

struct MlConfig {
  int random_restarts = 5;
  bool warm_start = true;
  std::uint64_t seed = 0;
  SimplexOptions simplex{};
  /// Restarts from the incumbent until the objective improves by less than
  /// polish_tol (at most max_polish rounds).
  int max_polish = 25;
  double polish_tol = 1e-10;
};

struct ReconstructionResult {
  DensityMatrix rho;
  CholeskyParams params;
  double final_loglike = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int restarts_used = 0;
  bool converged = false;
};

/// Maximum-likelihood two-qubit state. Runs one warm start from the
/// projected linear-inversion estimate and `random_restarts` random starts,
/// keeps the lowest objective (ties go to the lowest start index) and then
/// polishes it. Requires an informationally complete record; throws
/// MissingProjectors otherwise and NotConverged if no start converges.
ReconstructionResult ml_reconstruct(const CountRecord& counts, const MlConfig& config = {});

/// Least-squares inversion of the Born rule, not necessarily physical.
ComplexMatrix linear_inversion(const CountRecord& counts);

/// Closest physical state in Frobenius norm to a Hermitian matrix of unit
/// trace (eigenvalue truncation with redistribution of the removed weight).
DensityMatrix project_to_physical(const ComplexMatrix& m);

/// Stokes reconstruction from frequencies for {H, V, D, L}:
/// s_z = f_H - f_V, s_x = 2 f_D - 1, s_y = 2 f_L - 1, rescaled onto the
/// Bloch sphere if |s| > 1.
DensityMatrix linear_singlequbit_tomo(const std::array<double, 4>& freqs);

/// Counts of the joint projectors Pi_k (x) |b><b| for outcome k of a
/// measurement on `measured` and b in {H, V, D, L} on the other qubit.
struct PartialCounts {
  MeasurementAxis axis;
  Party measured = Party::A;
  std::array<std::array<std::int64_t, 4>, 2> counts{};
};

/// n_kb ~ Poisson(n_total * Tr[(Pi_k (x) |b><b|) rho]).
PartialCounts simulate_partial_counts(const DensityMatrix& rho, const MeasurementAxis& axis,
                                      std::int64_t n_total, std::uint64_t rng_seed,
                                      Party measured = Party::A);

/// sigma_z on A followed by {H, V, D, L} on B uses only projectors of the
/// standard tomography set, so the partial data can be read off a full
/// count record.
PartialCounts partial_counts_from_record(const CountRecord& counts);

/// Outcome probabilities p_k = (n_kH + n_kV) / sum_k (n_kH + n_kV) and the
/// conditional states from linear single-qubit tomography.
std::array<Conditional, 2> conditionals_from_partial(const PartialCounts& partial);

}  // namespace discordlab
