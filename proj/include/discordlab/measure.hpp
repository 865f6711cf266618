#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "discordlab/qmat.hpp"
#include "discordlab/rng.hpp"

namespace discordlab {

/// Single-photon polarization ket for H, V, D, A, L or R.
/// |D> = (|H>+|V>)/sqrt2, |A> = (|H>-|V>)/sqrt2, |L> = (|H>+i|V>)/sqrt2,
/// |R> = (|H>-i|V>)/sqrt2.
Ket2 polarization_ket(char label);

/// Rank-1 two-qubit product projector |a b><a b|, labelled "ab".
struct Projector {
  std::string label;
  Ket4 ket;
};

class ProjectorSet {
 public:
  explicit ProjectorSet(std::vector<Projector> projectors);

  std::size_t size() const noexcept { return projectors_.size(); }
  const Projector& operator[](std::size_t i) const { return projectors_[i]; }
  auto begin() const { return projectors_.begin(); }
  auto end() const { return projectors_.end(); }

  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Real N x 16 matrix mapping the Pauli-basis coordinates r_ij of
  /// rho = (1/4) sum r_ij s_i (x) s_j (row-major in (i, j)) to probabilities.
  Eigen::MatrixXd design_matrix() const;

 private:
  std::vector<Projector> projectors_;
};

/// Label ordering of the standard tomography set (index 0 here is nu = 1):
///   1 HH   2 HV   3 VH   4 VV   5 HD   6 HL   7 VD   8 VL
///   9 DH  10 DD  11 DV  12 DL  13 LH  14 LV  15 LD  16 LL
/// nu = 1..4 is the computational basis, so their probabilities sum to one.
/// nu = 10 (DD) and nu = 16 (LL) are the projectors used by the
/// phase-damped mixing-parameter estimator.
const std::array<std::string_view, 16>& standard_labels();
ProjectorSet standard_projector_set();

/// Builds projectors from two-letter labels such as "HD". Throws BadCounts
/// on unknown letters.
ProjectorSet projector_set_from_labels(std::span<const std::string> labels);

/// p_nu = <Psi_nu| rho |Psi_nu>
std::vector<double> born_probabilities(const DensityMatrix& rho, const ProjectorSet& set);

/// Coincidence counts for a set of labelled projectors. n_total is
/// N_T = n_HH + n_HV + n_VH + n_VV.
struct CountRecord {
  std::vector<std::string> labels;
  std::vector<std::int64_t> counts;
  std::int64_t n_total = 0;
  std::optional<std::uint64_t> seed;

  std::optional<std::int64_t> count_of(std::string_view label) const;
};

/// Assembles a record and fills in n_total. Validates it.
CountRecord make_count_record(std::vector<std::string> labels, std::vector<std::int64_t> counts,
                              std::optional<std::uint64_t> seed = std::nullopt);

/// Throws BadCounts when the record is malformed: length mismatch, negative
/// counts, unknown or duplicate labels, missing computational-basis labels,
/// or a stored n_total that disagrees with the counts.
void validate(const CountRecord& record);

/// Returns the record with (label, count) pairs in standard order. Labels
/// outside the standard set are kept after the standard ones, sorted.
CountRecord canonical_order(const CountRecord& record);

/// One Poisson deviate. Sequential-search inversion for mean < 30, normal
/// approximation with continuity correction otherwise.
std::int64_t sample_poisson(double mean, Rng& rng);

/// n_nu ~ Poisson(n_total * p_nu) for the standard projector set.
CountRecord sample_counts(std::span<const double> probs, std::int64_t n_total,
                          std::uint64_t rng_seed);

/// n_nu = round(n_total * p_nu), no noise.
CountRecord exact_counts(std::span<const double> probs, std::int64_t n_total);

/// Counts accumulated by acquiring each component state for a fraction
/// `weight` of the run time; equivalent in distribution to sampling the
/// mixture directly.
CountRecord sample_counts_time_mixed(std::span<const std::pair<double, DensityMatrix>> components,
                                     std::int64_t n_total, std::uint64_t rng_seed);

/// n_nu^(i) ~ Poisson(mean = base n_nu).
CountRecord resample_counts(const CountRecord& base, std::uint64_t rng_seed);

/// Projective qubit measurement along n0 = (sin t cos f, sin t sin f, cos t).
struct MeasurementAxis {
  double theta = 0.0;
  double phi = 0.0;

  /// Same direction with theta in [0, pi] and phi in [0, 2 pi).
  static MeasurementAxis normalized(double theta, double phi);

  /// Same measurement (n and -n give the same pair of projectors up to
  /// outcome relabelling) with theta in [0, pi/2].
  static MeasurementAxis upper_hemisphere(double theta, double phi);

  /// Ket of the outcome-k eigenstate, so that Pi_k = |n_k><n_k|.
  Ket2 outcome_ket(int k) const;
};

/// (Pi_0, Pi_1) = ((I + n0.sigma)/2, (I - n0.sigma)/2)
std::pair<ComplexMatrix, ComplexMatrix> axis_projectors(const MeasurementAxis& axis);

struct Conditional {
  double probability;
  DensityMatrix state;
};

/// Outcome probability and normalized state of the unmeasured party after
/// obtaining outcome k on `measured`. Throws ConditionalOnNullEvent when
/// p_k <= 1e-12.
Conditional conditional_state(const DensityMatrix& rho, const MeasurementAxis& axis, int outcome,
                              Party measured);

/// Unnormalized conditional operator <n|_measured rho |n>_measured; its
/// trace is the outcome probability. No validation.
ComplexMatrix conditional_operator(const ComplexMatrix& rho, const Ket2& n, Party measured);

}  // namespace discordlab
