#include "discordlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "discordlab/error.hpp"

namespace discordlab {

namespace {

constexpr double kNullEvent = 1e-12;
constexpr std::array<std::string_view, 4> kBasisLabels = {"HH", "HV", "VH", "VV"};

[[noreturn]] void bad_counts(const std::string& msg) { throw Error(ErrorCode::BadCounts, msg); }

Ket4 product_ket(const std::string& label) {
  if (label.size() != 2) bad_counts("projector label '" + label + "' must have two letters");
  const Ket2 a = polarization_ket(label[0]);
  const Ket2 b = polarization_ket(label[1]);
  Ket4 v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(2 * i + j) = a(i) * b(j);
  return v;
}

}  // namespace

Ket2 polarization_ket(char label) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (label) {
    case 'H': return Ket2(1.0, 0.0);
    case 'V': return Ket2(0.0, 1.0);
    case 'D': return Ket2(h, h);
    case 'A': return Ket2(h, -h);
    case 'L': return Ket2(h, cd(0.0, h));
    case 'R': return Ket2(h, cd(0.0, -h));
    default: break;
  }
  bad_counts(std::string("unknown polarization label '") + label + "'");
}

ProjectorSet::ProjectorSet(std::vector<Projector> projectors) : projectors_(std::move(projectors)) {}

std::optional<std::size_t> ProjectorSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < projectors_.size(); ++i)
    if (projectors_[i].label == label) return i;
  return std::nullopt;
}

Eigen::MatrixXd ProjectorSet::design_matrix() const {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(projectors_.size()), 16);
  for (std::size_t nu = 0; nu < projectors_.size(); ++nu) {
    const Ket4& v = projectors_[nu].ket;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const ComplexMatrix op = kron(pauli(i), pauli(j));
        d(static_cast<Eigen::Index>(nu), 4 * i + j) = 0.25 * (v.adjoint() * op * v)(0, 0).real();
      }
  }
  return d;
}

const std::array<std::string_view, 16>& standard_labels() {
  static constexpr std::array<std::string_view, 16> kLabels = {
      "HH", "HV", "VH", "VV", "HD", "HL", "VD", "VL",
      "DH", "DD", "DV", "DL", "LH", "LV", "LD", "LL"};
  return kLabels;
}

ProjectorSet standard_projector_set() {
  std::vector<Projector> ps;
  for (std::string_view l : standard_labels()) {
    std::string label(l);
    ps.push_back({label, product_ket(label)});
  }
  return ProjectorSet(std::move(ps));
}

ProjectorSet projector_set_from_labels(std::span<const std::string> labels) {
  std::vector<Projector> ps;
  ps.reserve(labels.size());
  for (const auto& label : labels) ps.push_back({label, product_ket(label)});
  return ProjectorSet(std::move(ps));
}

std::vector<double> born_probabilities(const DensityMatrix& rho, const ProjectorSet& set) {
  if (rho.dim() != 4)
    throw Error(ErrorCode::DimensionMismatch, "born_probabilities: expected a two-qubit state");
  std::vector<double> p;
  p.reserve(set.size());
  for (const auto& proj : set) {
    const double v = (proj.ket.adjoint() * rho.matrix() * proj.ket)(0, 0).real();
    p.push_back(std::clamp(v, 0.0, 1.0));
  }
  return p;
}

std::optional<std::int64_t> CountRecord::count_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size() && i < counts.size(); ++i)
    if (labels[i] == label) return counts[i];
  return std::nullopt;
}

namespace {

std::int64_t basis_total(const CountRecord& r) {
  std::int64_t total = 0;
  for (std::string_view l : kBasisLabels) {
    const auto c = r.count_of(l);
    if (!c) bad_counts("count record is missing the computational-basis projector " + std::string(l));
    total += *c;
  }
  return total;
}

}  // namespace

void validate(const CountRecord& record) {
  if (record.labels.size() != record.counts.size()) {
    std::ostringstream os;
    os << "count record has " << record.labels.size() << " labels but " << record.counts.size()
       << " counts";
    bad_counts(os.str());
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < record.labels.size(); ++i) {
    const auto& label = record.labels[i];
    product_ket(label);
    if (!seen.insert(label).second) bad_counts("duplicate projector label " + label);
    if (record.counts[i] < 0) bad_counts("negative count for projector " + label);
  }
  const std::int64_t total = basis_total(record);
  if (total != record.n_total) {
    std::ostringstream os;
    os << "n_total " << record.n_total << " disagrees with n_HH + n_HV + n_VH + n_VV = " << total;
    bad_counts(os.str());
  }
  if (total <= 0) bad_counts("computational-basis counts sum to zero");
}

CountRecord make_count_record(std::vector<std::string> labels, std::vector<std::int64_t> counts,
                              std::optional<std::uint64_t> seed) {
  CountRecord r{std::move(labels), std::move(counts), 0, seed};
  if (r.labels.size() == r.counts.size()) r.n_total = basis_total(r);
  validate(r);
  return r;
}

CountRecord canonical_order(const CountRecord& record) {
  const auto& std_labels = standard_labels();
  auto rank = [&](const std::string& label) {
    const auto it = std::find(std_labels.begin(), std_labels.end(), label);
    return static_cast<std::size_t>(it - std_labels.begin());
  };
  std::vector<std::size_t> order(record.labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = rank(record.labels[a]), rb = rank(record.labels[b]);
    if (ra != rb) return ra < rb;
    return record.labels[a] < record.labels[b];
  });
  CountRecord out;
  out.n_total = record.n_total;
  out.seed = record.seed;
  for (std::size_t i : order) {
    out.labels.push_back(record.labels[i]);
    out.counts.push_back(record.counts[i]);
  }
  return out;
}

std::int64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) return 0;
  if (mean < 30.0) {
    const double u = rng.uniform();
    double term = std::exp(-mean);
    double cdf = term;
    std::int64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      term *= mean / static_cast<double>(k);
      cdf += term;
    }
    return k;
  }
  const double x = mean + std::sqrt(mean) * rng.normal();
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(x + 0.5)));
}

namespace {

std::vector<std::string> standard_label_strings() {
  std::vector<std::string> out;
  for (std::string_view l : standard_labels()) out.emplace_back(l);
  return out;
}

void require_standard_probs(std::span<const double> probs) {
  if (probs.size() != 16) {
    std::ostringstream os;
    os << "expected 16 probabilities, got " << probs.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

CountRecord sample_counts(std::span<const double> probs, std::int64_t n_total,
                          std::uint64_t rng_seed) {
  require_standard_probs(probs);
  if (n_total <= 0) bad_counts("n_total must be positive");
  Rng rng(rng_seed);
  std::vector<std::int64_t> counts;
  for (double p : probs) counts.push_back(sample_poisson(static_cast<double>(n_total) * p, rng));
  return make_count_record(standard_label_strings(), std::move(counts), rng_seed);
}

CountRecord exact_counts(std::span<const double> probs, std::int64_t n_total) {
  require_standard_probs(probs);
  if (n_total <= 0) bad_counts("n_total must be positive");
  std::vector<std::int64_t> counts;
  for (double p : probs) counts.push_back(std::llround(static_cast<double>(n_total) * p));
  return make_count_record(standard_label_strings(), std::move(counts));
}

CountRecord sample_counts_time_mixed(std::span<const std::pair<double, DensityMatrix>> components,
                                     std::int64_t n_total, std::uint64_t rng_seed) {
  if (n_total <= 0) bad_counts("n_total must be positive");
  const ProjectorSet set = standard_projector_set();
  Rng rng(rng_seed);
  std::vector<std::int64_t> counts(16, 0);
  for (const auto& [weight, state] : components) {
    const auto probs = born_probabilities(state, set);
    for (std::size_t nu = 0; nu < 16; ++nu)
      counts[nu] += sample_poisson(static_cast<double>(n_total) * weight * probs[nu], rng);
  }
  return make_count_record(standard_label_strings(), std::move(counts), rng_seed);
}

CountRecord resample_counts(const CountRecord& base, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  std::vector<std::int64_t> counts;
  counts.reserve(base.counts.size());
  for (std::int64_t n : base.counts) counts.push_back(sample_poisson(static_cast<double>(n), rng));
  return make_count_record(base.labels, std::move(counts), rng_seed);
}

MeasurementAxis MeasurementAxis::normalized(double theta, double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  if (theta > std::numbers::pi) {
    theta = two_pi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  if (phi >= two_pi) phi -= two_pi;
  return {theta, phi};
}

MeasurementAxis MeasurementAxis::upper_hemisphere(double theta, double phi) {
  MeasurementAxis a = normalized(theta, phi);
  if (a.theta > 0.5 * std::numbers::pi) a = normalized(std::numbers::pi - a.theta, a.phi + std::numbers::pi);
  return a;
}

Ket2 MeasurementAxis::outcome_ket(int k) const {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  if (k == 0) return Ket2(c, std::polar(s, phi));
  return Ket2(-std::polar(s, -phi), c);
}

std::pair<ComplexMatrix, ComplexMatrix> axis_projectors(const MeasurementAxis& axis) {
  const double nx = std::sin(axis.theta) * std::cos(axis.phi);
  const double ny = std::sin(axis.theta) * std::sin(axis.phi);
  const double nz = std::cos(axis.theta);
  const ComplexMatrix ns = nx * pauli(1) + ny * pauli(2) + nz * pauli(3);
  return {0.5 * (identity(2) + ns), 0.5 * (identity(2) - ns)};
}

ComplexMatrix conditional_operator(const ComplexMatrix& rho, const Ket2& n, Party measured) {
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      cd acc = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const cd w = std::conj(n(a)) * n(b);
          acc += measured == Party::A ? w * rho(2 * a + x, 2 * b + y) : w * rho(2 * x + a, 2 * y + b);
        }
      out(x, y) = acc;
    }
  return out;
}

Conditional conditional_state(const DensityMatrix& rho, const MeasurementAxis& axis, int outcome,
                              Party measured) {
  if (rho.dim() != 4)
    throw Error(ErrorCode::DimensionMismatch, "conditional_state: expected a two-qubit state");
  if (outcome != 0 && outcome != 1)
    throw Error(ErrorCode::OutOfRange, "conditional_state: outcome must be 0 or 1");
  const ComplexMatrix m = conditional_operator(rho.matrix(), axis.outcome_ket(outcome), measured);
  const double p = m.trace().real();
  if (p <= kNullEvent) {
    std::ostringstream os;
    os << "conditional_state: outcome " << outcome << " has probability " << p;
    throw Error(ErrorCode::ConditionalOnNullEvent, os.str());
  }
  return {p, DensityMatrix::from_unnormalized(m)};
}

}  // namespace discordlab
