#include "discordlab/states.hpp"

#include <cmath>
#include <sstream>

#include "discordlab/error.hpp"

namespace discordlab {

MixingParam::MixingParam(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << "mixing parameter " << p << " outside [0, 1]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
}

Ket4 bell_ket(BellKind kind) {
  const double h = 1.0 / std::sqrt(2.0);
  Ket4 v = Ket4::Zero();
  if (kind == BellKind::PhiPlus) {
    v(0) = h;
    v(3) = h;
  } else {
    v(1) = h;
    v(2) = h;
  }
  return v;
}

DensityMatrix bell(BellKind kind) { return DensityMatrix(projector(bell_ket(kind))); }

DensityMatrix source_state(double theta, double phi) {
  Ket4 v = Ket4::Zero();
  v(0) = std::cos(theta);
  v(3) = std::polar(1.0, phi) * std::sin(theta);
  return DensityMatrix::from_unnormalized(projector(v));
}

DensityMatrix werner(MixingParam p, BellKind kind) {
  const double w = p.value();
  ComplexMatrix m = w * projector(bell_ket(kind)) + (1.0 - w) * 0.25 * identity(4);
  return DensityMatrix(m);
}

DensityMatrix phase_damped(MixingParam p, BellKind kind) {
  const double w = p.value();
  const ComplexMatrix pure = projector(bell_ket(kind));
  ComplexMatrix dephased = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    // P_kj |Psi><Psi| P_kj keeps only the (k, k) diagonal element.
    dephased(k, k) = pure(k, k);
  }
  return DensityMatrix(w * pure + (1.0 - w) * dephased);
}

DensityMatrix family_state(Family family, MixingParam p, BellKind kind) {
  return family == Family::Werner ? werner(p, kind) : phase_damped(p, kind);
}

DensityMatrix x_state(const XStateCoeffs& c) {
  ComplexMatrix m = identity(4) + c.c1 * kron(pauli(1), pauli(1)) +
                    c.c2 * kron(pauli(2), pauli(2)) + c.c3 * kron(pauli(3), pauli(3));
  m *= 0.25;
  // Eigenvalues are (1 - c1 - c2 - c3)/4 and the three sign flips thereof.
  const double lows[4] = {1 - c.c1 - c.c2 - c.c3, 1 - c.c1 + c.c2 + c.c3,
                          1 + c.c1 - c.c2 + c.c3, 1 + c.c1 + c.c2 - c.c3};
  for (double l : lows) {
    if (l / 4.0 < -tol::kNegativeEigen) {
      std::ostringstream os;
      os << "x_state: coefficients (" << c.c1 << ", " << c.c2 << ", " << c.c3
         << ") do not define a positive semidefinite state";
      throw Error(ErrorCode::NotPSD, os.str());
    }
  }
  return DensityMatrix(m);
}

XStateCoeffs x_coeffs(Family family, MixingParam p, BellKind kind) {
  const double w = p.value();
  const double zz = family == Family::Werner ? w : 1.0;
  if (kind == BellKind::PhiPlus) return {w, -w, zz};
  return {w, w, -zz};
}

double p_to_purity(MixingParam p, Family family) {
  const double w = p.value();
  return family == Family::Werner ? (1.0 + 3.0 * w * w) / 4.0 : (1.0 + w * w) / 2.0;
}

MixingParam purity_to_p(double mu, Family family) {
  const double lo = family == Family::Werner ? 0.25 : 0.5;
  if (!(mu >= lo && mu <= 1.0)) {
    std::ostringstream os;
    os << "purity " << mu << " outside [" << lo << ", 1] for the " << to_string(family)
       << " family";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  const double p2 = family == Family::Werner ? (4.0 * mu - 1.0) / 3.0 : 2.0 * mu - 1.0;
  return MixingParam(std::min(1.0, std::sqrt(std::max(0.0, p2))));
}

std::string to_string(BellKind kind) { return kind == BellKind::PhiPlus ? "phi" : "psi"; }
std::string to_string(Family family) { return family == Family::Werner ? "werner" : "damped"; }

std::string ReferenceState::tag() const {
  std::ostringstream os;
  os << to_string(family) << ":" << to_string(kind) << ":";
  if (std::abs(mu - 2.0 / 3.0) < 1e-12)
    os << "2/3";
  else
    os << mu;
  return os.str();
}

std::vector<ReferenceState> reference_states() {
  std::vector<ReferenceState> out;
  for (BellKind kind : {BellKind::PhiPlus, BellKind::PsiPlus}) {
    for (double mu : {1.0, 0.83, 2.0 / 3.0, 0.5, 0.25}) out.push_back({Family::Werner, kind, mu});
    for (double mu : {1.0, 0.83, 2.0 / 3.0, 0.5}) out.push_back({Family::Damped, kind, mu});
  }
  return out;
}

}  // namespace discordlab
