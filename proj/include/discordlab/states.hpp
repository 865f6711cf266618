#pragma once

#include <string>
#include <vector>

#include "discordlab/qmat.hpp"

namespace discordlab {

enum class BellKind { PhiPlus, PsiPlus };
enum class Family { Werner, Damped };

/// Mixing weight of the Bell projector, 0 <= p <= 1.
class MixingParam {
 public:
  explicit MixingParam(double p);
  double value() const noexcept { return p_; }

 private:
  double p_;
};

/// Coefficients of rho = (I + c1 sx(x)sx + c2 sy(x)sy + c3 sz(x)sz) / 4.
///
/// With this assignment the |Phi+> families are c = (p, -p, p) (Werner) and
/// c = (p, -p, 1) (phase-damped); the |Psi+> families are (p, p, -p) and
/// (p, p, -1).
struct XStateCoeffs {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

Ket4 bell_ket(BellKind kind);
DensityMatrix bell(BellKind kind);

/// cos(theta)|HH> + e^{i phi} sin(theta)|VV>
DensityMatrix source_state(double theta, double phi);

/// p |Psi><Psi| + (1 - p) I/4
DensityMatrix werner(MixingParam p, BellKind kind);

/// p |Psi><Psi| + (1 - p) sum_kj P_kj |Psi><Psi| P_kj, P_kj = |k><k| (x) |j><j|
DensityMatrix phase_damped(MixingParam p, BellKind kind);

DensityMatrix family_state(Family family, MixingParam p, BellKind kind);

/// Throws NotPSD when the coefficients fall outside the physical tetrahedron.
DensityMatrix x_state(const XStateCoeffs& c);
XStateCoeffs x_coeffs(Family family, MixingParam p, BellKind kind);

/// mu = (1 + 3p^2)/4 for Werner, (1 + p^2)/2 for phase-damped.
double p_to_purity(MixingParam p, Family family);
MixingParam purity_to_p(double mu, Family family);

std::string to_string(BellKind kind);
std::string to_string(Family family);

/// One of the states studied in the tables: a family, a Bell kind and a
/// nominal purity.
struct ReferenceState {
  Family family;
  BellKind kind;
  double mu;

  MixingParam p() const { return purity_to_p(mu, family); }
  DensityMatrix state() const { return family_state(family, p(), kind); }
  std::string tag() const;
};

/// Werner at mu in {1, 0.83, 2/3, 0.5, 0.25} and phase-damped at
/// mu in {1, 0.83, 2/3, 0.5}, for |Phi+> then |Psi+>.
std::vector<ReferenceState> reference_states();

}  // namespace discordlab
