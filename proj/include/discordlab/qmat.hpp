#pragma once

// Dense complex algebra for one- and two-qubit operators.
//
// Two-qubit basis ordering is |HH>, |HV>, |VH>, |VV>, with the first factor
// belonging to party A (the transmitted arm). Index (2*a + b) addresses
// |a>_A |b>_B.

#include <complex>

#include <Eigen/Dense>

namespace discordlab {

using cd = std::complex<double>;

/// Square complex matrix of dimension 2 or 4. Storage is inline (no heap).
using ComplexMatrix =
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Ket2 = Eigen::Vector2cd;
using Ket4 = Eigen::Vector4cd;

enum class Party { A, B };

inline Party other(Party p) { return p == Party::A ? Party::B : Party::A; }

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
/// Eigenvalues in [-kNegativeEigen, 0) are clipped to zero; below is an error.
inline constexpr double kNegativeEigen = 1e-9;
inline constexpr double kEigInputHermitian = 1e-8;
}  // namespace tol

struct Spectrum {
  RealVector values;       // ascending
  ComplexMatrix vectors;   // columns are eigenvectors
};

/// Cyclic complex Jacobi eigensolver; converges when the off-diagonal
/// Frobenius norm drops below 1e-12 * max(1, ||m||_F).
/// Throws NonHermitian if max|m - m^H| > 1e-8, DimensionMismatch for dim not 2 or 4.
Spectrum eig_hermitian(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-9, 0) and eigenvalues at rounding-noise level are treated as zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

/// Largest entrywise |m - m^H|.
double hermiticity_error(const ComplexMatrix& m);

ComplexMatrix identity(int dim);

/// 0 -> I, 1 -> sigma_x, 2 -> sigma_y, 3 -> sigma_z.
ComplexMatrix pauli(int index);

ComplexMatrix projector(const Ket2& v);
ComplexMatrix projector(const Ket4& v);

/// Hermitian, unit-trace, PSD matrix of dimension 2 or 4. Construction
/// validates the invariants and stores the exactly-Hermitian part.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

  cd operator()(int row, int col) const { return m_(row, col); }

  /// Eigenvalues ascending, with [-1e-9, 0) clipped to 0.
  RealVector eigenvalues() const;

  /// Normalizes trace and symmetrizes before validating; for matrices that
  /// are physical up to rounding (e.g. products of unitaries).
  static DensityMatrix from_unnormalized(const ComplexMatrix& m);

 private:
  ComplexMatrix m_;
};

/// Reduced state of the kept party.
DensityMatrix partial_trace(const DensityMatrix& rho, Party keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, Party keep);

/// Conjugation (U_A (x) U_B) rho (U_A (x) U_B)^H.
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& ua,
                                  const ComplexMatrix& ub);

/// Exchange of the two qubits.
DensityMatrix swap_parties(const DensityMatrix& rho);

}  // namespace discordlab
