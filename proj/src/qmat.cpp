#include "discordlab/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "discordlab/error.hpp"

namespace discordlab {

namespace {

void require_square_dim(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    std::ostringstream os;
    os << what << ": expected a 2x2 or 4x4 matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

constexpr double kJacobiTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

Spectrum eig_hermitian(const ComplexMatrix& m) {
  require_square_dim(m, "eig_hermitian");
  const double herr = hermiticity_error(m);
  if (herr > tol::kEigInputHermitian) {
    std::ostringstream os;
    os << "eig_hermitian: matrix is not Hermitian (max |M - M^H| = " << herr << ")";
    throw Error(ErrorCode::NonHermitian, os.str());
  }

  const Eigen::Index n = m.rows();
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = identity(static_cast<int>(n));
  const double scale = std::max(1.0, a.norm());

  // Each rotation G = P R, with P removing the phase of a(p,q) and R the
  // real Jacobi rotation that annihilates the resulting real off-diagonal.
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiTolerance * scale) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cd b = a(p, q);
        const double mag = std::abs(b);
        if (mag == 0.0) continue;
        const cd phase = std::conj(b) / mag;  // e^{-i arg b}
        const double theta = 0.5 * std::atan2(2.0 * mag, a(q, q).real() - a(p, p).real());
        const double c = std::cos(theta);
        const double s = std::sin(theta);

        const cd g_pp = c, g_pq = s, g_qp = -s * phase, g_qq = c * phase;
        for (Eigen::Index k = 0; k < n; ++k) {
          const cd akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g_pp + akq * g_qp;
          a(k, q) = akp * g_pq + akq * g_qq;
          const cd vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g_pp + vkq * g_qp;
          v(k, q) = vkp * g_pq + vkq * g_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cd apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
          a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  Spectrum out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2)
    throw Error(ErrorCode::DimensionMismatch, "kron: both factors must be 2x2");
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const Spectrum spec = eig_hermitian(m);
  const double noise = 1e-14 * std::max(1.0, spec.values.cwiseAbs().maxCoeff());
  RealVector roots(spec.values.size());
  for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
    const double lambda = spec.values(k);
    if (lambda < -tol::kNegativeEigen) {
      std::ostringstream os;
      os << "sqrt_psd: eigenvalue " << lambda << " is below -1e-9";
      throw Error(ErrorCode::NotPSD, os.str());
    }
    roots(k) = lambda < noise ? 0.0 : std::sqrt(lambda);
  }
  ComplexMatrix r = spec.vectors * roots.cast<cd>().asDiagonal() * spec.vectors.adjoint();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli(int index) {
  ComplexMatrix p(2, 2);
  switch (index) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, cd(0, -1), cd(0, 1), 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::OutOfRange, "pauli: index must be 0..3");
  }
  return p;
}

ComplexMatrix projector(const Ket2& v) { return v * v.adjoint(); }
ComplexMatrix projector(const Ket4& v) { return v * v.adjoint(); }

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  require_square_dim(m, "DensityMatrix");
  const double herr = hermiticity_error(m);
  if (herr > tol::kHermitian) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max |M - M^H| = " << herr << ")";
    throw Error(ErrorCode::NonHermitian, os.str());
  }
  const cd tr = m.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr.real() << " differs from 1";
    throw Error(ErrorCode::InvalidState, os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
  const double lowest = eig_hermitian(m_).values.minCoeff();
  if (lowest < -tol::kNegativeEigen) {
    std::ostringstream os;
    os << "DensityMatrix: eigenvalue " << lowest << " is below -1e-9";
    throw Error(ErrorCode::NotPSD, os.str());
  }
}

DensityMatrix DensityMatrix::from_unnormalized(const ComplexMatrix& m) {
  require_square_dim(m, "DensityMatrix");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::InvalidState, "DensityMatrix: non-positive trace");
  return DensityMatrix(h / tr);
}

RealVector DensityMatrix::eigenvalues() const {
  RealVector values = eig_hermitian(m_).values;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (values(k) < 0.0) values(k) = 0.0;
  return values;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Party keep) {
  if (m.rows() != 4 || m.cols() != 4)
    throw Error(ErrorCode::DimensionMismatch, "partial_trace: expected a 4x4 matrix");
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int t = 0; t < 2; ++t) {
        if (keep == Party::A)
          r(x, y) += m(2 * x + t, 2 * y + t);
        else
          r(x, y) += m(2 * t + x, 2 * t + y);
      }
  return r;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Party keep) {
  return DensityMatrix::from_unnormalized(partial_trace(rho.matrix(), keep));
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& ua,
                                  const ComplexMatrix& ub) {
  if (rho.dim() != 4)
    throw Error(ErrorCode::DimensionMismatch, "apply_local_unitary: expected a two-qubit state");
  const ComplexMatrix u = kron(ua, ub);
  return DensityMatrix::from_unnormalized(u * rho.matrix() * u.adjoint());
}

DensityMatrix swap_parties(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw Error(ErrorCode::DimensionMismatch, "swap_parties: expected a two-qubit state");
  static constexpr int kSwap[4] = {0, 2, 1, 3};
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = rho(kSwap[i], kSwap[j]);
  return DensityMatrix(out);
}

}  // namespace discordlab
