#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "discordlab/qmat.hpp"
#include "discordlab/rng.hpp"

namespace testing {

using discordlab::cd;
using discordlab::ComplexMatrix;
using discordlab::DensityMatrix;

inline ComplexMatrix random_complex(discordlab::Rng& rng, int dim) {
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = cd(rng.normal(), rng.normal());
  return m;
}

/// Ginibre ensemble: G G^dagger / Tr, full rank almost surely.
inline DensityMatrix random_state(discordlab::Rng& rng, int dim = 4) {
  const ComplexMatrix g = random_complex(rng, dim);
  return DensityMatrix::from_unnormalized(g * g.adjoint());
}

/// Haar-ish unitary from the QR decomposition of a Ginibre matrix.
inline ComplexMatrix random_unitary(discordlab::Rng& rng, int dim = 2) {
  Eigen::MatrixXcd g = random_complex(rng, dim);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

inline DensityMatrix random_pure(discordlab::Rng& rng, int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cd(rng.normal(), rng.normal());
  v.normalize();
  return DensityMatrix(v * v.adjoint());
}

/// Independent entropy in bits using Eigen's self-adjoint solver.
inline double oracle_entropy(const ComplexMatrix& m) {
  const Eigen::MatrixXcd copy = m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(copy);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-300) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace testing
