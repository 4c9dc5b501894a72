#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace nhbell {

template <typename Real>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
struct JacobiResult {
  std::vector<Real> eigenvalues;     // ascending
  ComplexMatrix<Real> eigenvectors;  // column k pairs with eigenvalues[k]
  int sweeps = 0;
  Real off_diagonal = Real(0);       // Frobenius norm at termination
};

// Cyclic Jacobi diagonalization for complex Hermitian matrices. Each rotation
// is a unitary acting on one (p,q) plane, chosen to zero A(p,q):
//
//   U = [ c         s e^{i a} ]     with  a = arg A(p,q),
//       [ -s e^{-ia}    c     ]           t = s/c the smaller root of
//                                         t^2 + 2 theta t - 1 = 0,
//                                         theta = (A(q,q)-A(p,p)) / (2|A(p,q)|).
//
// Intended for the small (<= 8x8) operators here; deterministic, no
// dependencies beyond Eigen's storage.
template <typename Real>
JacobiResult<Real> jacobi_hermitian(ComplexMatrix<Real> a,
                                    Real off_tol = Real(1e-13),
                                    int max_sweeps = 100) {
  using std::abs;
  using std::sqrt;
  using Cplx = std::complex<Real>;

  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("matrix must be square");

  ComplexMatrix<Real> v = ComplexMatrix<Real>::Identity(n, n);

  auto off_norm = [&] {
    Real sum(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) sum += std::norm(a(i, j));
    return sqrt(sum);
  };

  JacobiResult<Real> out;
  Real off = off_norm();
  while (off > off_tol && out.sweeps < max_sweeps) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real r = abs(a(p, q));
        if (r == Real(0)) continue;
        const Cplx phase = a(p, q) / r;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        const Real theta = (aqq - app) / (2 * r);
        Real t;
        if (theta == Real(0)) {
          t = Real(1);
        } else {
          t = Real(1) / (abs(theta) + sqrt(Real(1) + theta * theta));
          if (theta < Real(0)) t = -t;
        }
        const Real c = Real(1) / sqrt(Real(1) + t * t);
        const Real s = t * c;

        // A <- A U (columns), then A <- U^H A (rows); V accumulates U.
        ComplexVector<Real> colp = a.col(p), colq = a.col(q);
        a.col(p) = c * colp - s * std::conj(phase) * colq;
        a.col(q) = s * phase * colp + c * colq;

        Eigen::Matrix<Cplx, 1, Eigen::Dynamic> rowp = a.row(p), rowq = a.row(q);
        a.row(p) = c * rowp - s * phase * rowq;
        a.row(q) = s * std::conj(phase) * rowp + c * rowq;

        a(p, q) = Cplx(0);
        a(q, p) = Cplx(0);
        a(p, p) = Cplx(a(p, p).real());
        a(q, q) = Cplx(a(q, q).real());

        ComplexVector<Real> vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp - s * std::conj(phase) * vq;
        v.col(q) = s * phase * vp + c * vq;
      }
    }
    ++out.sweeps;
    off = off_norm();
  }
  out.off_diagonal = off;

  // Sort ascending, carrying eigenvectors along.
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace nhbell
