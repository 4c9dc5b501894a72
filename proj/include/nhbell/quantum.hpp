#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nhbell/jacobi.hpp"
#include "nhbell/polynomial.hpp"

namespace nhbell {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// Unit direction on the Bloch sphere; defines the observable n . sigma.
struct BlochVector {
  double nx = 0, ny = 0, nz = 1;

  BlochVector() = default;
  BlochVector(double x, double y, double z) : nx(x), ny(y), nz(z) {
    double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (std::abs(norm - 1.0) > 1e-12)
      throw std::invalid_argument("Bloch vector must have unit norm");
  }

  static BlochVector x() { return {1, 0, 0}; }
  static BlochVector y() { return {0, 1, 0}; }
  static BlochVector z() { return {0, 0, 1}; }
  static BlochVector minus_z() { return {0, 0, -1}; }
  // In-plane direction at azimuth phi (sigma_x cos phi + sigma_y sin phi).
  static BlochVector xy(double phi) {
    return {std::cos(phi), std::sin(phi), 0.0};
  }
  static BlochVector sphere(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
  }
};

// Two observables per site, one entry per site up to the target arity.
struct MeasurementSettings {
  int arity = 2;
  std::array<std::array<BlochVector, 2>, 3> obs{};

  const BlochVector& at(Site s, int k) const {
    if (k != 1 && k != 2)
      throw std::invalid_argument("observable index must be 1 or 2");
    return obs[static_cast<int>(s)][k - 1];
  }
  void set(Site s, int k, const BlochVector& n) {
    obs[static_cast<int>(s)][k - 1] = n;
  }

  // Orthogonal in-plane pair sigma_x / sigma_y on every site: the convention
  // under which the closed-form spectra below are stated.
  static MeasurementSettings fixed_xy(int arity) {
    MeasurementSettings m;
    m.arity = arity;
    for (Site s : kSites) {
      m.set(s, 1, BlochVector::x());
      m.set(s, 2, BlochVector::y());
    }
    return m;
  }

  // sigma_x / sigma_z variant; locally unitary-equivalent to fixed_xy (a
  // rotation about x maps y to z on every site), hence identical spectra, but
  // with purely real matrix representations.
  static MeasurementSettings fixed_xz(int arity) {
    MeasurementSettings m;
    m.arity = arity;
    for (Site s : kSites) {
      m.set(s, 1, BlochVector::x());
      m.set(s, 2, BlochVector::z());
    }
    return m;
  }
};

// Dense complex matrix constrained to be Hermitian at construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(MatrixXc m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("operator must be square");
    double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-12)
      throw std::invalid_argument("operator is not Hermitian");
  }

  const MatrixXc& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  MatrixXc m_;
};

// n . sigma: Hermitian, traceless, spectrum {-1,+1}.
inline HermitianOperator bloch_observable(const BlochVector& n) {
  MatrixXc m(2, 2);
  m << Complex(n.nz, 0), Complex(n.nx, -n.ny),  //
      Complex(n.nx, n.ny), Complex(-n.nz, 0);
  return HermitianOperator(std::move(m));
}

namespace detail {

inline MatrixXc identity2() { return MatrixXc::Identity(2, 2); }

inline MatrixXc kron_all(const std::array<MatrixXc, 3>& factor, int arity) {
  MatrixXc out = factor[0];
  for (int s = 1; s < arity; ++s)
    out = Eigen::kroneckerProduct(out, factor[s]).eval();
  return out;
}

}  // namespace detail

// Replaces every site variable by the chosen spin observable and sums the
// term-wise tensor products; the constant monomial maps to the identity.
inline HermitianOperator assemble_operator(const BellPolynomial& p,
                                           const MeasurementSettings& m) {
  if (m.arity != p.arity())
    throw std::invalid_argument("settings arity does not match polynomial");
  const int arity = p.arity();
  const Eigen::Index dim = Eigen::Index(1) << arity;
  MatrixXc total = MatrixXc::Zero(dim, dim);
  for (const auto& [mono, coeff] : p.terms()) {
    std::array<MatrixXc, 3> factor;
    for (Site s : kSites) {
      int i = static_cast<int>(s);
      if (i >= arity) break;
      factor[i] = mono.uses(s)
                      ? bloch_observable(m.at(s, static_cast<int>(mono.at(s)))).mat()
                      : detail::identity2();
    }
    total += to_double(coeff) * detail::kron_all(factor, arity);
  }
  return HermitianOperator(std::move(total));
}

struct EigenMax {
  double value = 0;
  VectorXc vector;
};

// Largest eigenvalue and eigenvector via the Jacobi solver, run in long double
// so that operators with large subtracted projector terms (norms up to ~1e6)
// still come out with ~1e-13 absolute eigenvalue error. The residual check is
// scaled by the matrix norm: an absolute residual below double roundoff is not
// even representable for such norms.
inline EigenMax eigen_max(const HermitianOperator& h) {
  using LD = long double;
  const Eigen::Index n = h.dim();
  ComplexMatrix<LD> a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = std::complex<LD>(h.mat()(i, j).real(), h.mat()(i, j).imag());

  auto res = jacobi_hermitian<LD>(a, LD(1e-13), 100);

  EigenMax out;
  out.value = static_cast<double>(res.eigenvalues.back());
  out.vector.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto z = res.eigenvectors(i, n - 1);
    out.vector(i) = Complex(static_cast<double>(z.real()),
                            static_cast<double>(z.imag()));
  }
  double scale = std::max(1.0, h.mat().norm());
  double residual = (h.mat() * out.vector - out.value * out.vector).norm();
  if (residual > 1e-10 * scale)
    throw std::runtime_error("eigensolver residual check failed");
  return out;
}

// cos(xi)|00> + sin(xi)|11>. The boundary flag marks (numerically) product
// states at xi = 0 or pi/2.
struct PureState {
  VectorXc amplitudes;
  bool boundary = false;

  explicit PureState(VectorXc amps, bool boundary_flag = false)
      : amplitudes(std::move(amps)), boundary(boundary_flag) {
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("state must be normalized");
  }
};

inline PureState schmidt_state(double xi) {
  VectorXc v = VectorXc::Zero(4);
  v(0) = std::cos(xi);
  v(3) = std::sin(xi);
  bool product = std::min(std::abs(std::cos(xi)), std::abs(std::sin(xi))) < 1e-12;
  return PureState(std::move(v), product);
}

// <psi|H|psi>. Hermitian inputs make this real up to roundoff; anything
// beyond a norm-scaled 1e-10 is treated as an error instead of being
// silently discarded.
inline double expectation(const PureState& psi, const HermitianOperator& h) {
  if (psi.amplitudes.size() != h.dim())
    throw std::invalid_argument("state and operator dimensions differ");
  Complex val = psi.amplitudes.adjoint() * (h.mat() * psi.amplitudes);
  double scale = std::max(1.0, h.mat().norm());
  if (std::abs(val.imag()) > 1e-10 * scale)
    throw std::runtime_error("expectation value has a non-real component");
  return val.real();
}

// Closed-form theta-maximized expectation of the E''(s,t) operator on the
// Schmidt state, branch xi in [0, pi/4]:
//   f1 = ( sqrt((8+s+(s+t)c)^2 + (8+t)^2 sin^2 2xi) - (s+t+s c) ) / 4,
// with c = cos 2xi.
inline double f1_closed(double s, double t, double xi) {
  if (s < 0 || t < 0) throw std::invalid_argument("s and t must be >= 0");
  if (xi < 0 || xi > std::numbers::pi / 4 + 1e-15)
    throw std::invalid_argument("f1 branch requires xi in [0, pi/4]");
  double c = std::cos(2 * xi);
  double sin22 = std::sin(2 * xi) * std::sin(2 * xi);
  double root = std::sqrt(std::pow(8 + s + (s + t) * c, 2) +
                          std::pow(8 + t, 2) * sin22);
  return 0.25 * (root - (s + t + s * c));
}

// Companion branch xi in [pi/4, pi/2]:
//   f2 = ( sqrt((8+s-(s+t)c)^2 + (8+t)^2 sin^2 2xi) - (s+t-s c) ) / 4.
inline double f2_closed(double s, double t, double xi) {
  if (s < 0 || t < 0) throw std::invalid_argument("s and t must be >= 0");
  if (xi < std::numbers::pi / 4 - 1e-15 || xi > std::numbers::pi / 2 + 1e-15)
    throw std::invalid_argument("f2 branch requires xi in [pi/4, pi/2]");
  double c = std::cos(2 * xi);
  double sin22 = std::sin(2 * xi) * std::sin(2 * xi);
  double root = std::sqrt(std::pow(8 + s - (s + t) * c, 2) +
                          std::pow(8 + t, 2) * sin22);
  return 0.25 * (root - (s + t - s * c));
}

// Largest real root of  e^4 + r e^3 - (r+8) e^2 - 4 r e = 0,  the
// characteristic equation of the sigma_x/sigma_y E'(r) operator. At r = 0 the
// equation degenerates to e^2 (e^2 - 8) = 0 and the answer is 2*sqrt(2); for
// r > 0 the largest root lies in (2,3): the quartic is negative at 2 and
// positive, increasing from 3 on. Bisection to 1e-12.
inline double quartic_root_max(double r) {
  if (r < 0) throw std::invalid_argument("quartic_root_max requires r >= 0");
  if (r == 0) return 2.0 * std::numbers::sqrt2;
  auto g = [r](double e) {
    return ((e + r) * e - (r + 8)) * e * e - 4 * r * e;
  };
  double lo = 2.0, hi = 3.0;
  if (!(g(hi) > 0)) hi = 2.9;  // tiny-r fallback bracket
  if (!(g(lo) < 0) || !(g(hi) > 0))
    throw std::runtime_error("quartic bracket failed sign verification");
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nhbell
