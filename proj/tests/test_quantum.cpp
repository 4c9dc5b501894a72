#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "nhbell/quantum.hpp"
#include "nhbell/rng.hpp"

using namespace nhbell;
using std::numbers::pi;

namespace {

// Independent eigen oracle for the Jacobi solver.
double eigen_oracle_max(const MatrixXc& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> slv(m);
  return slv.eigenvalues().maxCoeff();
}

BlochVector random_unit(SplitMix64& rng) {
  // uniform on the sphere via z ~ U(-1,1), phi ~ U(0,2pi)
  double z = rng.next_in(-1.0, 1.0);
  double phi = rng.next_in(0.0, 2 * pi);
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return BlochVector(r * std::cos(phi), r * std::sin(phi), z);
}

}  // namespace

TEST_CASE("bloch_observable basics") {
  MatrixXc sx = bloch_observable(BlochVector::x()).mat();
  CHECK(sx(0, 1) == Complex(1, 0));
  CHECK(sx(1, 0) == Complex(1, 0));
  CHECK(sx(0, 0) == Complex(0, 0));

  MatrixXc sz = bloch_observable(BlochVector::z()).mat();
  CHECK(sz(0, 0) == Complex(1, 0));
  CHECK(sz(1, 1) == Complex(-1, 0));

  double theta = 0.7;
  MatrixXc tilted =
      bloch_observable(BlochVector(std::sin(theta), 0, std::cos(theta))).mat();
  CHECK(tilted(0, 0).real() == doctest::Approx(std::cos(theta)).epsilon(1e-14));
  CHECK(tilted(0, 1).real() == doctest::Approx(std::sin(theta)).epsilon(1e-14));

  CHECK_THROWS_AS(BlochVector(1, 1, 0), std::invalid_argument);
}

TEST_CASE("bloch observables have spectrum {-1,+1}") {
  SplitMix64 rng(41);
  for (int i = 0; i < 200; ++i) {
    auto res = jacobi_hermitian<double>(
        ComplexMatrix<double>(bloch_observable(random_unit(rng)).mat()));
    CHECK(res.eigenvalues.front() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(res.eigenvalues.back() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("assemble_operator on the CHSH polynomial") {
  HermitianOperator h =
      assemble_operator(chsh(1), MeasurementSettings::fixed_xy(2));
  CHECK(h.dim() == 4);
  CHECK(eigen_max(h).value ==
        doctest::Approx(2 * std::numbers::sqrt2).epsilon(1e-9));

  BellPolynomial zero(2);
  HermitianOperator z =
      assemble_operator(zero, MeasurementSettings::fixed_xy(2));
  CHECK(z.mat().norm() == 0.0);

  CHECK_THROWS_AS(
      assemble_operator(chsh(1), MeasurementSettings::fixed_xy(3)),
      std::invalid_argument);
}

TEST_CASE("e_prime operator in the real sigma_x/sigma_z representation") {
  // the known matrix with (1,1) entry -1-r
  double r = 3.0;
  MatrixXc m = assemble_operator(e_prime(Rational(3)),
                                 MeasurementSettings::fixed_xz(2))
                   .mat();
  Eigen::Matrix4d expected;
  expected << -1 - r, -1, -1, 1,  //
      -1, 1, 1, 1,                //
      -1, 1, 1, 1,                //
      1, 1, 1, -1;
  CHECK((m.real() - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(m.imag().cwiseAbs().maxCoeff() == 0.0);

  // locally unitary-equivalent to the sigma_x/sigma_y convention
  double via_xz = eigen_max(HermitianOperator(m)).value;
  double via_xy = eigen_max(assemble_operator(
                                e_prime(Rational(3)),
                                MeasurementSettings::fixed_xy(2)))
                      .value;
  CHECK(via_xz == doctest::Approx(via_xy).epsilon(1e-12));
}

TEST_CASE("jacobi agrees with the library eigensolver") {
  SplitMix64 rng(43);
  for (int n : {2, 4, 8}) {
    for (int rep = 0; rep < 25; ++rep) {
      MatrixXc m(n, n);
      for (int i = 0; i < n; ++i) {
        m(i, i) = Complex(rng.next_in(-2, 2), 0);
        for (int j = i + 1; j < n; ++j) {
          m(i, j) = Complex(rng.next_in(-1, 1), rng.next_in(-1, 1));
          m(j, i) = std::conj(m(i, j));
        }
      }
      auto res = jacobi_hermitian<double>(ComplexMatrix<double>(m));
      CHECK(res.eigenvalues.back() ==
            doctest::Approx(eigen_oracle_max(m)).epsilon(1e-11));
      // eigenvector residual
      VectorXc v = res.eigenvectors.col(n - 1);
      CHECK((m * v - res.eigenvalues.back() * v).norm() < 1e-10);
    }
  }
}

TEST_CASE("eigen_max basics") {
  HermitianOperator id(MatrixXc::Identity(4, 4));
  CHECK(eigen_max(id).value == doctest::Approx(1.0).epsilon(1e-14));

  // MABK at the orthogonal settings reaches 4
  BellPolynomial mabk = three_qubit_family(FamilyParams(0, 0, 0, 0));
  double v = eigen_max(assemble_operator(mabk, MeasurementSettings::fixed_xy(3)))
                 .value;
  CHECK(v == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("schmidt states") {
  PureState bell = schmidt_state(pi / 4);
  CHECK(bell.amplitudes(0).real() == doctest::Approx(1 / std::numbers::sqrt2));
  CHECK(bell.amplitudes(3).real() == doctest::Approx(1 / std::numbers::sqrt2));
  CHECK_FALSE(bell.boundary);

  PureState product = schmidt_state(0.0);
  CHECK(product.boundary);
  CHECK(product.amplitudes(0) == Complex(1, 0));

  // <psi| sz x sz |psi> = 1 for every xi
  BellPolynomial zz(2);
  SitedMonomial m;
  m.set(Site::A, Selector::Obs2);
  m.set(Site::B, Selector::Obs2);
  zz.add_term(m, Rational(1));
  MeasurementSettings s = MeasurementSettings::fixed_xz(2);
  HermitianOperator h = assemble_operator(zz, s);
  for (double xi : {0.0, 0.3, pi / 4, 1.2, pi / 2}) {
    CHECK(expectation(schmidt_state(xi), h) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("expectation at an eigenvector is the eigenvalue") {
  BellPolynomial p = e_prime(Rational(2));
  HermitianOperator h =
      assemble_operator(p, MeasurementSettings::fixed_xy(2));
  auto em = eigen_max(h);
  PureState psi(em.vector);
  CHECK(expectation(psi, h) == doctest::Approx(em.value).epsilon(1e-12));

  HermitianOperator bigger(MatrixXc::Identity(8, 8));
  CHECK_THROWS_AS(expectation(psi, bigger), std::invalid_argument);
}

TEST_CASE("theta-maximized e_prime expectation matches its closed form") {
  // settings A1 = sx, A2 = -sz, B1/B2 = +-sx sin(theta) + sz cos(theta) with
  // the maximizing theta; the maximum is sqrt((2 + r sin^2 xi / 2)^2 +
  // 4 sin^2 2xi) - r sin^2 xi / 2.
  for (double r : {0.0, 1.0, 4.0, 9.0}) {
    for (double xi : {0.2, 0.5, pi / 4}) {
      double s2 = std::sin(xi) * std::sin(xi);
      double a = 2 + r * s2 / 2;
      double b = 2 * std::sin(2 * xi);
      double closed = std::sqrt(a * a + b * b) - r * s2 / 2;

      double theta = std::atan2(b, a);
      MeasurementSettings m;
      m.arity = 2;
      m.set(Site::A, 1, BlochVector::x());
      m.set(Site::A, 2, BlochVector::minus_z());
      m.set(Site::B, 1, BlochVector(std::sin(theta), 0, std::cos(theta)));
      m.set(Site::B, 2, BlochVector(-std::sin(theta), 0, std::cos(theta)));
      HermitianOperator h = assemble_operator(
          e_prime(Rational(static_cast<int>(r))), m);
      CHECK(expectation(schmidt_state(xi), h) ==
            doctest::Approx(closed).epsilon(1e-9));
    }
  }
}

namespace {

// test-only golden-section maximizer over theta
template <typename F>
double golden_max(F&& f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (f(c) > f(d))
      b = d;
    else
      a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return f(0.5 * (a + b));
}

double epp_expectation(double s, double t, double xi, double theta, int branch) {
  MeasurementSettings m;
  m.arity = 2;
  m.set(Site::A, 1, branch == 1 ? BlochVector::z() : BlochVector::minus_z());
  m.set(Site::A, 2, BlochVector(-1, 0, 0));
  m.set(Site::B, 1, BlochVector(std::sin(theta), 0, std::cos(theta)));
  m.set(Site::B, 2, BlochVector(-std::sin(theta), 0, std::cos(theta)));
  HermitianOperator h = assemble_operator(
      e_double_prime(Rational(static_cast<int>(s)), Rational(static_cast<int>(t))),
      m);
  return expectation(schmidt_state(xi), h);
}

}  // namespace

TEST_CASE("f1/f2 closed forms") {
  CHECK(f1_closed(3, 5, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f1_closed(17, 2, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f1_closed(0, 0, pi / 4) ==
        doctest::Approx(2 * std::numbers::sqrt2).epsilon(1e-12));
  // the parenthetical boundary case: at xi = pi/2 the second branch is 2
  CHECK(f2_closed(3, 5, pi / 2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f2_closed(3, 5, pi / 2 - 1e-8) == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(f1_closed(1, 1, 1.0), std::invalid_argument);  // > pi/4
  CHECK_THROWS_AS(f2_closed(1, 1, 0.2), std::invalid_argument);  // < pi/4
  CHECK_THROWS_AS(f1_closed(-1, 0, 0.1), std::invalid_argument);

  // against the golden-section oracle on both branches
  for (double s : {0.0, 2.0, 5.0}) {
    for (double t : {0.0, 3.0}) {
      for (double xi : {0.15, 0.5, pi / 4}) {
        double oracle = golden_max(
            [&](double th) { return epp_expectation(s, t, xi, th, 1); }, 0, pi);
        CHECK(f1_closed(s, t, xi) == doctest::Approx(oracle).epsilon(1e-8));
      }
      for (double xi : {pi / 4, 1.0, 1.4}) {
        double oracle = golden_max(
            [&](double th) { return epp_expectation(s, t, xi, th, 2); }, 0, pi);
        CHECK(f2_closed(s, t, xi) == doctest::Approx(oracle).epsilon(1e-8));
      }
    }
  }

  // inside the stated positivity region f1 exceeds the classical bound
  for (double s : {1.0, 4.0}) {
    for (double t : {1.0, 4.0}) {
      for (double xi : {0.2, 0.6, pi / 4}) {
        double cond = 32 - s * t + (32 - s * t + 8 * t) * std::cos(2 * xi);
        if (cond > 0) CHECK(f1_closed(s, t, xi) > 2.0);
      }
    }
  }
}

TEST_CASE("quartic root of the e_prime characteristic equation") {
  CHECK(quartic_root_max(0) == 2 * std::numbers::sqrt2);
  CHECK_THROWS_AS(quartic_root_max(-1), std::invalid_argument);

  // r = 1: largest root of e^4 + e^3 - 9 e^2 - 4 e; frozen from a
  // companion-matrix oracle
  CHECK(quartic_root_max(1) == doctest::Approx(2.7701619103485644).epsilon(1e-11));

  // companion-matrix oracle across a few r values
  for (double r : {0.5, 2.0, 20.0, 500.0}) {
    Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
    companion(1, 0) = companion(2, 1) = companion(3, 2) = 1;
    companion(0, 3) = 0;
    companion(1, 3) = 4 * r;
    companion(2, 3) = r + 8;
    companion(3, 3) = -r;
    Eigen::EigenSolver<Eigen::Matrix4d> slv(companion);
    double best = -1e300;
    for (int i = 0; i < 4; ++i)
      if (std::abs(slv.eigenvalues()(i).imag()) < 1e-9)
        best = std::max(best, slv.eigenvalues()(i).real());
    CHECK(quartic_root_max(r) == doctest::Approx(best).epsilon(1e-9));
  }

  // large-r asymptote
  CHECK(quartic_root_max(1e6) ==
        doctest::Approx((1 + std::sqrt(17.0)) / 2).epsilon(1e-3));

  // two independent routes: quartic vs the assembled operator's spectrum
  for (double r : {0.25, 1.0, 10.0, 1000.0}) {
    double eig = eigen_max(assemble_operator(e_prime(Rational(r)),
                                             MeasurementSettings::fixed_xy(2)))
                     .value;
    CHECK(std::abs(quartic_root_max(r) - eig) < 1e-9);
  }
}
