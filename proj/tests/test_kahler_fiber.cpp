#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mitk/errors.hpp"
#include "mitk/kahler_fiber.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace mitk::fiber;

namespace {

const Complex I1{0.0, 1.0};

Eigen::VectorXd sorted_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd v = es.eigenvalues();
  std::sort(v.data(), v.data() + v.size());
  return v;
}

// Nakano form summed by hand.
double nakano_by_loops(const CurvatureTensor& t, const CMatrix& tau) {
  Complex s = 0.0;
  for (int j = 0; j < t.n(); ++j)
    for (int k = 0; k < t.n(); ++k)
      for (int l = 0; l < t.r(); ++l)
        for (int m = 0; m < t.r(); ++m) s += t(j, k, l, m) * tau(j, l) * std::conj(tau(k, m));
  return s.real();
}

}  // namespace

TEST_CASE("n = 1 hand values") {
  const ExteriorFiber f(1, 1);
  const CMatrix L = lefschetz_matrix(f);
  const CMatrix Lam = lambda_matrix(f);
  // masks: 0 -> 1, 1 -> dz, 2 -> dzbar, 3 -> dz ^ dzbar
  CHECK(std::abs(L(3, 0) - I1) < 1e-15);
  CHECK(L.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK(std::abs(Lam(0, 3) + I1) < 1e-15);
  const CMatrix comm = L * Lam - Lam * L;
  CHECK(std::abs(comm(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(comm(3, 3) - 1.0) < 1e-15);
  CHECK(std::abs(comm(1, 1)) < 1e-15);
}

TEST_CASE("omega in C^2") {
  auto one = FiberForm::zero(2, 1, 0, 0);
  one.at({}, {}, 0) = 1.0;
  const auto w = lefschetz_L(one);
  CHECK(w.p == 1);
  CHECK(w.q == 1);
  CHECK(std::abs(w.get({0}, {0}, 0) - I1) < 1e-15);
  CHECK(std::abs(w.get({1}, {1}, 0) - I1) < 1e-15);
  CHECK(std::abs(w.get({0}, {1}, 0)) < 1e-15);
  CHECK(norm_sq(w) == doctest::Approx(2.0));
  // omega^2 = 2 (i dz1 ^ dzbar1) ^ (i dz2 ^ dzbar2), omega^3 = 0
  const auto w2 = lefschetz_L(w);
  CHECK(norm_sq(w2) == doctest::Approx(4.0));
  CHECK(norm_sq(lefschetz_L(w2)) == 0.0);
}

TEST_CASE("n = 1 commutator is multiplication by c") {
  CurvatureTensor t(1, 1);
  t(0, 0, 0, 0) = 2.5;
  const CMatrix b = curvature_commutator(t, 1);
  REQUIRE(b.rows() == 1);
  CHECK(std::abs(b(0, 0) - 2.5) < 1e-15);
  CHECK(curvature_commutator(CurvatureTensor(2, 2), 2).norm() == 0.0);
}

TEST_CASE("[L, Lambda] = (p + q - n) on every bidegree") {
  for (int n = 1; n <= 3; ++n) {
    for (int r = 1; r <= 2; ++r) {
      const ExteriorFiber f(n, r);
      const CMatrix L = lefschetz_matrix(f);
      const CMatrix Lam = lambda_matrix(f);
      CHECK((Lam - L.adjoint()).norm() < 1e-14);
      const CMatrix comm = L * Lam - Lam * L;
      const auto deg = f.degrees();
      CMatrix expected = CMatrix::Zero(f.dim(), f.dim());
      for (std::size_t i = 0; i < f.dim(); ++i) expected(i, i) = deg[i] - n;
      CHECK((comm - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("lambda_adj is the adjoint of lefschetz_L") {
  random::Engine rng(3);
  for (int it = 0; it < 50; ++it) {
    const int n = 1 + it % 3;
    const int p = it % (n + 1);
    const int q = (it / 3) % (n + 1);
    if (p == n || q == n) continue;
    const auto u = random::form(rng, n, 2, p, q);
    const auto v = random::form(rng, n, 2, p + 1, q + 1);
    CHECK(std::abs(inner(lefschetz_L(u), v) - inner(u, lambda_adj(v))) < 1e-12);
  }
}

TEST_CASE("Nakano form matches the loop sum") {
  random::Engine rng(11);
  for (int it = 0; it < 20; ++it) {
    const auto t = CurvatureTensor::from_matricization(random::hermitian(rng, 6), 3, 2);
    const CMatrix tau = random::gaussian_matrix(rng, 3, 2);
    CHECK(nakano_form(t, tau) == doctest::Approx(nakano_by_loops(t, tau)).epsilon(1e-12));
  }
}

TEST_CASE("commutator spectrum on (n,1) and (n,n) forms") {
  random::Engine rng(17);
  for (int n = 1; n <= 3; ++n) {
    for (int r = 1; r <= 3; ++r) {
      const auto t = CurvatureTensor::from_matricization(random::hermitian(rng, n * r), n, r);
      // (n,1): the quadratic form of the commutator is the Nakano form itself
      const auto e1 = sorted_eigenvalues(curvature_commutator(t, 1));
      const auto m = sorted_eigenvalues(t.matricization());
      REQUIRE(e1.size() == m.size());
      CHECK((e1 - m).norm() < 1e-10);
      // (n,n): the trace over the form indices
      CMatrix tr = CMatrix::Zero(r, r);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < r; ++l)
          for (int mu = 0; mu < r; ++mu) tr(l, mu) += t(j, j, l, mu);
      const auto en = sorted_eigenvalues(curvature_commutator(t, n));
      CHECK((en - sorted_eigenvalues(tr)).norm() < 1e-10);
      CHECK_THROWS_AS(curvature_commutator(t, 0), mitk::InputError);
    }
  }
}

TEST_CASE("Nakano semipositivity transfers to the commutator") {
  random::Engine rng(23);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + it % 3;
    const int r = 1 + (it / 3) % 3;
    const auto t = random::nakano_semipositive(rng, n, r);
    CHECK(is_nakano_semipositive(t));
    for (int q = 1; q <= n; ++q) {
      const auto e = sorted_eigenvalues(curvature_commutator(t, q));
      CHECK(e(0) >= -1e-10 * t.scale());
    }
  }
}

TEST_CASE("rank one curvature") {
  random::Engine rng(29);
  const auto a = random::covector(rng, 3);
  const auto t = rank_one_curvature(a, 2);
  CHECK(t.is_hermitian());
  CHECK(is_nakano_semipositive(t));
  CHECK(std::abs(t(0, 1, 1, 1) - a.a[0] * std::conj(a.a[1])) < 1e-15);
  CHECK(std::abs(t(0, 1, 0, 1)) == 0.0);
}

TEST_CASE("Griffiths does not imply Nakano") {
  // c = delta delta - w w^*, w_{j lambda} = delta_{j lambda}: Griffiths by
  // Cauchy-Schwarz, Nakano fails on tau = identity.
  CMatrix m = CMatrix::Identity(4, 4);
  CVector w = CVector::Zero(4);
  w(0) = 1.0;  // (j, lambda) = (0, 0)
  w(3) = 1.0;  // (1, 1)
  m -= w * w.adjoint();
  const auto t = CurvatureTensor::from_matricization(m, 2, 2);
  CHECK(is_griffiths_semipositive_sampled(t, 2000, 5));
  CHECK_FALSE(is_nakano_semipositive(t));
  CHECK(nakano_min_eigenvalue(t) == doctest::Approx(-1.0));
}

TEST_CASE("contraction and adjoint identities") {
  random::Engine rng(31);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + it % 3;
    const int r = 1 + (it / 3) % 2;
    const auto a = random::covector(rng, n);
    const auto v = random::form(rng, n, r, n, 1);
    const auto s = dpsi_contraction_identity(a, v);
    CHECK(std::abs(s.lhs - s.rhs) <= kIdentityTol * std::max(1.0, std::abs(s.rhs)));

    const int p = it % (n + 1);
    const int q = (it / 2) % (n + 1);
    const auto u = random::form(rng, n, r, p, q);
    const auto f = adjoint_bracket_identity(a, u);
    CHECK((f.lhs.coeffs - f.rhs.coeffs).norm() <= kIdentityTol * std::max(1.0, f.lhs.coeffs.norm()));
  }
}

TEST_CASE("graded Jacobi") {
  random::Engine rng(37);
  for (int n = 1; n <= 3; ++n) {
    const ExteriorFiber f(n, 1);
    const auto deg = f.degrees();
    const auto a = random::covector(rng, n);
    const auto b = random::covector(rng, n);
    const GradedOperator L{2, lefschetz_matrix(f), deg};
    const GradedOperator Lam{-2, lambda_matrix(f), deg};
    const GradedOperator A{1, wedge10_matrix(f, a), deg};
    const GradedOperator B{1, wedge01_matrix(f, b), deg};
    const GradedOperator Bs{-1, wedge01_matrix(f, b).adjoint(), deg};
    for (const auto& [x, y, z] : {std::tuple{&L, &Lam, &A}, {&A, &B, &Lam}, {&A, &Bs, &L}, {&A, &A, &Bs}}) {
      x->validate(1e-14);
      CHECK(graded_jacobi_check(*x, *y, *z) <= kLinearAlgebraTol * graded_jacobi_scale(*x, *y, *z));
    }
    // odd operators anticommute: [A, A] = 2 A^2 = 0
    CHECK(graded_commutator(A, A).norm() < 1e-14);
    // a wrongly declared degree is rejected
    const GradedOperator wrong{1, lefschetz_matrix(f), deg};
    CHECK_THROWS_AS(wrong.validate(), mitk::PreconditionError);
  }
}

TEST_CASE("curvature tensor algebra") {
  random::Engine rng(41);
  const CMatrix h = random::hermitian(rng, 2);
  const auto t = CurvatureTensor::from_scalar(h, 3);
  CHECK(t.is_hermitian());
  CHECK(std::abs(t(1, 0, 2, 2) - h(1, 0)) < 1e-15);
  CHECK(std::abs(t(1, 0, 2, 1)) == 0.0);
  const auto sum = t + CurvatureTensor::identity_like(2, 3) * 2.0;
  CHECK(std::abs(sum(1, 1, 0, 0) - (h(1, 1) + 2.0)) < 1e-15);
  CHECK((CurvatureTensor::from_matricization(t.matricization(), 2, 3).matricization() - t.matricization()).norm() == 0.0);
  CHECK_FALSE(CurvatureTensor::from_matricization(random::gaussian_matrix(rng, 4, 4), 2, 2).is_hermitian());
  // q = 1 spectrum of a scalar curvature is that of h, each with multiplicity r
  const auto e = sorted_eigenvalues(curvature_commutator(t, 1));
  const auto eh = sorted_eigenvalues(h);
  CHECK(e(0) == doctest::Approx(eh(0)));
  CHECK(e(5) == doctest::Approx(eh(1)));
}

TEST_CASE("inverse quadratic form") {
  CMatrix b = CMatrix::Identity(2, 2) * 4.0;
  CVector v(2);
  v << 1.0, 1.0;
  const auto iq = inverse_quadratic_form(b, v);
  CHECK(iq.positiveDefinite);
  CHECK(iq.value == doctest::Approx(0.5));
  b(1, 1) = -1.0;
  CHECK_FALSE(inverse_quadratic_form(b, v).positiveDefinite);
}
