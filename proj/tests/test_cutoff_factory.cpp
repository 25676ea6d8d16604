#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mitk/cutoff_factory.hpp"
#include "mitk/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace mitk::cutoff;
using std::numbers::pi;

namespace {

CutoffParams params(double delta, double eps, double t) {
  CutoffParams p;
  p.delta = delta;
  p.eps = eps;
  p.t = t;
  return p;
}

// chi'' written out directly, integrated with Gauss-Kronrod.
double chi2_direct(const CutoffParams& p, double tau) {
  if (tau < p.t - 1.0 || tau > 0.0) return 0.0;
  const Beta beta(p.s());
  const double xi = beta(tau - p.t) * beta(1.0 - (tau - p.t));
  return p.delta / (2 * pi * (1 + p.delta * p.delta * tau * tau)) * beta(tau - p.t) + (1 - p.eps) / 4 * xi;
}

}  // namespace

TEST_CASE("gamma") {
  CHECK(mitk::cutoff::gamma(0.0) == 1.0);
  CHECK(mitk::cutoff::gamma(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(mitk::cutoff::gamma(-1.0) == doctest::Approx(0.5));
}

TEST_CASE("beta and xi") {
  const auto b = build_beta(0.002, 0.0005);
  CHECK(b(-0.0005) == 0.0);
  CHECK(b(-1.0) == 0.0);
  CHECK(b(0.0) == 1.0);
  CHECK(b(3.0) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = -0.0005 + 0.0005 * i / 1000.0;
    const auto e = b.eval(x);
    CHECK(e.value >= prev);
    CHECK(e.slope >= 0.0);
    prev = e.value;
  }
  const double x = -0.0002, h = 1e-9;
  CHECK(b.eval(x).slope == doctest::Approx((b(x + h) - b(x - h)) / (2 * h)).epsilon(1e-5));
  CHECK_THROWS_AS(build_beta(0.002, 0.001), mitk::InputError);

  const auto xi = build_xi(0.002, 0.0005);
  CHECK(xi(-1.0) == 0.0);
  CHECK(xi(2.0) == 0.0);
  CHECK(xi(0.5) == 1.0);
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return xi(t); }, -1.0, 2.0, 15, 1e-12);
  CHECK(integral < 1.002);
  CHECK(integral > 1.0);
}

TEST_CASE("chi certificate on the full matrix") {
  for (double delta : {0.1, 0.5, 1.0})
    for (double eps : {0.002, 0.005})
      for (double t : {-5.0, -20.0}) {
        const auto c = build_chi(params(delta, eps, t));
        for (const auto& rec : c.properties()) {
          if (rec.id == "constant_34") continue;
          INFO(rec.id << " delta=" << delta << " eps=" << eps << " t=" << t << " " << rec.details);
          CHECK(rec.pass);
        }
        CHECK(c.property("constant_34").pass == check_34(eps));
      }
}

TEST_CASE("chi matches an independent integration of chi''") {
  const auto p = params(0.5, 0.002, -5.0);
  const auto c = build_chi(p);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto chi1 = [&](double tau) {
    // integrate piecewise to respect the narrow rise of beta
    double s = GK::integrate([&](double x) { return chi2_direct(p, x); }, p.t - 1.0, std::min(tau, p.t - p.s()), 15, 1e-13);
    if (tau > p.t - p.s())
      s += GK::integrate([&](double x) { return chi2_direct(p, x); }, p.t - p.s(), std::min(tau, p.t), 15, 1e-13);
    if (tau > p.t) s += GK::integrate([&](double x) { return chi2_direct(p, x); }, p.t, tau, 15, 1e-13);
    return s;
  };
  for (double tau : {-5.5, -4.9, -4.2, -3.0, -1.0, -0.1, 0.0}) {
    CHECK(c.chi2(tau) == doctest::Approx(chi2_direct(p, tau)).epsilon(1e-10));
    CHECK(c.chi1(tau) == doctest::Approx(chi1(tau)).epsilon(1e-7));
  }
  // chi(a) = a chi'(a) + int_a^0 tau chi''(tau) dtau, integrating -int_a^0 chi' by parts
  const double chiAt = -3.0 * chi1(-3.0) +
                       GK::integrate([&](double x) { return x * chi2_direct(p, x); }, -3.0, 0.0, 15, 1e-13);
  CHECK(c.chi(-3.0) == doctest::Approx(chiAt).epsilon(1e-6));
  CHECK(c.chi(0.0) == 0.0);
  CHECK(c.M() > 0.0);
  CHECK(c.chi1(0.0) <= 0.5);
  CHECK(c.chi(-100.0) == doctest::Approx(-c.M()));
}

TEST_CASE("eta and lambda") {
  const auto p = params(1.0, 0.002, -5.0);
  const auto c = build_chi(p);
  const auto e0 = eta_lambda(0.0, p, c);
  CHECK(e0.eta == 1.0);
  CHECK(e0.lambda == doctest::Approx(pi));
  for (double psi = -8.0; psi <= 0.0; psi += 0.01) {
    const auto e = eta_lambda(psi, p, c);
    CHECK(e.eta >= 1.0);
    CHECK(e.eta <= 1.0 + p.delta * c.M() + 1e-12);
    CHECK(e.eta <= 1.0 - p.delta * psi / 2 + 1e-12);
  }
  CHECK_THROWS_AS(eta_lambda(0.1, p, c), mitk::PreconditionError);
}

TEST_CASE("budget") {
  const auto opt = budget_optimum();
  CHECK(opt.value == doctest::Approx((std::sqrt(5.0) + 2) / 4 + pi).epsilon(1e-9));
  CHECK(budget_optimum_closed_form() < kBudgetConstant);
  // dense scan of the quotient
  double best = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double x = i * 1e-4;
    best = std::max(best, (1 + x / 2 + pi * (1 + x * x)) / (1 + x * x));
  }
  CHECK(opt.value == doctest::Approx(best).epsilon(1e-8));
  CHECK(1 + pi < kBudgetConstant);
  for (double delta : {0.1, 0.5, 1.0}) {
    const auto p = params(delta, 0.002, -20.0);
    CHECK(verify_budget(p, build_chi(p)).pass);
  }
}

TEST_CASE("constant 34") {
  CHECK(check_34(0.002));
  CHECK_FALSE(check_34(0.005));
  CHECK_FALSE(check_34(0.01));
  CHECK(constant_34_value(0.002) == doctest::Approx(4.21 * 8 * 1.002 * 1.002 / 0.998));
  CHECK(constant_34_value(1e-12) < 34.0);
}

TEST_CASE("theta cutoff") {
  for (double eps : {0.002, 0.005, 0.01}) {
    CHECK(theta_cutoff(-2.0, eps).value == 1.0);
    CHECK(theta_cutoff(eps / 3, eps).value == 1.0);
    CHECK(theta_cutoff(1.0 - eps / 3, eps).value == 0.0);
    CHECK(theta_cutoff(2.0, eps).value == 0.0);
    double prev = 1.0;
    for (int i = 0; i <= 20000; ++i) {
      const auto th = theta_cutoff(i / 20000.0, eps);
      CHECK(th.value <= prev);
      CHECK(std::abs(th.slope) <= 1.0 + eps);
      prev = th.value;
    }
  }
}

TEST_CASE("psi_A") {
  for (double A : {1.0, 10.0, 1000.0}) {
    for (double psi : {-50.0, -1.0, 0.0, 0.3, 5.0, 800.0}) {
      const auto v = psi_A(psi, A);
      CHECK(std::isfinite(v.psiA));
      CHECK(v.psiA <= 0.0);
      CHECK(v.psiPlusA >= std::max(psi, 0.0));
      // strict only while exp(-|A psi|) is representable (psi_A) or above one ulp of psi (psi+)
      if (std::abs(A * psi) < 700.0) CHECK(v.psiA < 0.0);
      if (std::abs(A * psi) < 30.0) CHECK(v.psiPlusA > std::max(psi, 0.0));
      CHECK(v.psiPlusA <= std::max(psi, 0.0) + std::log(2.0) / A + 1e-15);
    }
  }
  CHECK(psi_A(0.0, 1.0).psiPlusA == doctest::Approx(std::log(2.0)));
  CHECK(psi_A(-1.0, 1000.0).psiA == doctest::Approx(-1.0));
  // no cancellation: psi_A = -log(1 + e^{-50}) / 10
  CHECK(psi_A(5.0, 10.0).psiA == doctest::Approx(-std::exp(-50.0) / 10.0).epsilon(1e-12));
}

TEST_CASE("R_t chain") {
  const auto p = params(1.0, 0.002, -5.0);
  const auto c = build_chi(p);
  for (int r = 1; r <= 2; ++r) {
    const auto samples = random_curvature_samples(p, 2, r, 30, 77 + r);
    const auto rep = verify_Rt_chain(p, c, samples, 5);
    CHECK(rep.samples == 30);
    CHECK(rep.hypothesisFailures == 0);
    CHECK(rep.coefficientFailures == 0);
    CHECK(rep.dominationFailures == 0);
    CHECK(rep.tubeFailures == 0);
    CHECK(rep.quotientFailures == 0);
    CHECK(rep.tubeSamples > 0);
    CHECK(rep.quotientChecks > 0);
    CHECK(rep.pass());
  }
}

TEST_CASE("doubling the tube constant breaks domination") {
  const auto p = params(1.0, 0.002, -20.0);
  const auto c = build_chi(p);
  const auto probe = rt_sharpness_probe(p, c, (1 + p.eps) * p.delta / 4, 2, 1, 50, 9);
  CHECK(probe.failures > 0);
  const auto ok = rt_sharpness_probe(p, c, (1 - p.eps) * p.delta / 8, 2, 1, 50, 9);
  CHECK(ok.failures == 0);
}

TEST_CASE("parameter validation") {
  auto p = params(1.0, 0.002, -5.0);
  p.delta = 0.0;
  CHECK_THROWS_AS(p.validate(), mitk::InputError);
  p = params(1.0, 0.6, -5.0);
  CHECK_THROWS_AS(p.validate(), mitk::InputError);
  p = params(1.0, 0.002, 1.0);
  CHECK_THROWS_AS(p.validate(), mitk::InputError);
}
