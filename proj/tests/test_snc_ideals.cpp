#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mitk/errors.hpp"
#include "mitk/snc_ideals.hpp"

#include <random>

using mitk::BigInt;
using mitk::Rational;
using mitk::SncModel;

namespace {

SncModel model(Rational c, std::vector<std::pair<int, int>> ab, std::vector<mitk::IndexPair> pairs = {}) {
  SncModel m;
  m.c = c;
  int i = 1;
  for (auto [a, b] : ab) m.components.push_back({"D" + std::to_string(i++), a, b});
  m.intersections = pairs;
  mitk::normalize_intersections(m);
  return m;
}

std::vector<long> coeffs(const mitk::IdealCoeffVector& v) {
  std::vector<long> out;
  for (const auto& c : v.coeffs) out.push_back(c.convert_to<long>());
  return out;
}

// Brute force: every jump is a multiple of 1/Q with Q = lcm(num(c) a_k); scan.
std::vector<Rational> scan_jumps(const SncModel& m, const Rational& cap) {
  BigInt q = 1;
  for (const auto& c : m.components) {
    const BigInt d = boost::multiprecision::numerator(m.c) * c.a;
    q = q / boost::multiprecision::gcd(q, d) * d;
  }
  std::vector<Rational> out;
  for (BigInt j = 1; Rational(j, q) <= cap; ++j) {
    const Rational x(j, q);
    if (!(mitk::multiplier_coeffs(m, x) == mitk::multiplier_coeffs(m, x - Rational(1, 2 * q)))) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("multiplier coefficients") {
  const auto crossing = model(1, {{1, 0}, {1, 0}});
  for (int p = 1; p <= 5; ++p) CHECK(coeffs(mitk::multiplier_coeffs(crossing, p)) == std::vector<long>{p, p});
  CHECK(coeffs(mitk::multiplier_coeffs(model(3, {{2, 5}, {7, 0}}), 0)) == std::vector<long>{0, 0});
  CHECK(coeffs(mitk::multiplier_coeffs(model(1, {{2, 1}, {3, 0}}), Rational(1, 2))) == std::vector<long>{0, 1});
  CHECK_THROWS_AS(mitk::multiplier_coeffs(crossing, -1), mitk::PreconditionError);
}

TEST_CASE("jumping spectrum examples") {
  auto values = [](const mitk::JumpingSpectrum& s) { return s.values; };
  CHECK(values(mitk::jumping_spectrum(model(1, {{1, 0}, {1, 0}}), 3)) == std::vector<Rational>{1, 2, 3});
  CHECK(values(mitk::jumping_spectrum(model(1, {{1, 0}}), 2)) == std::vector<Rational>{1, 2});
  CHECK(values(mitk::jumping_spectrum(model(1, {{2, 0}, {3, 0}}), 1)) ==
        std::vector<Rational>{Rational(1, 3), Rational(1, 2), Rational(2, 3), 1});
  CHECK(mitk::jumping_spectrum(model(1, {{1, 0}}), Rational(1, 2)).values.empty());
}

TEST_CASE("lct") {
  CHECK(mitk::lct(model(1, {{1, 0}, {1, 0}})) == 1);
  CHECK(mitk::lct(model(1, {{1, 0}})) == 1);
  const auto m = model(2, {{3, 2}, {5, 0}});
  CHECK(mitk::lct(m) == Rational(1, 10));
  CHECK(mitk::jumping_spectrum(m, 1).values.front() == Rational(1, 10));
}

TEST_CASE("restricted ideal and inclusion chain") {
  const auto crossing = model(1, {{1, 0}, {1, 0}}, {{0, 1}});
  auto r = mitk::restricted_multiplier_ideal(crossing, 1, 3);
  CHECK(coeffs(r.base) == std::vector<long>{0, 0});
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0] == mitk::IndexPair{0, 1});
  auto chain = mitk::inclusion_chain(crossing, 1, 3);
  CHECK(chain.strictLeft);
  CHECK(chain.strictRight);

  const auto disjoint = model(1, {{1, 0}, {1, 0}});
  r = mitk::restricted_multiplier_ideal(disjoint, 1, 3);
  CHECK(r.pairs.empty());
  chain = mitk::inclusion_chain(disjoint, 1, 3);
  CHECK(chain.strictLeft);
  CHECK_FALSE(chain.strictRight);

  const auto uneven = model(1, {{1, 0}, {2, 0}}, {{0, 1}});
  r = mitk::restricted_multiplier_ideal(uneven, 1, 3);
  CHECK(r.jump == Rational(1, 2));
  CHECK(coeffs(r.base) == std::vector<long>{0, 0});
  CHECK(r.pairs.empty());
  chain = mitk::inclusion_chain(uneven, 1, 3);
  CHECK(chain.strictLeft);
  CHECK_FALSE(chain.strictRight);

  CHECK_THROWS_AS(mitk::restricted_multiplier_ideal(crossing, 4, 3), mitk::PreconditionError);
  // both components jump at m = 2, and base is taken at m_1 = 1
  r = mitk::restricted_multiplier_ideal(crossing, 2, 3);
  CHECK(coeffs(r.base) == std::vector<long>{1, 1});
  CHECK(r.pairs.size() == 1);
}

TEST_CASE("monomial membership") {
  mitk::MonomialModel m{{1, 1}};
  CHECK_FALSE(mitk::monomial_membership(m, {0, 0}, 1));
  CHECK(mitk::monomial_membership(m, {0, 0}, 0));
  CHECK(mitk::monomial_membership(mitk::MonomialModel{{2, 3}}, {1, 2}, Rational(5, 6)));
  CHECK_THROWS_AS(mitk::monomial_membership(m, {0}, 1), mitk::PreconditionError);
  // exact boundary beta + 1 = m alpha is excluded
  CHECK_FALSE(mitk::monomial_membership(mitk::MonomialModel{{Rational(3, 2)}}, {2}, 2));
}

TEST_CASE("model validation names the field") {
  SncModel bad = model(1, {{1, 0}});
  bad.components[0].a = 0;
  try {
    bad.validate();
    FAIL("expected an error");
  } catch (const mitk::InputError& e) {
    CHECK(std::string(e.what()).find("components[1].a") != std::string::npos);
  }
  SncModel empty;
  CHECK_THROWS_AS(empty.validate(), mitk::InputError);
  SncModel selfPair = model(1, {{1, 0}, {1, 0}});
  selfPair.intersections = {{1, 1}};
  CHECK_THROWS_AS(mitk::normalize_intersections(selfPair), mitk::InputError);
  SncModel negC = model(1, {{1, 0}});
  negC.c = -1;
  CHECK_THROWS_AS(negC.validate(), mitk::InputError);
}

TEST_CASE("properties on random models") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> count(1, 4), aDist(1, 6), bDist(0, 4), cNum(1, 5), cDen(1, 4);
  for (int it = 0; it < 60; ++it) {
    std::vector<std::pair<int, int>> ab;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) ab.emplace_back(aDist(rng), bDist(rng));
    const SncModel m = model(Rational(cNum(rng), cDen(rng)), ab);
    const Rational cap = 3;
    const auto spec = mitk::jumping_spectrum(m, cap);

    // brute-force scan agrees
    CHECK(spec.values == scan_jumps(m, cap));
    // candidate soundness
    for (const auto& v : spec.values) {
      bool found = false;
      for (const auto& c : m.components) {
        const Rational n = v * m.c * c.a - c.b;
        found = found || (mitk::is_integer(n) && n >= 1);
      }
      CHECK(found);
    }
    // lct is the first jump
    if (spec.values.empty()) {
      CHECK(mitk::lct(m) > cap);
      continue;
    }
    CHECK(spec.values.front() == mitk::lct(m));
    // monotonicity and right-continuity
    Rational prev = 0;
    for (const auto& v : spec.values) {
      const auto lo = mitk::multiplier_coeffs(m, prev);
      const auto mid = mitk::multiplier_coeffs(m, (prev + v) / 2);
      const auto at = mitk::multiplier_coeffs(m, v);
      CHECK(lo == mid);
      CHECK(at.dominates(mid));
      CHECK_FALSE(at == mid);
      prev = v;
    }
    // scaling (c, m) -> (c / s, m s)
    SncModel scaled = m;
    scaled.c = m.c / 3;
    CHECK(mitk::multiplier_coeffs(scaled, Rational(7, 5) * 3) == mitk::multiplier_coeffs(m, Rational(7, 5)));
    // sandwich for each jump
    for (std::size_t p = 1; p <= spec.values.size(); ++p) {
      const auto r = mitk::restricted_multiplier_ideal(m, p, cap);
      CHECK(mitk::multiplier_coeffs(m, r.jump).dominates(r.base));
      CHECK_NOTHROW(mitk::inclusion_chain(m, p, cap));
    }
  }
}

TEST_CASE("floors agree with the closed-form membership on monomials") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(0, 5), den(1, 3), beta(0, 6), mNum(0, 30), mDen(1, 6);
  for (int it = 0; it < 300; ++it) {
    mitk::MonomialModel mm;
    do {
      mm.alpha = {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
    } while (mm.alpha[0] == 0 && mm.alpha[1] == 0);
    const std::vector<std::int64_t> b{beta(rng), beta(rng)};
    const Rational m(mNum(rng), mDen(rng));
    CHECK(mitk::membership_by_floors(mm, b, m) == mitk::monomial_membership(mm, b, m));
  }
}
