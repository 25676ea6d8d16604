#include "mitk/snc_ideals.hpp"

#include "mitk/errors.hpp"

#include <algorithm>
#include <set>

namespace mitk {

void normalize_intersections(SncModel& model) {
  for (auto& [i, j] : model.intersections) {
    if (i > j) std::swap(i, j);
  }
  std::sort(model.intersections.begin(), model.intersections.end());
  model.intersections.erase(std::unique(model.intersections.begin(), model.intersections.end()),
                            model.intersections.end());
  model.validate();
}

void SncModel::validate() const {
  if (c <= 0) {
    throw InputError("c: pole coefficient must be positive, got " + to_string(c));
  }
  if (components.empty()) {
    throw InputError("components: at least one divisor component is required");
  }
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& d = components[k];
    const std::string where = "components[" + std::to_string(k + 1) + "]";
    if (d.a < 1) {
      throw InputError(where + ".a: must be an integer >= 1, got " + std::to_string(d.a));
    }
    if (d.b < 0) {
      throw InputError(where + ".b: must be an integer >= 0, got " + std::to_string(d.b));
    }
  }
  for (const auto& [i, j] : intersections) {
    if (i >= components.size() || j >= components.size() || i == j) {
      throw InputError("intersections: pair (" + std::to_string(i + 1) + "," +
                       std::to_string(j + 1) + ") must reference two distinct components");
    }
  }
}

bool SncModel::intersects(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(intersections.begin(), intersections.end(), IndexPair{i, j});
}

bool IdealCoeffVector::dominates(const IdealCoeffVector& other) const {
  if (coeffs.size() != other.coeffs.size()) return false;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] < other.coeffs[k]) return false;
  }
  return true;
}

void MonomialModel::validate() const {
  if (alpha.empty()) {
    throw InputError("alpha: at least one coordinate is required");
  }
  bool any_positive = false;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] < 0) {
      throw InputError("alpha[" + std::to_string(k + 1) + "]: must be >= 0, got " +
                       to_string(alpha[k]));
    }
    any_positive = any_positive || alpha[k] > 0;
  }
  if (!any_positive) {
    throw InputError("alpha: at least one exponent must be positive");
  }
}

IdealCoeffVector multiplier_coeffs(const SncModel& model, const Rational& m) {
  if (m < 0) {
    throw PreconditionError("multiplier_coeffs: m must be >= 0, got " + to_string(m));
  }
  IdealCoeffVector out;
  out.coeffs.reserve(model.size());
  for (const auto& d : model.components) {
    out.coeffs.push_back(floor_plus(m * model.c * d.a - d.b));
  }
  return out;
}

JumpingSpectrum jumping_spectrum(const SncModel& model, const Rational& cap) {
  if (cap <= 0) {
    throw PreconditionError("jumping_spectrum: cap must be positive, got " + to_string(cap));
  }
  std::set<Rational> candidates;
  for (const auto& d : model.components) {
    const Rational step = 1 / (model.c * d.a);
    Rational m = (d.b + 1) * step;
    while (m <= cap) {
      candidates.insert(m);
      m += step;
    }
  }

  JumpingSpectrum spectrum{{}, cap};
  Rational previous{0};
  for (const auto& m : candidates) {
    const Rational below = (previous + m) / 2;
    if (multiplier_coeffs(model, m) != multiplier_coeffs(model, below)) {
      spectrum.values.push_back(m);
    }
    previous = m;
  }
  return spectrum;
}

Rational lct(const SncModel& model) {
  Rational best = Rational(model.components.front().b + 1) / (model.c * model.components.front().a);
  for (const auto& d : model.components) {
    best = std::min(best, Rational(d.b + 1) / (model.c * d.a));
  }
  return best;
}

RestrictedIdealData restricted_multiplier_ideal(const SncModel& model, std::size_t p,
                                                const Rational& cap) {
  if (p == 0) {
    throw PreconditionError("restricted_multiplier_ideal: p must be >= 1");
  }
  const JumpingSpectrum spectrum = jumping_spectrum(model, cap);
  if (spectrum.values.size() < p) {
    throw PreconditionError("restricted_multiplier_ideal: only " +
                            std::to_string(spectrum.values.size()) + " jumps <= cap " +
                            to_string(cap) + ", need p = " + std::to_string(p));
  }
  RestrictedIdealData out;
  out.jumpIndex = p;
  out.jump = spectrum.values[p - 1];
  out.previousJump = p >= 2 ? spectrum.values[p - 2] : Rational(0);
  out.base = multiplier_coeffs(model, out.previousJump);

  std::vector<std::size_t> achievers;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const Rational v = out.jump * model.c * model.components[k].a - model.components[k].b;
    if (v > 0 && is_integer(v)) achievers.push_back(k);
  }
  for (std::size_t x = 0; x < achievers.size(); ++x) {
    for (std::size_t y = x + 1; y < achievers.size(); ++y) {
      if (model.intersects(achievers[x], achievers[y])) {
        out.pairs.emplace_back(achievers[x], achievers[y]);
      }
    }
  }
  return out;
}

InclusionChain inclusion_chain(const SncModel& model, std::size_t p, const Rational& cap) {
  const RestrictedIdealData restricted = restricted_multiplier_ideal(model, p, cap);
  const IdealCoeffVector at_jump = multiplier_coeffs(model, restricted.jump);
  const IdealCoeffVector before = multiplier_coeffs(model, restricted.previousJump);

  // I'(m_{p-1}) = O(-base) (x) I_R sits inside O(-base) = I(m_{p-1}).
  if (restricted.base != before) {
    throw InternalError("inclusion_chain: restricted base differs from I(m_{p-1} psi)");
  }
  // I(m_p) inside O(-base) (x) I_R: s(m_p) >= base, and both members of every
  // pair gain at least one order so that w_l w_l' divides.
  if (!at_jump.dominates(restricted.base)) {
    throw InternalError("inclusion_chain: I(m_p psi) not contained in I'(m_{p-1} psi)");
  }
  for (const auto& [i, j] : restricted.pairs) {
    if (at_jump.coeffs[i] < restricted.base.coeffs[i] + 1 ||
        at_jump.coeffs[j] < restricted.base.coeffs[j] + 1) {
      throw InternalError("inclusion_chain: pair member does not jump at m_p");
    }
  }

  InclusionChain chain;
  chain.strictRight = !restricted.pairs.empty();
  // With R non-empty, I_R has codimension-2 cosupport and can never equal an
  // invertible ideal, so the left inclusion is strict as well.
  chain.strictLeft = chain.strictRight || at_jump != restricted.base;
  return chain;
}

bool monomial_membership(const MonomialModel& model, const std::vector<std::int64_t>& beta,
                         const Rational& m) {
  model.validate();
  if (beta.size() != model.alpha.size()) {
    throw PreconditionError("monomial_membership: beta has " + std::to_string(beta.size()) +
                            " entries, alpha has " + std::to_string(model.alpha.size()));
  }
  if (m < 0) {
    throw PreconditionError("monomial_membership: m must be >= 0");
  }
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (beta[k] < 0) {
      throw PreconditionError("monomial_membership: beta entries must be >= 0");
    }
    if (!(Rational(beta[k] + 1) > m * model.alpha[k])) return false;
  }
  return true;
}

MonomialSnc to_snc_model(const MonomialModel& model) {
  model.validate();
  BigInt common = 1;
  for (const auto& a : model.alpha) {
    const BigInt d = boost::multiprecision::denominator(a);
    common = common / boost::multiprecision::gcd(common, d) * d;
  }
  MonomialSnc out;
  out.model.c = Rational(BigInt(1), common);
  for (std::size_t k = 0; k < model.alpha.size(); ++k) {
    if (model.alpha[k] == 0) continue;
    const Rational scaled = model.alpha[k] * common;
    out.model.components.push_back(
        {"z" + std::to_string(k + 1), boost::multiprecision::numerator(scaled).convert_to<std::int64_t>(), 0});
    out.coordinateOf.push_back(k);
  }
  // Coordinate hyperplanes of a monomial weight all meet at the origin.
  for (std::size_t i = 0; i < out.model.size(); ++i) {
    for (std::size_t j = i + 1; j < out.model.size(); ++j) {
      out.model.intersections.emplace_back(i, j);
    }
  }
  return out;
}

bool membership_by_floors(const MonomialModel& model, const std::vector<std::int64_t>& beta,
                          const Rational& m) {
  if (beta.size() != model.alpha.size()) {
    throw PreconditionError("membership_by_floors: beta and alpha differ in length");
  }
  const MonomialSnc snc = to_snc_model(model);
  const IdealCoeffVector s = multiplier_coeffs(snc.model, m);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (BigInt(beta[snc.coordinateOf[i]]) < s.coeffs[i]) return false;
  }
  return true;
}

}  // namespace mitk
