#pragma once

// Multiplier ideals of a weight psi = c log sum |g_k|^2 read off a log
// resolution with simple normal crossings. Everything is computed upstairs:
// an ideal is the coefficient vector s of O(-sum s_k Delta_k), possibly
// tensored with the ideal of a union of pairwise intersections.

#include "mitk/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mitk {

using IndexPair = std::pair<std::size_t, std::size_t>;

struct DivisorComponent {
  std::string name;
  std::int64_t a = 1;  // order of the pulled-back ideal along the divisor
  std::int64_t b = 0;  // order of the Jacobian along the divisor
};

struct SncModel {
  Rational c{1};
  std::vector<DivisorComponent> components;
  // 0-based, normalized so that first < second, sorted, unique.
  std::vector<IndexPair> intersections;

  /// Throws InputError naming the offending field.
  void validate() const;
  bool intersects(std::size_t i, std::size_t j) const;
  std::size_t size() const { return components.size(); }
};

/// Normalizes and validates the pair list in place.
void normalize_intersections(SncModel& model);

struct IdealCoeffVector {
  std::vector<BigInt> coeffs;

  bool operator==(const IdealCoeffVector&) const = default;
  /// Componentwise >=, i.e. the ideal of *this is contained in that of other.
  bool dominates(const IdealCoeffVector& other) const;
};

struct JumpingSpectrum {
  std::vector<Rational> values;  // strictly increasing, each <= cap; m_0 = 0 implicit
  Rational cap;
};

struct RestrictedIdealData {
  IdealCoeffVector base;         // coefficients at m_{p-1}
  std::vector<IndexPair> pairs;  // scheme R as pairwise intersections
  std::size_t jumpIndex = 0;     // p
  Rational previousJump;         // m_{p-1}
  Rational jump;                 // m_p
};

struct InclusionChain {
  bool strictLeft = false;   // I(m_p psi) strictly inside I'(m_{p-1} psi)
  bool strictRight = false;  // I'(m_{p-1} psi) strictly inside I(m_{p-1} psi)
};

/// psi = sum alpha_k log|z_k|^2 near the origin.
struct MonomialModel {
  std::vector<Rational> alpha;

  void validate() const;
};

IdealCoeffVector multiplier_coeffs(const SncModel& model, const Rational& m);

/// All candidates (b_k+N)/(c a_k) <= cap, N >= 1, at which the coefficient
/// vector actually changes, sorted ascending.
JumpingSpectrum jumping_spectrum(const SncModel& model, const Rational& cap);

/// min_k (b_k+1)/(c a_k)
Rational lct(const SncModel& model);

/// Throws PreconditionError when fewer than p jumps lie below cap.
RestrictedIdealData restricted_multiplier_ideal(const SncModel& model, std::size_t p,
                                                const Rational& cap);

/// Asserts both inclusions (InternalError otherwise) and reports strictness.
InclusionChain inclusion_chain(const SncModel& model, std::size_t p, const Rational& cap);

/// z^beta in I(m psi) iff beta_k + 1 > m alpha_k for every k.
bool monomial_membership(const MonomialModel& model, const std::vector<std::int64_t>& beta,
                         const Rational& m);

/// The SNC model of a monomial weight on the identity resolution: one divisor
/// per coordinate with alpha_k > 0, a_k = alpha_k L, c = 1/L with L the common
/// denominator, b_k = 0. `coordinateOf[i]` maps component i back to its axis.
struct MonomialSnc {
  SncModel model;
  std::vector<std::size_t> coordinateOf;
};
MonomialSnc to_snc_model(const MonomialModel& model);

/// Membership read off the direct-image floors: z^beta lies in I(m psi) iff
/// beta_k >= floor(m c a_k)_+ on every component of to_snc_model.
bool membership_by_floors(const MonomialModel& model, const std::vector<std::int64_t>& beta,
                          const Rational& m);

}  // namespace mitk
