#pragma once

// Numerical verification of integrability, tube-limit measures and the
// singular integrals I_k.
//
// Conventions (fixed for the whole module and echoed in every report):
//   omega = i sum dz_j ^ dzbar_j,   dV = omega^n / n! = 2^n * Lebesgue,
//   |dz_j|^2 = 2, so |Lambda^r(d sigma)|^2 = (2 s^2)^r for sigma = s (z_1..z_r).
// All integrands here are torus invariant; angular integration is done
// analytically (d lambda(z_j) = pi d|z_j|^2) and the remaining radial integral
// is taken in log coordinates x_j = log|z_j|^2.

#include "mitk/rational.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mitk::oracle {

enum class QuadratureScheme { radialClosedForm, adaptive, monteCarlo };

struct QuadratureConfig {
  double relTol = 1e-6;
  std::uint64_t maxEvals = 1'000'000;
  std::uint64_t seed = 0x6a09e667f3bcc909ULL;
  QuadratureScheme scheme = QuadratureScheme::adaptive;
  bool parallel = true;

  void validate() const;
};

struct PolyTerm {
  std::complex<double> coeff{1.0, 0.0};
  std::vector<std::int64_t> beta;
};
using Polynomial = std::vector<PolyTerm>;

/// Sums coefficients of equal multi-indices and drops zero terms.
Polynomial canonicalize(const Polynomial& f);
Polynomial subtract(const Polynomial& f, const Polynomial& g);

enum class PsiKind { monomial, divisorialLinear };

struct TubeSpec {
  PsiKind kind = PsiKind::monomial;
  std::size_t dimension = 1;      // ambient n
  std::vector<Rational> alpha;    // monomial: psi = sum alpha_k log|z_k|^2
  int codim = 1;                  // divisorial: psi = r log|sigma|^2, sigma = s (z_1..z_r)
  double sigmaScale = 1.0;        // s
  Rational weight{1};             // m in e^{-m psi}
  Polynomial numerator;           // f in |f|^2; empty means f = 1
  double domainRadius = 0.5;      // polydisc |z_k| < R
  std::vector<double> innerRadius;  // test window |z_k| >= innerRadius[k]; empty = none

  static TubeSpec monomial(std::vector<Rational> alpha, Rational m,
                           std::vector<std::int64_t> beta = {}, double radius = 0.5);
  static TubeSpec divisorial(std::size_t n, int r, Rational m, double radius = 0.5,
                             double scale = 1.0);

  void validate() const;
};

struct MeasureEstimate {
  double value = 0.0;
  double stdError = 0.0;
  double t = 0.0;
  bool converged = false;
};

/// true iff beta_k + b_k + 1 > m alpha_k for every k (the borderline diverges).
bool monomial_integrability(const std::vector<Rational>& alpha,
                            const std::vector<std::int64_t>& beta, const Rational& m,
                            const std::vector<std::int64_t>& jacobian = {});

/// Integral of |f|^2 e^{-m psi} dV over {t < psi < t+1} inside the polydisc
/// and the test window.
MeasureEstimate tube_mass(const TubeSpec& spec, double t, const QuadratureConfig& cfg);

std::vector<double> default_t_sequence();

/// Limit of tube_mass along a strictly decreasing t-sequence; converged after
/// three consecutive agreements within relTol.
MeasureEstimate residual_measure_limit(const TubeSpec& spec, const std::vector<double>& tSequence,
                                       const QuadratureConfig& cfg,
                                       std::vector<MeasureEstimate>* trace = nullptr);

/// 2^{r+1} pi^r / (r-1)! / |Lambda^r(d sigma)|^2
double closed_form_density(int r, double gramDetJacobian);

/// |Lambda^r(d sigma)|^2 for sigma = s (z_1..z_r) under |dz_j|^2 = 2.
double divisorial_gram_det(int r, double scale);

/// Integral of the test window's indicator against dV_Y on Y = {z_1 = .. = z_r = 0}.
double divisor_window_volume(const TubeSpec& spec);

struct ExtensionComparison {
  double deviation = 0.0;  // |L1 - L2| / max(|L1|, |L2|)
  MeasureEstimate first;
  MeasureEstimate second;
  Rational jump;           // m_p
  std::size_t windowCoordinate = 0;
};

/// Compares the jet tube limits of two polynomial extensions whose difference
/// lies in I(m_p psi). Throws PreconditionError when it does not.
ExtensionComparison jet_density_extension_independence(const std::vector<Rational>& alpha,
                                                       std::size_t p, const Polynomial& f1,
                                                       const Polynomial& f2,
                                                       const QuadratureConfig& cfg,
                                                       double radius = 0.5);

/// I_k = int_{|w_j|<1/2} (-log|w_1|^2...|w_k|^2)^{-(k+1)} / (|w_1|^2...|w_k|^2) d lambda.
/// k = 1 by adaptive quadrature, k >= 2 by Monte Carlo (stdError reported).
MeasureEstimate singular_integral_Ik(int k, const QuadratureConfig& cfg);

struct LogIntegrability {
  bool integrable = false;
  bool analytic = false;     // closed-form exponent test
  bool stabilized = false;   // numeric tail test
  Rational previousJump;
  std::vector<double> cutoffs;    // T values: x_k >= log R^2 - T
  std::vector<double> estimates;  // integral with that cutoff
};

/// Local integrability of (1+|psi|)^{-(n+1)} |z^beta|^2 e^{-m psi} on |z_k| < R.
/// Precondition: z^beta lies in I(m_{p-1} psi), m_{p-1} the last jump below m.
LogIntegrability local_integrability_with_log_detail(const std::vector<Rational>& alpha,
                                                     const std::vector<std::int64_t>& beta,
                                                     const Rational& m, const QuadratureConfig& cfg,
                                                     double radius = 0.5);
bool local_integrability_with_log(const std::vector<Rational>& alpha,
                                  const std::vector<std::int64_t>& beta, const Rational& m,
                                  const QuadratureConfig& cfg);

}  // namespace mitk::oracle
