#pragma once

// The auxiliary one-variable functions of the twisted L^2 extension estimate
// (theta, beta, xi, chi_t, eta_t, lambda_t, gamma, psi_A) together with grid
// certificates of the inequalities they are built to satisfy, and the fiber
// level check that the twisted curvature R_t dominates the rank-one term.

#include "mitk/kahler_fiber.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace mitk::cutoff {

inline constexpr double kMarginTol = 1e-9;
inline constexpr double kBudgetConstant = 4.21;
inline constexpr double kDefaultEps = 0.002;

struct CutoffParams {
  double t = -5.0;
  double delta = 1.0;
  double eps = kDefaultEps;
  int grid = 2048;          // grid points per unit length
  double riseWidth = 0.0;   // s; 0 selects eps / 4

  double s() const { return riseWidth > 0.0 ? riseWidth : eps / 4.0; }
  /// Throws InputError naming the offending field.
  void validate() const;
};

/// exp(-x/2) for x >= 0, 1/(1+x^2) for x <= 0.
double gamma(double x);

struct ValueAndSlope {
  double value = 0.0;
  double slope = 0.0;
};

/// 0 on (-inf, -s], 1 on [0, inf), C-infinity and non-decreasing in between.
class Beta {
 public:
  explicit Beta(double s);
  double s() const { return s_; }
  double operator()(double tau) const;
  ValueAndSlope eval(double tau) const;

 private:
  double s_;
};

/// xi(tau) = beta(tau) beta(1 - tau)
class Xi {
 public:
  explicit Xi(double s) : beta_(s) {}
  double operator()(double tau) const { return beta_(tau) * beta_(1.0 - tau); }
  ValueAndSlope eval(double tau) const;
  const Beta& beta() const { return beta_; }

 private:
  Beta beta_;
};

/// Throws InputError unless 0 < s <= eps / 4.
Beta build_beta(double eps, double s);
Xi build_xi(double eps, double s);

struct PropertyRecord {
  std::string id;
  std::string description;
  bool pass = false;
  double worstMargin = 0.0;
  double worstLocation = 0.0;
  std::string details;
};

class CutoffCertificate {
 public:
  const CutoffParams& params() const { return params_; }

  /// Fine grid on [t-1, 0] (grid points plus midpoints).
  const std::vector<double>& tau() const { return tau_; }
  const std::vector<double>& chi_samples() const { return chi_; }
  const std::vector<double>& chi1_samples() const { return chi1_; }
  const std::vector<double>& chi2_samples() const { return chi2_; }
  double M() const { return -chi_.front(); }

  /// chi_t, chi_t', chi_t'' at any tau <= 0 (constant extension below t-1).
  double chi(double tau) const;
  double chi1(double tau) const;
  double chi2(double tau) const;

  const std::vector<PropertyRecord>& properties() const { return properties_; }
  const PropertyRecord& property(const std::string& id) const;
  bool all_pass() const;

 private:
  friend CutoffCertificate build_chi(const CutoffParams& params);
  std::size_t locate(double tau) const;
  double integrate_chi2(double a, double b) const;

  CutoffParams params_;
  Beta beta_{1.0};
  Xi xi_{1.0};
  std::vector<double> tau_;
  std::vector<double> chi_;
  std::vector<double> chi1_;
  std::vector<double> chi2_;
  std::vector<PropertyRecord> properties_;
};

/// Builds chi_t from its second derivative and certifies the boundary,
/// slope, support, plateau and convexity properties plus the R_t coefficient
/// bound, the eta + lambda budget and the 34 constant. Never throws on a
/// failed property; the record carries the verdict.
CutoffCertificate build_chi(const CutoffParams& params);

struct EtaLambda {
  double eta = 1.0;
  double lambda = 0.0;
};
/// Throws PreconditionError for psiVal > 0.
EtaLambda eta_lambda(double psiVal, const CutoffParams& params, const CutoffCertificate& chi);

struct BudgetOptimum {
  double argmax = 0.0;
  double value = 0.0;  // sup_{x >= 0} (1 + x/2 + pi (1 + x^2)) / (1 + x^2)
};
BudgetOptimum budget_optimum();
/// (sqrt 5 + 2) / 4 + pi
double budget_optimum_closed_form();

/// Worst value of 4.21 - (eta + lambda) / (1 + delta^2 psi^2) on the grid.
PropertyRecord verify_budget(const CutoffParams& params, const CutoffCertificate& chi);

/// 4.21 * 8 * (1+eps)^2 / (1-eps) < 34
bool check_34(double eps);
double constant_34_value(double eps);

/// Non-increasing, 1 on (-inf, eps/3], 0 on [1 - eps/3, inf), |theta'| <= 1 + eps.
ValueAndSlope theta_cutoff(double tau, double eps);

struct PsiA {
  double psiA = 0.0;
  double psiPlusA = 0.0;
};
/// psi+_A = log(1 + e^{A psi}) / A, psi_A = psi - psi+_A; overflow safe.
PsiA psi_A(double psiVal, double A);

struct CurvatureSample {
  fiber::CurvatureTensor theta;
  fiber::CurvatureTensor ddpsi;
  fiber::Covector10 dpsi;
  double psi = 0.0;
};

/// Random samples with theta + a ddpsi Nakano semipositive for a in [1, 1+delta]:
/// theta = N0 - ddpsi, N0 Nakano semipositive with N0 >= delta max(0, -lambda_min(ddpsi)).
/// psi values alternate between the tube (t, t+1) and all of [t-1, 0];
/// every tenth sample has dpsi = 0.
std::vector<CurvatureSample> random_curvature_samples(const CutoffParams& params, int n, int r,
                                                      int count, std::uint64_t seed);

struct RtChainReport {
  int samples = 0;
  int hypothesisFailures = 0;    // samples violating the endpoint hypothesis
  int coefficientFailures = 0;   // delta chi'' - delta^2 chi'^2 / lambda >= delta chi'' / 2
  int dominationFailures = 0;    // R_t - (delta chi''/2) rank-one is Nakano semipositive
  int tubeSamples = 0;
  int tubeFailures = 0;          // R_t - ((1-eps) delta / 8) rank-one on the tube
  int quotientChecks = 0;
  int quotientFailures = 0;      // <B^{-1} v, v> <= 8 (1+eps)^2 / ((1-eps) delta) |u|^2
  int skippedSingular = 0;
  double worstCoefficientMargin = 0.0;
  double worstTubeEigenvalue = 0.0;     // scaled by the tensor scale
  double worstQuotientRatio = 0.0;      // <B^{-1} v, v> / (bound |u|^2)
  bool pass() const;
};

RtChainReport verify_Rt_chain(const CutoffParams& params, const CutoffCertificate& chi,
                              const std::vector<CurvatureSample>& samples,
                              std::uint64_t seed, int formTrials = 4);

struct SharpnessProbe {
  int samples = 0;
  int failures = 0;          // samples where the doubled constant is violated
  double worstEigenvalue = 0.0;
  double worstPsi = 0.0;
};
/// Replaces (1-eps) delta / 8 by `constant` and searches the low end of the
/// tube, where chi'' is smallest, with theta = ddpsi = 0.
SharpnessProbe rt_sharpness_probe(const CutoffParams& params, const CutoffCertificate& chi,
                                  double constant, int n, int r, int count, std::uint64_t seed);

}  // namespace mitk::cutoff
