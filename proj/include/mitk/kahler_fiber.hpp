#pragma once

// Pointwise Hermitian multilinear algebra for bundle-valued (p,q)-forms:
// the Lefschetz pair, curvature operators, Nakano and Griffiths positivity,
// and the bracket identities used by the twisted a priori estimate.
//
// Tolerances are relative: scale = max(1, infinity norms of the inputs);
// 1e-12 for pure linear algebra, 1e-10 for the analytic identities.

#include "mitk/exterior_fiber.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace mitk::fiber {

inline constexpr double kLinearAlgebraTol = 1e-12;
inline constexpr double kIdentityTol = 1e-10;

/// A bundle-valued form of bidegree (p,q) at one point. Coefficients live in
/// the full exterior space of ExteriorFiber(n, r); entries outside bidegree
/// (p,q) are zero.
struct FiberForm {
  int n = 1;
  int r = 1;
  int p = 0;
  int q = 0;
  CVector coeffs;

  static FiberForm zero(int n, int r, int p, int q);
  /// I, J: strictly increasing 0-based index lists; lambda: 0-based fiber index.
  Complex& at(const std::vector<int>& I, const std::vector<int>& J, int lambda);
  Complex get(const std::vector<int>& I, const std::vector<int>& J, int lambda) const;
  void validate() const;
};

/// <u, v> linear in u, conjugate-linear in v.
Complex inner(const FiberForm& u, const FiberForm& v);
double norm_sq(const FiberForm& u);

/// c_{jk lambda mu}; i Theta = i sum c dz_j ^ dzbar_k (x) e*_lambda (x) e_mu.
class CurvatureTensor {
 public:
  CurvatureTensor(int n, int r);

  int n() const { return n_; }
  int r() const { return r_; }
  Complex& operator()(int j, int k, int lambda, int mu);
  Complex operator()(int j, int k, int lambda, int mu) const;

  /// M[(j,lambda),(k,mu)] = c_{jk lambda mu}, row index j*r+lambda.
  CMatrix matricization() const;
  static CurvatureTensor from_matricization(const CMatrix& m, int n, int r);
  /// h_{jk} delta_{lambda mu}
  static CurvatureTensor from_scalar(const CMatrix& h, int r);
  static CurvatureTensor identity_like(int n, int r);

  bool is_hermitian(double tol = kLinearAlgebraTol) const;
  double scale() const;  // max(1, infinity norm of the matricization)

  CurvatureTensor& operator+=(const CurvatureTensor& other);
  CurvatureTensor& operator*=(double s);
  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
  friend CurvatureTensor operator-(CurvatureTensor a, const CurvatureTensor& b) {
    return a += b * -1.0;
  }
  friend CurvatureTensor operator*(CurvatureTensor a, double s) { return a *= s; }
  friend CurvatureTensor operator*(double s, CurvatureTensor a) { return a *= s; }

 private:
  int n_;
  int r_;
  std::vector<Complex> c_;
};

/// a = sum a_j dz_j
struct Covector10 {
  std::vector<Complex> a;
  int n() const { return static_cast<int>(a.size()); }
};

/// A homogeneous operator on a graded space with known component degrees.
struct GradedOperator {
  int degree = 0;
  CMatrix matrix;
  std::vector<int> componentDegrees;

  /// Throws PreconditionError when an entry maps degree d outside d + degree.
  void validate(double tol = 0.0) const;
};

// Operator matrices on the full space of ExteriorFiber(n, r).
CMatrix lefschetz_matrix(const ExteriorFiber& fiber);
CMatrix lambda_matrix(const ExteriorFiber& fiber);
/// u -> a ^ u
CMatrix wedge10_matrix(const ExteriorFiber& fiber, const Covector10& a);
/// u -> abar ^ u, abar = sum conj(a_j) dzbar_j
CMatrix wedge01_matrix(const ExteriorFiber& fiber, const Covector10& a);
/// u -> i Theta ^ u with the fiber acting e_lambda -> c_{jk lambda mu} e_mu
CMatrix curvature_wedge_matrix(const ExteriorFiber& fiber, const CurvatureTensor& theta);

/// omega ^ u. On degree overflow the zero form is returned (bidegree clamped to n).
FiberForm lefschetz_L(const FiberForm& u);
/// Adjoint of lefschetz_L; zero when p or q is 0.
FiberForm lambda_adj(const FiberForm& u);

/// H_Theta(tau) = sum c_{jk lambda mu} tau_{j lambda} conj(tau_{k mu}); tau is n x r.
double nakano_form(const CurvatureTensor& theta, const CMatrix& tau);

double nakano_min_eigenvalue(const CurvatureTensor& theta);
bool is_nakano_semipositive(const CurvatureTensor& theta);
/// One-sided: H_Theta(zeta (x) v) >= -tol on `trials` random decomposable tensors.
bool is_griffiths_semipositive_sampled(const CurvatureTensor& theta, int trials,
                                       std::uint64_t seed);

/// Matrix of [i Theta, Lambda] on the (n,q)-forms, basis bidegree_basis(n, q).
CMatrix curvature_commutator(const CurvatureTensor& theta, int q);

/// c_{jk} = a_j conj(a_k), tensored with the identity on C^r.
CurvatureTensor rank_one_curvature(const Covector10& a, int r = 1);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};
/// lhs = <[i a^abar, Lambda] v, v>, rhs = |(abar ^)^* v|^2 for v of bidegree (n,1).
IdentitySides dpsi_contraction_identity(const Covector10& a, const FiberForm& v);

struct FormSides {
  FiberForm lhs;
  FiberForm rhs;
};
/// lhs = a^* u (adjoint of a ^ .), rhs = i [abar, Lambda] u.
FormSides adjoint_bracket_identity(const Covector10& a, const FiberForm& u);

/// Operator norm of (-1)^{ca}[A,[B,C]] + (-1)^{ab}[B,[C,A]] + (-1)^{bc}[C,[A,B]].
double graded_jacobi_check(const GradedOperator& A, const GradedOperator& B,
                           const GradedOperator& C);
CMatrix graded_commutator(const GradedOperator& A, const GradedOperator& B);
/// max(1, product of the infinity norms); residuals are compared against tol * this.
double graded_jacobi_scale(const GradedOperator& A, const GradedOperator& B,
                           const GradedOperator& C);

/// eta (theta + (1 + delta chi1 / eta) ddpsi) + (delta chi2 - delta^2 chi1^2 / lambda) dpsi^dpsibar
CurvatureTensor assemble_Rt(const CurvatureTensor& theta, const CurvatureTensor& ddpsi,
                            const Covector10& dpsi, double eta, double chi1, double chi2,
                            double delta, double lambda);

/// [theta_eff, Lambda] on (n,q)-forms.
CMatrix bkn_operator_B(const CurvatureTensor& thetaEff, int q);

struct InverseQuadratic {
  double value = 0.0;    // <B^{-1} v, v>
  double minEigenvalue = 0.0;
  bool positiveDefinite = false;
};
InverseQuadratic inverse_quadratic_form(const CMatrix& B, const CVector& v);

/// Restriction of a form to the coordinates of bidegree_basis(p, q).
CVector restrict_to(const FiberForm& u, int p, int q);

namespace random {

using Engine = std::mt19937_64;

CMatrix gaussian_matrix(Engine& rng, Eigen::Index rows, Eigen::Index cols);
CMatrix hermitian(Engine& rng, int size);
/// Sum of rank-one terms x x^H; rank drawn in [0, n r].
CurvatureTensor nakano_semipositive(Engine& rng, int n, int r);
Covector10 covector(Engine& rng, int n);
FiberForm form(Engine& rng, int n, int r, int p, int q);

}  // namespace random

}  // namespace mitk::fiber
