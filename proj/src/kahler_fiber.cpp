#include "mitk/kahler_fiber.hpp"

#include "mitk/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace mitk::fiber {

namespace {

const Complex kI{0.0, 1.0};

const ExteriorFiber& fiber_for(int n, int r) {
  if (n < 1 || n > kMaxDimension || r < 1 || r > kMaxRank) {
    throw InputError("fiber shape (n=" + std::to_string(n) + ", r=" + std::to_string(r) +
                     ") out of range");
  }
  static std::array<std::array<std::unique_ptr<ExteriorFiber>, kMaxRank + 1>, kMaxDimension + 1>
      cache;
  static std::array<std::array<std::once_flag, kMaxRank + 1>, kMaxDimension + 1> once;
  std::call_once(once[n][r], [&] { cache[n][r] = std::make_unique<ExteriorFiber>(n, r); });
  return *cache[n][r];
}

unsigned mask_of(int n, const std::vector<int>& I, const std::vector<int>& J) {
  unsigned mask = 0;
  auto add = [&](const std::vector<int>& idx, int offset) {
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (idx[s] < 0 || idx[s] >= n || (s > 0 && idx[s] <= idx[s - 1])) {
        throw InputError("multi-index must be strictly increasing within 0..n-1");
      }
      mask |= 1u << (idx[s] + offset);
    }
  };
  add(I, 0);
  add(J, n);
  return mask;
}

double inf_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix kron(const CMatrix& outer, const CMatrix& inner) {
  CMatrix out = CMatrix::Zero(outer.rows() * inner.rows(), outer.cols() * inner.cols());
  for (Eigen::Index i = 0; i < outer.rows(); ++i) {
    for (Eigen::Index j = 0; j < outer.cols(); ++j) {
      if (outer(i, j) == Complex(0.0, 0.0)) continue;
      out.block(i * inner.rows(), j * inner.cols(), inner.rows(), inner.cols()) =
          outer(i, j) * inner;
    }
  }
  return out;
}

CMatrix columns(const CMatrix& m, const std::vector<std::size_t>& cols) {
  CMatrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(cols[j]));
  }
  return out;
}

CMatrix rows_of(const CMatrix& m, const std::vector<std::size_t>& rows) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void require_bidegree(const FiberForm& u) { u.validate(); }

}  // namespace

// ---------------------------------------------------------------- FiberForm

FiberForm FiberForm::zero(int n, int r, int p, int q) {
  const ExteriorFiber& f = fiber_for(n, r);
  FiberForm u;
  u.n = n;
  u.r = r;
  u.p = p;
  u.q = q;
  u.coeffs = CVector::Zero(static_cast<Eigen::Index>(f.dim()));
  u.validate();
  return u;
}

void FiberForm::validate() const {
  if (p < 0 || q < 0 || p > n || q > n) {
    throw InputError("bidegree (" + std::to_string(p) + "," + std::to_string(q) +
                     ") out of range for n=" + std::to_string(n));
  }
  const ExteriorFiber& f = fiber_for(n, r);
  if (static_cast<std::size_t>(coeffs.size()) != f.dim()) {
    throw InputError("form coefficient vector has the wrong length");
  }
}

Complex& FiberForm::at(const std::vector<int>& I, const std::vector<int>& J, int lambda) {
  if (static_cast<int>(I.size()) != p || static_cast<int>(J.size()) != q) {
    throw InputError("multi-index lengths do not match the bidegree");
  }
  if (lambda < 0 || lambda >= r) throw InputError("fiber index out of range");
  const ExteriorFiber& f = fiber_for(n, r);
  return coeffs(static_cast<Eigen::Index>(f.index(mask_of(n, I, J), lambda)));
}

Complex FiberForm::get(const std::vector<int>& I, const std::vector<int>& J, int lambda) const {
  return const_cast<FiberForm*>(this)->at(I, J, lambda);
}

Complex inner(const FiberForm& u, const FiberForm& v) {
  if (u.n != v.n || u.r != v.r) throw InputError("inner product of forms on different fibers");
  return v.coeffs.dot(u.coeffs);  // Eigen's dot conjugates the left operand
}

double norm_sq(const FiberForm& u) { return u.coeffs.squaredNorm(); }

CVector restrict_to(const FiberForm& u, int p, int q) {
  const ExteriorFiber& f = fiber_for(u.n, u.r);
  const auto basis = f.bidegree_basis(p, q);
  CVector out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = u.coeffs(static_cast<Eigen::Index>(basis[i]));
  }
  return out;
}

// ---------------------------------------------------------- CurvatureTensor

CurvatureTensor::CurvatureTensor(int n, int r)
    : n_(n), r_(r), c_(static_cast<std::size_t>(n * n * r * r), Complex(0.0, 0.0)) {
  if (n < 1 || n > kMaxDimension || r < 1 || r > kMaxRank) {
    throw InputError("curvature tensor shape out of range");
  }
}

Complex& CurvatureTensor::operator()(int j, int k, int lambda, int mu) {
  return c_[static_cast<std::size_t>(((j * n_ + k) * r_ + lambda) * r_ + mu)];
}

Complex CurvatureTensor::operator()(int j, int k, int lambda, int mu) const {
  return c_[static_cast<std::size_t>(((j * n_ + k) * r_ + lambda) * r_ + mu)];
}

CMatrix CurvatureTensor::matricization() const {
  const int d = n_ * r_;
  CMatrix m(d, d);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < r_; ++l)
        for (int u = 0; u < r_; ++u) m(j * r_ + l, k * r_ + u) = (*this)(j, k, l, u);
  return m;
}

CurvatureTensor CurvatureTensor::from_matricization(const CMatrix& m, int n, int r) {
  if (m.rows() != n * r || m.cols() != n * r) {
    throw InputError("matricization must be (n r) x (n r)");
  }
  CurvatureTensor t(n, r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int u = 0; u < r; ++u) t(j, k, l, u) = m(j * r + l, k * r + u);
  return t;
}

CurvatureTensor CurvatureTensor::from_scalar(const CMatrix& h, int r) {
  if (h.rows() != h.cols()) throw InputError("scalar curvature must be square");
  const int n = static_cast<int>(h.rows());
  CurvatureTensor t(n, r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l) t(j, k, l, l) = h(j, k);
  return t;
}

CurvatureTensor CurvatureTensor::identity_like(int n, int r) {
  return from_scalar(CMatrix::Identity(n, n), r);
}

bool CurvatureTensor::is_hermitian(double tol) const {
  const CMatrix m = matricization();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale();
}

double CurvatureTensor::scale() const { return std::max(1.0, inf_norm(matricization())); }

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& other) {
  if (other.n_ != n_ || other.r_ != r_) throw InputError("curvature tensor shapes differ");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

CurvatureTensor& CurvatureTensor::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

void GradedOperator::validate(double tol) const {
  const auto size = static_cast<Eigen::Index>(componentDegrees.size());
  if (matrix.rows() != size || matrix.cols() != size) {
    throw PreconditionError("graded operator: matrix does not match the graded space");
  }
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      if (componentDegrees[i] != componentDegrees[j] + degree && std::abs(matrix(i, j)) > tol) {
        throw PreconditionError("graded operator: entry (" + std::to_string(i) + "," +
                                std::to_string(j) + ") breaks degree " + std::to_string(degree));
      }
    }
  }
}

// ---------------------------------------------------------------- operators

CMatrix lefschetz_matrix(const ExteriorFiber& fiber) {
  const int n = fiber.n();
  const auto size = static_cast<Eigen::Index>(fiber.masks());
  CMatrix scalar = CMatrix::Zero(size, size);
  for (int j = 0; j < n; ++j) scalar += kI * fiber.creation(j) * fiber.creation(n + j);
  return fiber.lift(scalar);
}

CMatrix lambda_matrix(const ExteriorFiber& fiber) { return lefschetz_matrix(fiber).adjoint(); }

CMatrix wedge10_matrix(const ExteriorFiber& fiber, const Covector10& a) {
  if (a.n() != fiber.n()) throw InputError("covector length does not match n");
  const auto size = static_cast<Eigen::Index>(fiber.masks());
  CMatrix scalar = CMatrix::Zero(size, size);
  for (int j = 0; j < fiber.n(); ++j) scalar += a.a[j] * fiber.creation(j);
  return fiber.lift(scalar);
}

CMatrix wedge01_matrix(const ExteriorFiber& fiber, const Covector10& a) {
  if (a.n() != fiber.n()) throw InputError("covector length does not match n");
  const auto size = static_cast<Eigen::Index>(fiber.masks());
  CMatrix scalar = CMatrix::Zero(size, size);
  for (int j = 0; j < fiber.n(); ++j) scalar += std::conj(a.a[j]) * fiber.creation(fiber.n() + j);
  return fiber.lift(scalar);
}

CMatrix curvature_wedge_matrix(const ExteriorFiber& fiber, const CurvatureTensor& theta) {
  const int n = fiber.n();
  const int r = fiber.r();
  if (theta.n() != n || theta.r() != r) throw InputError("curvature tensor shape mismatch");
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(fiber.dim()),
                              static_cast<Eigen::Index>(fiber.dim()));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      CMatrix F(r, r);
      for (int l = 0; l < r; ++l)
        for (int u = 0; u < r; ++u) F(u, l) = theta(j, k, l, u);
      if (F.cwiseAbs().maxCoeff() == 0.0) continue;
      const CMatrix P = kI * fiber.creation(j) * fiber.creation(n + k);
      out += kron(P, F);
    }
  }
  return out;
}

FiberForm lefschetz_L(const FiberForm& u) {
  require_bidegree(u);
  FiberForm out = FiberForm::zero(u.n, u.r, std::min(u.p + 1, u.n), std::min(u.q + 1, u.n));
  if (u.p + 1 > u.n || u.q + 1 > u.n) return out;
  out.coeffs = lefschetz_matrix(fiber_for(u.n, u.r)) * u.coeffs;
  return out;
}

FiberForm lambda_adj(const FiberForm& u) {
  require_bidegree(u);
  FiberForm out = FiberForm::zero(u.n, u.r, std::max(u.p - 1, 0), std::max(u.q - 1, 0));
  if (u.p < 1 || u.q < 1) return out;
  out.coeffs = lambda_matrix(fiber_for(u.n, u.r)) * u.coeffs;
  return out;
}

double nakano_form(const CurvatureTensor& theta, const CMatrix& tau) {
  if (tau.rows() != theta.n() || tau.cols() != theta.r()) {
    throw InputError("tau must be an n x r array");
  }
  Complex sum{0.0, 0.0};
  for (int j = 0; j < theta.n(); ++j)
    for (int k = 0; k < theta.n(); ++k)
      for (int l = 0; l < theta.r(); ++l)
        for (int u = 0; u < theta.r(); ++u) sum += theta(j, k, l, u) * tau(j, l) * std::conj(tau(k, u));
  return sum.real();
}

double nakano_min_eigenvalue(const CurvatureTensor& theta) {
  const CMatrix m = theta.matricization();
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_nakano_semipositive(const CurvatureTensor& theta) {
  return nakano_min_eigenvalue(theta) >= -kIdentityTol * theta.scale();
}

bool is_griffiths_semipositive_sampled(const CurvatureTensor& theta, int trials,
                                       std::uint64_t seed) {
  random::Engine rng(seed);
  const double tol = kIdentityTol * theta.scale();
  for (int i = 0; i < trials; ++i) {
    const CMatrix zeta = random::gaussian_matrix(rng, theta.n(), 1);
    const CMatrix v = random::gaussian_matrix(rng, theta.r(), 1);
    CMatrix tau = zeta * v.transpose();
    tau /= tau.norm();
    if (nakano_form(theta, tau) < -tol) return false;
  }
  return true;
}

CMatrix curvature_commutator(const CurvatureTensor& theta, int q) {
  const int n = theta.n();
  if (q < 1 || q > n) throw InputError("q must lie in [1, n]");
  const ExteriorFiber& f = fiber_for(n, theta.r());
  const auto basis = f.bidegree_basis(n, q);
  const CMatrix T = curvature_wedge_matrix(f, theta);
  const CMatrix Lam = lambda_matrix(f);
  const CMatrix first = rows_of(T * columns(Lam, basis), basis);
  const CMatrix second = rows_of(Lam * columns(T, basis), basis);
  CMatrix out = first - second;
  const double dev = out.size() ? (out - out.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (dev > kLinearAlgebraTol * theta.scale()) {
    throw InternalError("curvature commutator is not Hermitian (deviation " +
                        std::to_string(dev) + ")");
  }
  return 0.5 * (out + out.adjoint());
}

CurvatureTensor rank_one_curvature(const Covector10& a, int r) {
  CurvatureTensor t(a.n(), r);
  for (int j = 0; j < a.n(); ++j)
    for (int k = 0; k < a.n(); ++k)
      for (int l = 0; l < r; ++l) t(j, k, l, l) = a.a[j] * std::conj(a.a[k]);
  return t;
}

IdentitySides dpsi_contraction_identity(const Covector10& a, const FiberForm& v) {
  require_bidegree(v);
  if (v.p != v.n || v.q != 1) throw InputError("contraction identity needs an (n,1)-form");
  if (a.n() != v.n) throw InputError("covector length does not match n");
  const ExteriorFiber& f = fiber_for(v.n, v.r);
  const CMatrix T = curvature_wedge_matrix(f, rank_one_curvature(a, v.r));
  const CMatrix Lam = lambda_matrix(f);
  const CVector bracket = T * (Lam * v.coeffs) - Lam * (T * v.coeffs);
  const CVector contracted = wedge01_matrix(f, a).adjoint() * v.coeffs;
  return {v.coeffs.dot(bracket).real(), contracted.squaredNorm()};
}

FormSides adjoint_bracket_identity(const Covector10& a, const FiberForm& u) {
  require_bidegree(u);
  if (a.n() != u.n) throw InputError("covector length does not match n");
  const ExteriorFiber& f = fiber_for(u.n, u.r);
  const CMatrix A = wedge10_matrix(f, a);
  const CMatrix Abar = wedge01_matrix(f, a);
  const CMatrix Lam = lambda_matrix(f);
  FormSides out;
  out.lhs = FiberForm::zero(u.n, u.r, std::max(u.p - 1, 0), u.q);
  out.rhs = out.lhs;
  out.lhs.coeffs = A.adjoint() * u.coeffs;
  out.rhs.coeffs = kI * (Abar * (Lam * u.coeffs) - Lam * (Abar * u.coeffs));
  return out;
}

CMatrix graded_commutator(const GradedOperator& A, const GradedOperator& B) {
  const double sign = ((A.degree * B.degree) % 2 == 0) ? 1.0 : -1.0;
  return A.matrix * B.matrix - sign * (B.matrix * A.matrix);
}

double graded_jacobi_check(const GradedOperator& A, const GradedOperator& B,
                           const GradedOperator& C) {
  for (const GradedOperator* op : {&A, &B, &C}) {
    if (op->componentDegrees != A.componentDegrees) {
      throw PreconditionError("graded operators act on different graded spaces");
    }
    op->validate(kLinearAlgebraTol * std::max(1.0, inf_norm(op->matrix)));
  }
  auto parity = [](int x) { return (x % 2 == 0) ? 1.0 : -1.0; };
  const GradedOperator BC{B.degree + C.degree, graded_commutator(B, C), A.componentDegrees};
  const GradedOperator CA{C.degree + A.degree, graded_commutator(C, A), A.componentDegrees};
  const GradedOperator AB{A.degree + B.degree, graded_commutator(A, B), A.componentDegrees};
  const CMatrix sum = parity(C.degree * A.degree) * graded_commutator(A, BC) +
                      parity(A.degree * B.degree) * graded_commutator(B, CA) +
                      parity(B.degree * C.degree) * graded_commutator(C, AB);
  return operator_norm(sum);
}

double graded_jacobi_scale(const GradedOperator& A, const GradedOperator& B,
                           const GradedOperator& C) {
  return std::max(1.0, inf_norm(A.matrix) * inf_norm(B.matrix) * inf_norm(C.matrix));
}

CurvatureTensor assemble_Rt(const CurvatureTensor& theta, const CurvatureTensor& ddpsi,
                            const Covector10& dpsi, double eta, double chi1, double chi2,
                            double delta, double lambda) {
  if (!(eta > 0.0) || !(delta > 0.0) || !(lambda > 0.0)) {
    throw PreconditionError("assemble_Rt needs eta, delta, lambda > 0");
  }
  const CurvatureTensor inner = theta + (1.0 + delta * chi1 / eta) * ddpsi;
  const double rankOne = delta * chi2 - delta * delta * chi1 * chi1 / lambda;
  return eta * inner + rankOne * rank_one_curvature(dpsi, theta.r());
}

CMatrix bkn_operator_B(const CurvatureTensor& thetaEff, int q) {
  return curvature_commutator(thetaEff, q);
}

InverseQuadratic inverse_quadratic_form(const CMatrix& B, const CVector& v) {
  if (B.rows() != B.cols() || B.rows() != v.size()) {
    throw InputError("inverse quadratic form: shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (B + B.adjoint()));
  InverseQuadratic out;
  const auto& ev = es.eigenvalues();
  out.minEigenvalue = ev.minCoeff();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  out.positiveDefinite = out.minEigenvalue > kIdentityTol * scale;
  if (!out.positiveDefinite) return out;
  const CVector w = es.eigenvectors().adjoint() * v;
  double value = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) value += std::norm(w(i)) / ev(i);
  out.value = value;
  return out;
}

// ------------------------------------------------------------------ random

namespace random {

CMatrix gaussian_matrix(Engine& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

CMatrix hermitian(Engine& rng, int size) {
  const CMatrix g = gaussian_matrix(rng, size, size);
  return 0.5 * (g + g.adjoint());
}

CurvatureTensor nakano_semipositive(Engine& rng, int n, int r) {
  std::uniform_int_distribution<int> rankDist(0, n * r);
  const int rank = rankDist(rng);
  const CMatrix x = gaussian_matrix(rng, n * r, std::max(rank, 1));
  CMatrix m = CMatrix::Zero(n * r, n * r);
  if (rank > 0) m = x.leftCols(rank) * x.leftCols(rank).adjoint();
  return CurvatureTensor::from_matricization(m, n, r);
}

Covector10 covector(Engine& rng, int n) {
  const CMatrix g = gaussian_matrix(rng, n, 1);
  Covector10 a;
  a.a.assign(g.data(), g.data() + n);
  return a;
}

FiberForm form(Engine& rng, int n, int r, int p, int q) {
  FiberForm u = FiberForm::zero(n, r, p, q);
  const auto basis = fiber_for(n, r).bidegree_basis(p, q);
  const CMatrix g = gaussian_matrix(rng, static_cast<Eigen::Index>(basis.size()), 1);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    u.coeffs(static_cast<Eigen::Index>(basis[i])) = g(static_cast<Eigen::Index>(i), 0);
  }
  return u;
}

}  // namespace random

}  // namespace mitk::fiber
