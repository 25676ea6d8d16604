#pragma once

// The exterior algebra Lambda^{*,*} (C^n)^* (x) C^r at one point, as a dense
// coordinate space. A basis element dz_I ^ dzbar_J (x) e_lambda is stored as
// the bitmask I | (J << n) over the 2n generators dz_1..dz_n, dzbar_1..dzbar_n
// (wedge order = generator order) and the fiber index lambda:
//   index = mask * r + lambda.
// The basis is orthonormal (|dz_j| = 1, the norm induced by
// omega = i sum dz_j ^ dzbar_j).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace mitk::fiber {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxDimension = 4;
inline constexpr int kMaxRank = 3;

class ExteriorFiber {
 public:
  ExteriorFiber(int n, int r);

  int n() const { return n_; }
  int r() const { return r_; }
  std::size_t masks() const { return std::size_t{1} << (2 * n_); }
  std::size_t dim() const { return masks() * static_cast<std::size_t>(r_); }

  std::size_t index(unsigned mask, int lambda) const {
    return static_cast<std::size_t>(mask) * static_cast<std::size_t>(r_) +
           static_cast<std::size_t>(lambda);
  }
  unsigned holomorphic_part(unsigned mask) const { return mask & ((1u << n_) - 1u); }
  unsigned antiholomorphic_part(unsigned mask) const { return mask >> n_; }

  /// Full-space indices of bidegree (p, q), ordered by mask then lambda.
  std::vector<std::size_t> bidegree_basis(int p, int q) const;
  /// Total degree of every full-space basis element.
  std::vector<int> degrees() const;

  /// e_g ^ (.) on scalar forms (4^n x 4^n); g < n is dz_{g+1}, g >= n is dzbar_{g-n+1}.
  const CMatrix& creation(int generator) const { return creation_[generator]; }

  /// Lifts a scalar-form operator to the bundle-valued space: A (x) Id_r.
  CMatrix lift(const CMatrix& scalar) const;

 private:
  int n_;
  int r_;
  std::vector<CMatrix> creation_;
};

/// Sign of e_g ^ e_S: (-1)^{#{s in S : s < g}}, or 0 when g is in S.
int insertion_sign(unsigned mask, int generator);

}  // namespace mitk::fiber
