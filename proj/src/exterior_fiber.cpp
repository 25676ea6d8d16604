#include "mitk/exterior_fiber.hpp"

#include "mitk/errors.hpp"

#include <bit>
#include <string>

namespace mitk::fiber {

int insertion_sign(unsigned mask, int generator) {
  const unsigned bit = 1u << generator;
  if (mask & bit) return 0;
  return std::popcount(mask & (bit - 1u)) % 2 == 0 ? 1 : -1;
}

ExteriorFiber::ExteriorFiber(int n, int r) : n_(n), r_(r) {
  if (n < 1 || n > kMaxDimension) {
    throw InputError("fiber dimension n must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (r < 1 || r > kMaxRank) {
    throw InputError("bundle rank r must lie in [1, " + std::to_string(kMaxRank) + "]");
  }
  const auto size = static_cast<Eigen::Index>(masks());
  creation_.reserve(static_cast<std::size_t>(2 * n));
  for (int g = 0; g < 2 * n; ++g) {
    CMatrix e = CMatrix::Zero(size, size);
    for (unsigned mask = 0; mask < masks(); ++mask) {
      const int sign = insertion_sign(mask, g);
      if (sign != 0) e(static_cast<Eigen::Index>(mask | (1u << g)), mask) = sign;
    }
    creation_.push_back(std::move(e));
  }
}

std::vector<std::size_t> ExteriorFiber::bidegree_basis(int p, int q) const {
  std::vector<std::size_t> out;
  for (unsigned mask = 0; mask < masks(); ++mask) {
    if (std::popcount(holomorphic_part(mask)) == p &&
        std::popcount(antiholomorphic_part(mask)) == q) {
      for (int l = 0; l < r_; ++l) out.push_back(index(mask, l));
    }
  }
  return out;
}

std::vector<int> ExteriorFiber::degrees() const {
  std::vector<int> out(dim());
  for (unsigned mask = 0; mask < masks(); ++mask) {
    for (int l = 0; l < r_; ++l) out[index(mask, l)] = std::popcount(mask);
  }
  return out;
}

CMatrix ExteriorFiber::lift(const CMatrix& scalar) const {
  if (r_ == 1) return scalar;
  const Eigen::Index m = scalar.rows();
  CMatrix out = CMatrix::Zero(m * r_, m * r_);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (scalar(i, j) == Complex(0.0, 0.0)) continue;
      for (int l = 0; l < r_; ++l) out(i * r_ + l, j * r_ + l) = scalar(i, j);
    }
  }
  return out;
}

}  // namespace mitk::fiber
