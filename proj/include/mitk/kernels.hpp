#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// variant with the same block decomposition and the same fixed-shape pairwise
// reduction, so both return bit-identical results for a given seed regardless
// of the thread count.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mitk::kernels {

inline constexpr std::uint64_t kBlockSize = 4096;
inline constexpr std::size_t kMaxDim = 8;

/// splitmix64 finalizer applied to (seed, counter); a stateless counter RNG.
constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform double in (0, 1].
constexpr double unit(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Seed for the i-th independent sub-stream of `seed`.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t i) {
  return mix(seed ^ 0xD1B54A32D192ED03ULL, i);
}

struct BlockMoments {
  double sum = 0.0;
  double sumSq = 0.0;
};

/// Fixed-shape pairwise summation (split at the midpoint, recurse).
BlockMoments pairwise_sum(std::span<const BlockMoments> blocks);

struct McEstimate {
  double mean = 0.0;
  double stdError = 0.0;
  std::uint64_t samples = 0;
};

McEstimate finish(std::span<const BlockMoments> blocks, std::uint64_t samples);

namespace detail {

template <class F>
BlockMoments run_block(const F& f, std::size_t dim, std::uint64_t samples, std::uint64_t seed,
                       std::uint64_t block) {
  std::array<double, kMaxDim> u{};
  const std::uint64_t begin = block * kBlockSize;
  const std::uint64_t end = begin + kBlockSize < samples ? begin + kBlockSize : samples;
  BlockMoments m;
  for (std::uint64_t i = begin; i < end; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      u[d] = unit(mix(seed, i * dim + d));
    }
    const double v = f(std::span<const double>(u.data(), dim));
    m.sum += v;
    m.sumSq += v * v;
  }
  return m;
}

inline std::uint64_t block_count(std::uint64_t samples) {
  return (samples + kBlockSize - 1) / kBlockSize;
}

}  // namespace detail

/// Mean of f(u) over `samples` uniform points u in (0,1]^dim.
template <class F>
McEstimate mc_integrate_serial(const F& f, std::size_t dim, std::uint64_t samples,
                               std::uint64_t seed) {
  std::vector<BlockMoments> blocks(detail::block_count(samples));
  for (std::uint64_t b = 0; b < blocks.size(); ++b) {
    blocks[b] = detail::run_block(f, dim, samples, seed, b);
  }
  return finish(blocks, samples);
}

template <class F>
McEstimate mc_integrate_parallel(const F& f, std::size_t dim, std::uint64_t samples,
                                 std::uint64_t seed) {
  std::vector<BlockMoments> blocks(detail::block_count(samples));
  const auto n = static_cast<std::int64_t>(blocks.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < n; ++b) {
    blocks[b] = detail::run_block(f, dim, samples, seed, static_cast<std::uint64_t>(b));
  }
  return finish(blocks, samples);
}

/// out[i] = f(i) for i in [0, n). f must be a pure function of i.
template <class T, class F>
std::vector<T> map_serial(std::size_t n, const F& f) {
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

template <class T, class F>
std::vector<T> map_parallel(std::size_t n, const F& f) {
  std::vector<T> out(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) out[i] = f(static_cast<std::size_t>(i));
  return out;
}

}  // namespace mitk::kernels
