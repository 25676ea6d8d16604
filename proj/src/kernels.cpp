#include "mitk/kernels.hpp"

namespace mitk::kernels {

BlockMoments pairwise_sum(std::span<const BlockMoments> blocks) {
  if (blocks.empty()) return {};
  if (blocks.size() == 1) return blocks.front();
  const std::size_t half = blocks.size() / 2;
  const BlockMoments l = pairwise_sum(blocks.first(half));
  const BlockMoments r = pairwise_sum(blocks.subspan(half));
  return {l.sum + r.sum, l.sumSq + r.sumSq};
}

McEstimate finish(std::span<const BlockMoments> blocks, std::uint64_t samples) {
  McEstimate est;
  est.samples = samples;
  if (samples == 0) return est;
  const BlockMoments total = pairwise_sum(blocks);
  const double n = static_cast<double>(samples);
  est.mean = total.sum / n;
  const double var = samples > 1 ? (total.sumSq - n * est.mean * est.mean) / (n - 1) : 0.0;
  est.stdError = var > 0 ? std::sqrt(var / n) : 0.0;
  return est;
}

}  // namespace mitk::kernels
