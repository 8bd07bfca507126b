#include "synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "rng.hpp"

namespace rtucker {

std::uint64_t fnv1a_bytes(const void* data, std::size_t bytes, std::uint64_t hash) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    hash ^= p[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t model_checksum(const TuckerModel& model) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  hash = fnv1a_bytes(&model.lambda, sizeof(model.lambda), hash);
  hash = fnv1a_bytes(model.core.data(), model.core.size() * sizeof(double), hash);
  for (const DenseMatrix& f : model.factors) {
    hash = fnv1a_bytes(f.data(), f.size() * sizeof(double), hash);
  }
  return hash;
}

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
  if (spec.noise_fraction < 0.0 || spec.noise_fraction > 1.0) {
    throw std::invalid_argument("generate_synthetic: noise_fraction outside [0, 1]");
  }
  SplitMix64 rng(spec.seed);
  SyntheticInstance out;
  out.planted = random_model(spec.shape, spec.planted_ranks, 0.0, rng);
  out.tensor = reconstruct(out.planted);
  out.planted_checksum = model_checksum(out.planted);

  const std::size_t total = out.tensor.size();
  const std::size_t count = static_cast<std::size_t>(
      spec.noise_fraction * static_cast<double>(total) + 0.5);
  out.noisy_entries = count;
  if (count == 0) return out;

  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  if (count * 2 >= total) {
    // Dense selection: partial Fisher-Yates.
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.next_below(total - k));
      std::swap(pool[k], pool[j]);
      chosen.push_back(pool[k]);
    }
  } else {
    std::unordered_set<std::size_t> seen;
    seen.reserve(count * 2);
    while (chosen.size() < count) {
      const std::size_t j = static_cast<std::size_t>(rng.next_below(total));
      if (seen.insert(j).second) chosen.push_back(j);
    }
  }
  for (std::size_t j : chosen) {
    out.tensor[j] += spec.noise_sigma * rng.next_normal();
  }
  return out;
}

}  // namespace rtucker
