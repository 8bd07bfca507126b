#pragma once

#include <cstdint>
#include <vector>

#include "tensor.hpp"
#include "tucker.hpp"

namespace rtucker {

struct SyntheticSpec {
  std::vector<std::size_t> shape;
  std::vector<std::size_t> planted_ranks;
  double noise_fraction = 0.01;  // fraction of entries that receive noise
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticInstance {
  DenseTensor tensor;
  TuckerModel planted;
  std::uint64_t planted_checksum = 0;  // FNV-1a over the planted model bytes
  std::size_t noisy_entries = 0;
};

// Benchmark protocol: plant a random Tucker model with i.i.d. uniform [0, 1)
// entries, reconstruct it, then add N(0, sigma) noise to the requested
// fraction of entries (chosen without replacement). At the default 1% / sigma
// 1 the noise floors the reachable RMSE near sqrt(0.01) = 0.10.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

std::uint64_t fnv1a_bytes(const void* data, std::size_t bytes, std::uint64_t seed_hash);
std::uint64_t model_checksum(const TuckerModel& model);

}  // namespace rtucker
