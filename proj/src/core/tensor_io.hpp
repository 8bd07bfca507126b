#pragma once

#include <string>

#include "tensor.hpp"

namespace rtucker {

// DTEN1 binary format: magic "DTEN", version u8 = 1, order u32 LE, then
// order x u64 LE dims, then prod(dims) float64 LE values in canonical order.
// Round trips are bit-exact.
void write_tensor(const DenseTensor& t, const std::string& path);
DenseTensor read_tensor(const std::string& path);

// CSV ingestion for small tensors: one entry per line as
// "i1,i2,...,iN,value" with 0-based indices. Lines starting with '#' are
// skipped. The shape is the componentwise max index + 1; unlisted entries
// are zero.
DenseTensor read_tensor_csv(const std::string& path);

}  // namespace rtucker
