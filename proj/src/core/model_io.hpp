#pragma once

#include <string>

#include "tucker.hpp"

namespace rtucker {

// RTKM1 binary model format: magic "RTKM", version u8 = 1, lambda f64 LE,
// order u32 LE, order x u64 core dims, core payload, then for each factor
// u64 rows, u64 cols, payload. All floats are f64 LE; round trips are
// bit-exact.
void write_model(const TuckerModel& model, const std::string& path);
TuckerModel read_model(const std::string& path);

}  // namespace rtucker
