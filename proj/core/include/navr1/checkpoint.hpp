#pragma once

#include <string>

#include "navr1/tensor.hpp"

namespace navr1 {

// Binary checkpoint, header "NAVR1-CKPT v1". Byte layout (little-endian):
//   magic   "NAVR1-CKPT v1\n"
//   u64     array count
//   per array:
//     u32   name length
//     bytes name (no terminator)
//     u32   rank
//     u32[] dims
//     f64[] row-major payload
// save followed by load reproduces the input bit for bit.
void save_checkpoint(const std::string& path, const NamedTensors& arrays);
NamedTensors load_checkpoint(const std::string& path);

}  // namespace navr1
