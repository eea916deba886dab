#ifndef AQUASIFT_NN_SERIALIZE_H_
#define AQUASIFT_NN_SERIALIZE_H_

#include <iosfwd>
#include <string>

#include "aquasift/hash.h"
#include "aquasift/nn/tape.h"

namespace aquasift::nn {

// Binary layout: "AQSW" magic, u32 version, u32 tensor count, then per
// tensor: u32 name length, name bytes, u64 rows, u64 cols, rows*cols
// little-endian float64 values in column-major order.
void write_parameters(const ParameterSet& params, std::ostream& out);

// Reads a file written by write_parameters into an empty set.
ParameterSet read_parameters(std::istream& in);

// Copies values from `source` into `target` for every name present in both;
// shapes must agree. Returns the number of tensors copied.
std::size_t copy_matching(const ParameterSet& source, ParameterSet& target);

void hash_parameters(const ParameterSet& params, Fnv1a& hasher);

}  // namespace aquasift::nn

#endif  // AQUASIFT_NN_SERIALIZE_H_
