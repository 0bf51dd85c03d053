#pragma once

#include <iosfwd>
#include <string>

#include "pmelab/grid_field.hpp"

namespace pmelab {

/// Columns x1..xn, value.
void write_field_csv(const ScalarField& field, std::ostream& os);

/// Binary layout: magic "PMLF", u32 ndim, u64 dims[ndim], 4-byte dtype tag "f64 ", u64 frame count,
/// then per frame an f64 time followed by row-major f64 values.
void write_field_binary(const SpaceTimeField& field, std::ostream& os);
void write_field_binary(const ScalarField& field, std::ostream& os);

struct BinaryDump {
  std::vector<std::uint64_t> dims;
  std::vector<double> times;
  std::vector<std::vector<double>> frames;
};
BinaryDump read_field_binary(std::istream& is);

}  // namespace pmelab
