#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmelab/linalg.hpp"

namespace pmelab {

using Json = nlohmann::json;

/// Sorted keys, two-space indent, numbers as %.17g; non-finite numbers become "inf", "-inf" or "nan".
std::string canonical_dump(const Json& j);

/// JSON value for a double that may be non-finite.
Json json_number(double x);
Json json_point(const Vec3& x, int n);
Json json_array(const std::vector<double>& xs);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_number(double x);

/// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);

std::string read_file(const std::string& path);
/// Creates parent directories.
void write_file(const std::string& path, const std::string& contents);

}  // namespace pmelab
