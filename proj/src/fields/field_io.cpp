#include "pmelab/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "pmelab/error.hpp"

namespace pmelab {

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error(ErrorCode::InvalidArgument, "truncated field dump");
  return v;
}

void write_header(const Chart& chart, std::uint64_t frames, std::ostream& os) {
  os.write("PMLF", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(chart.dim()));
  for (int i = 0; i < chart.dim(); ++i) put<std::uint64_t>(os, static_cast<std::uint64_t>(chart.axis(i).resolution));
  os.write("f64 ", 4);
  put<std::uint64_t>(os, frames);
}

}  // namespace

void write_field_csv(const ScalarField& field, std::ostream& os) {
  const Chart& c = field.chart();
  os.precision(17);
  for (int i = 0; i < c.dim(); ++i) os << "x" << (i + 1) << ",";
  os << "value\n";
  for (std::size_t p = 0; p < field.size(); ++p) {
    const Vec3 x = c.point(p);
    for (int i = 0; i < c.dim(); ++i) os << x[i] << ",";
    os << field[p] << "\n";
  }
}

void write_field_binary(const SpaceTimeField& field, std::ostream& os) {
  write_header(field.chart(), field.frame_count(), os);
  for (std::size_t k = 0; k < field.frame_count(); ++k) {
    put<double>(os, field.times()[k]);
    const auto& f = field.frame_values(k);
    os.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
}

void write_field_binary(const ScalarField& field, std::ostream& os) {
  write_header(field.chart(), 1, os);
  put<double>(os, field.time());
  os.write(reinterpret_cast<const char*>(field.values().data()),
           static_cast<std::streamsize>(field.size() * sizeof(double)));
}

BinaryDump read_field_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PMLF", 4) != 0) throw Error(ErrorCode::InvalidArgument, "not a field dump");
  BinaryDump d;
  const auto ndim = get<std::uint32_t>(is);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    d.dims.push_back(get<std::uint64_t>(is));
    count *= d.dims.back();
  }
  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "f64 ", 4) != 0) throw Error(ErrorCode::InvalidArgument, "unsupported dtype tag");
  const auto frames = get<std::uint64_t>(is);
  for (std::uint64_t k = 0; k < frames; ++k) {
    d.times.push_back(get<double>(is));
    std::vector<double> f(count);
    is.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw Error(ErrorCode::InvalidArgument, "truncated field dump");
    d.frames.push_back(std::move(f));
  }
  return d;
}

}  // namespace pmelab
