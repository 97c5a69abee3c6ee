#include "osckit/gfn_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

namespace osckit {

namespace {

constexpr std::uint8_t kMagic[4] = {'G', 'F', 'N', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes[at + i]} << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_gfn1(const GridFunction& f) {
  if (f.rank() > std::numeric_limits<std::uint8_t>::max())
    throw InvalidArgument("rank does not fit in GFN1 header");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(5 + 4 * f.rank() + 8 * f.size());
  out.push_back(static_cast<std::uint8_t>(f.rank()));
  for (std::size_t n : f.dims()) {
    if (n > std::numeric_limits<std::uint32_t>::max())
      throw InvalidArgument("axis length does not fit in GFN1 header");
    put_u32(out, static_cast<std::uint32_t>(n));
  }
  for (double v : f.values()) put_f64(out, v);
  return out;
}

GridFunction decode_gfn1(std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (i >= bytes.size()) throw FormatError("GFN1: truncated magic", i);
    if (bytes[i] != kMagic[i]) throw FormatError("GFN1: bad magic", i);
  }
  if (bytes.size() < 5) throw FormatError("GFN1: missing rank byte", 4);
  const std::size_t rank = bytes[4];
  if (rank == 0) throw FormatError("GFN1: rank must be at least 1", 4);

  std::size_t at = 5;
  Dims dims;
  std::size_t count = 1;
  for (std::size_t j = 0; j < rank; ++j) {
    if (at + 4 > bytes.size()) throw FormatError("GFN1: truncated dimension list", bytes.size());
    const std::size_t n = get_le(bytes, at, 4);
    if (n < 2) throw FormatError("GFN1: axis " + std::to_string(j) + " has fewer than 2 cells", at);
    if (count > std::numeric_limits<std::size_t>::max() / 8 / n)
      throw FormatError("GFN1: grid too large", at);
    count *= n;
    dims.push_back(n);
    at += 4;
  }

  const std::size_t need = at + 8 * count;
  if (bytes.size() < need) throw FormatError("GFN1: truncated value payload", bytes.size());
  if (bytes.size() > need) throw FormatError("GFN1: trailing bytes after payload", need);

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i, at += 8) {
    values[i] = std::bit_cast<double>(get_le(bytes, at, 8));
    if (!std::isfinite(values[i])) throw FormatError("GFN1: non-finite value", at);
  }
  return GridFunction(std::move(dims), std::move(values));
}

void write_gfn1(const std::filesystem::path& path, const GridFunction& f) {
  const auto bytes = encode_gfn1(f);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed for " + path.string());
}

GridFunction read_gfn1(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_gfn1(bytes);
}

}  // namespace osckit
