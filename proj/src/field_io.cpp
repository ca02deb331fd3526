#include "fracflow/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fracflow {

const char* to_string(FieldFormat f) { return f == FieldFormat::Csv ? "csv" : "bin"; }

FieldFormat field_format_from_string(const std::string& name) {
  if (name == "csv") return FieldFormat::Csv;
  if (name == "bin" || name == "binary") return FieldFormat::Binary;
  throw config_error("unknown field format '" + name + "' (expected csv or bin)");
}

const char* extension(FieldFormat f) { return f == FieldFormat::Csv ? ".csv" : ".bin"; }

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const ScalarField& field, std::ostream& os) {
  const GridSpec& g = field.grid();
  os << "# fracflow-field v1, ndim=" << g.ndim << ", dims=";
  for (int d = 0; d < g.ndim; ++d) os << (d ? "x" : "") << g.n;
  os << ", length=" << fmt17(g.length) << "\n";

  const int n = g.n;
  if (g.ndim == 1) {
    for (int i = 0; i < n; ++i)
      os << fmt17(g.coord(i)) << ',' << fmt17(field[i]) << "\n";
  } else if (g.ndim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        os << fmt17(g.coord(i)) << ',' << fmt17(g.coord(j)) << ','
           << fmt17(field[field.flat(i, j)]) << "\n";
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          os << fmt17(g.coord(i)) << ',' << fmt17(g.coord(j)) << ',' << fmt17(g.coord(k)) << ','
             << fmt17(field[field.flat(i, j, k)]) << "\n";
  }
}

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));  // little-endian host assumed (x86/arm64)
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

void write_binary(const ScalarField& field, std::ostream& os) {
  const GridSpec& g = field.grid();
  os.write("FFLD", 4);
  put_le<std::uint32_t>(os, 1);
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(g.ndim));
  for (int d = 0; d < g.ndim; ++d) put_le<std::uint64_t>(os, static_cast<std::uint64_t>(g.n));
  for (int d = 0; d < g.ndim; ++d) put_le<double>(os, g.length);
  for (double v : field.values()) put_le<double>(os, v);
}

ScalarField read_binary(std::istream& is, const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "FFLD", 4) != 0)
    throw io_error("not a field file (bad magic): " + path);
  const auto version = get_le<std::uint32_t>(is);
  if (version != 1)
    throw io_error("unsupported field file version " + std::to_string(version) + ": " + path);
  const int ndim = get_le<std::uint8_t>(is);
  if (ndim < 1 || ndim > 3) throw io_error("bad dimension in field file: " + path);

  std::uint64_t counts[3] = {0, 0, 0};
  for (int d = 0; d < ndim; ++d) counts[d] = get_le<std::uint64_t>(is);
  double lengths[3] = {0, 0, 0};
  for (int d = 0; d < ndim; ++d) lengths[d] = get_le<double>(is);
  for (int d = 1; d < ndim; ++d)
    if (counts[d] != counts[0] || lengths[d] != lengths[0])
      throw io_error("anisotropic grids are not supported: " + path);

  GridSpec g(ndim, static_cast<int>(counts[0]), lengths[0]);
  ScalarField field(g);
  for (double& v : field.values()) v = get_le<double>(is);
  if (!is) throw io_error("truncated field file: " + path);
  return field;
}

ScalarField read_csv(std::istream& is, const std::string& path) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# fracflow-field v1", 0) != 0)
    throw io_error("not a field file (bad header): " + path);

  const auto grab = [&](const std::string& key) {
    const std::size_t at = header.find(key + "=");
    if (at == std::string::npos) throw io_error("field header misses " + key + ": " + path);
    const std::size_t from = at + key.size() + 1;
    return header.substr(from, header.find_first_of(", ", from) - from);
  };
  const int ndim = std::stoi(grab("ndim"));
  const int n = std::stoi(grab("dims"));  // leading count; axes are equal
  const double length = std::stod(grab("length"));

  GridSpec g(ndim, n, length);
  ScalarField field(g);
  std::string row;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::getline(is, row)) throw io_error("truncated field file: " + path);
    const std::size_t last = row.find_last_of(',');
    if (last == std::string::npos) throw io_error("malformed row in field file: " + path);
    field[i] = std::stod(row.substr(last + 1));
  }
  return field;
}

}  // namespace

void write_field(const ScalarField& field, const std::string& path, FieldFormat format) {
  std::ofstream os(path, format == FieldFormat::Binary ? std::ios::binary : std::ios::out);
  if (!os) throw io_error("cannot open for writing: " + path);
  if (format == FieldFormat::Csv)
    write_csv(field, os);
  else
    write_binary(field, os);
  os.flush();
  if (!os) throw io_error("write failed: " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open for reading: " + path);
  char first = 0;
  is.get(first);
  is.unget();
  if (first == 'F') return read_binary(is, path);
  return read_csv(is, path);
}

void write_line(const std::vector<double>& values, double origin, double dx,
                const std::string& path) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot open for writing: " + path);
  os << "# fracflow-line v1, n=" << values.size() << ", origin=" << fmt17(origin)
     << ", dx=" << fmt17(dx) << "\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << fmt17(origin + static_cast<double>(i) * dx) << ',' << fmt17(values[i]) << "\n";
  os.flush();
  if (!os) throw io_error("write failed: " + path);
}

}  // namespace fracflow
