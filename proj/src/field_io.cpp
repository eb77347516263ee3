#include "gnpwe/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "gnpwe/errors.hpp"

namespace gnpwe::fd {

namespace {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

constexpr char kMagic[4] = {'G', 'N', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DomainError("truncated field file");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_binary(const GridField& field, std::ostream& out) {
  const GridSpec& g = field.grid();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nt));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx));
  put<double>(out, g.lx);
  put<double>(out, g.ly);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.stencil_order));
  for (double v : field.values()) put<double>(out, v);
}

GridField read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw DomainError("not a field file");
  if (get<std::uint32_t>(in) != kVersion) throw DomainError("unsupported field file version");
  GridSpec g;
  g.n = static_cast<int>(get<std::uint32_t>(in));
  g.nt = static_cast<int>(get<std::uint32_t>(in));
  g.ny = static_cast<int>(get<std::uint32_t>(in));
  g.nx = static_cast<int>(get<std::uint32_t>(in));
  g.lx = get<double>(in);
  g.ly = get<double>(in);
  g.stencil_order = static_cast<int>(get<std::uint32_t>(in));
  g.validate();
  std::vector<double> values(g.size());
  for (auto& v : values) v = get<double>(in);
  return GridField(g, std::move(values));
}

void write_csv(const GridField& field, std::ostream& out) {
  const GridSpec& g = field.grid();
  out << "n,nt,ny,nx,lx,ly,stencil_order\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << g.n << ',' << g.nt << ',' << g.ny << ',' << g.nx << ',' << g.lx << ',' << g.ly << ','
      << g.stencil_order << '\n';
  out << "value\n";
  for (double v : field.values()) out << v << '\n';
}

GridField read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,nt,ny,nx,lx,ly,stencil_order") {
    throw DomainError("missing field CSV header");
  }
  if (!std::getline(in, line)) throw DomainError("missing field CSV grid line");
  GridSpec g;
  {
    std::istringstream row(line);
    char c1, c2, c3, c4, c5, c6;
    if (!(row >> g.n >> c1 >> g.nt >> c2 >> g.ny >> c3 >> g.nx >> c4 >> g.lx >> c5 >> g.ly >> c6 >>
          g.stencil_order)) {
      throw DomainError("malformed field CSV grid line");
    }
  }
  g.validate();
  if (!std::getline(in, line) || line != "value") throw DomainError("missing field CSV value header");
  std::vector<double> values;
  values.reserve(g.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  if (values.size() != g.size()) throw DomainError("field CSV has the wrong number of values");
  return GridField(g, std::move(values));
}

void save_field(const GridField& field, const std::string& path) {
  const bool csv = ends_with(path, ".csv");
  std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  if (csv) {
    write_csv(field, out);
  } else {
    write_binary(field, out);
  }
}

GridField load_field(const std::string& path) {
  const bool csv = ends_with(path, ".csv");
  std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return csv ? read_csv(in) : read_binary(in);
}

}  // namespace gnpwe::fd
