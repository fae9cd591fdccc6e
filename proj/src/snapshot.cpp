#include "maflow/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "maflow/errors.hpp"

namespace maflow {

namespace {

void put_double(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_double(std::istream& in, const std::filesystem::path& path) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("snapshot " + path.string() + ": truncated data");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::ofstream open_for_write(const std::filesystem::path& path, const TorusGrid& grid, const char* kind,
                             double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  const nlohmann::json header = {
      {"n", grid.n}, {"resolution", grid.resolution}, {"period", grid.period}, {"kind", kind}, {"time", time}};
  out << header.dump() << '\n';
  return out;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double time) {
  auto out = open_for_write(path, f.grid, "scalar", time);
  for (std::size_t p = 0; p < f.size(); ++p) put_double(out, f[p]);
  if (!out) throw DataError("write failed for " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const HermitianField& f, double time) {
  auto out = open_for_write(path, f.grid, "hermitian", time);
  const int n = f.n();
  for (std::size_t p = 0; p < f.size(); ++p) {
    const auto row = static_cast<Eigen::Index>(p);
    for (int i = 0; i < n; ++i) put_double(out, f.diagonal(row, i));
    for (int c = 0; c < n * (n - 1) / 2; ++c) {
      put_double(out, f.lower(row, c).real());
      put_double(out, f.lower(row, c).imag());
    }
  }
  if (!out) throw DataError("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open snapshot " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("snapshot " + path.string() + ": missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("snapshot " + path.string() + ": bad header: " + e.what());
  }
  const TorusGrid grid(header.at("n").get<int>(), header.at("resolution").get<int>(), header.at("period").get<double>());
  Snapshot snap;
  snap.time = header.value("time", 0.0);
  const std::string kind = header.at("kind").get<std::string>();
  if (kind == "scalar") {
    ScalarField f(grid);
    for (std::size_t p = 0; p < f.size(); ++p) f[p] = get_double(in, path);
    snap.field = std::move(f);
  } else if (kind == "hermitian") {
    HermitianField f(grid);
    const int n = grid.n;
    for (std::size_t p = 0; p < f.size(); ++p) {
      const auto row = static_cast<Eigen::Index>(p);
      for (int i = 0; i < n; ++i) f.diagonal(row, i) = get_double(in, path);
      for (int c = 0; c < n * (n - 1) / 2; ++c) {
        const double re = get_double(in, path);
        const double im = get_double(in, path);
        f.lower(row, c) = Complex(re, im);
      }
    }
    snap.field = std::move(f);
  } else {
    throw DataError("snapshot " + path.string() + ": unknown kind '" + kind + "'");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("snapshot " + path.string() + ": trailing bytes");
  return snap;
}

}  // namespace maflow
