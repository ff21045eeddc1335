#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace unilab {

// All file outputs go through a temp-file-plus-rename so readers never see
// partial artifacts.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw io_error("short write: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot rename into place: " + path);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Binary PGM, maxval 255, 255 = inside. The grid geometry rides along in a
// comment so masks round-trip through files.
inline std::string pgm_string(const CompactGridSet& k) {
  const auto& g = k.grid();
  std::string s = "P5\n# grid " + format_double(g.center.real()) + " " +
                  format_double(g.center.imag()) + " " + format_double(g.half_width) +
                  "\n" + std::to_string(g.resolution) + " " +
                  std::to_string(g.resolution) + "\n255\n";
  s.reserve(s.size() + k.mask().size());
  for (auto v : k.mask()) s.push_back(v ? char(255) : char(0));
  return s;
}

inline void write_pgm(const CompactGridSet& k, const std::string& path) {
  write_file_atomic(path, pgm_string(k));
}

inline CompactGridSet read_pgm(const std::string& path) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  GridSpec grid;
  grid.center = {0.0, 0.0};
  grid.half_width = 1.0;

  auto next_token = [&]() -> std::string {
    while (pos < data.size()) {
      if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else if (data[pos] == '#') {
        std::size_t eol = data.find('\n', pos);
        std::string comment = data.substr(pos + 1, eol - pos - 1);
        std::istringstream cs(comment);
        std::string tag;
        double cr, ci, hw;
        if (cs >> tag >> cr >> ci >> hw && tag == "grid") {
          grid.center = {cr, ci};
          grid.half_width = hw;
        }
        pos = eol == std::string::npos ? data.size() : eol + 1;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(start, pos - start);
  };

  if (next_token() != "P5") throw io_error("not a binary PGM: " + path);
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (w != h || maxval != 255) throw io_error("unsupported PGM geometry: " + path);
  ++pos; // single whitespace after maxval
  if (data.size() - pos < std::size_t(w) * h) throw io_error("truncated PGM: " + path);
  grid.resolution = w;
  std::vector<std::uint8_t> mask(std::size_t(w) * h);
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = std::uint8_t(data[pos + i]) >= 128 ? 1 : 0;
  return CompactGridSet::from_mask(grid, std::move(mask));
}

inline std::string points_csv_string(const std::vector<cplx>& pts) {
  std::string s = "re,im\n";
  for (cplx p : pts)
    s += format_double(p.real()) + "," + format_double(p.imag()) + "\n";
  return s;
}

inline void write_points_csv(const std::vector<cplx>& pts, const std::string& path) {
  write_file_atomic(path, points_csv_string(pts));
}

inline std::vector<cplx> read_points_csv(const std::string& path) {
  const std::string data = read_file(path);
  std::istringstream in(data);
  std::string line;
  std::vector<cplx> pts;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("re", 0) == 0) continue; // header
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw io_error("malformed points CSV: " + path);
    pts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  if (pts.empty()) throw io_error("empty points CSV: " + path);
  return pts;
}

} // namespace unilab
