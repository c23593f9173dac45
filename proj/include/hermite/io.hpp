#pragma once

// Text configuration, delimited tables with a schema line, and the binary
// frame container.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "hermite/errors.hpp"
#include "hermite/frame.hpp"

namespace hermite::io {

// ---------------------------------------------------------------------------
// Configuration: `key = value` lines, `[section]` headers prefixing later keys
// with "section.", `#` comments.

class Config {
 public:
  static Config parse(std::istream& in, const std::string& origin = "<config>") {
    Config c;
    std::vector<std::string> problems;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::string where = origin + ":" + std::to_string(lineno);
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          problems.push_back(where + ": malformed section header");
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        problems.push_back(where + ": expected key = value");
        continue;
      }
      std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        problems.push_back(where + ": empty key");
        continue;
      }
      if (!section.empty()) key = section + "." + key;
      if (c.values_.count(key)) problems.push_back(where + ": duplicate key '" + key + "'");
      c.values_[key] = value;
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return c;
  }

  static Config from_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    return parse(in, path);
  }

  /// Keys from `other` replace keys here.
  void merge(const Config& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Typed accessors record problems instead of throwing so a caller can
  /// report every bad key at once.
  std::string str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback, std::vector<std::string>& problems) {
    const std::string s = str(key, "");
    if (s.empty()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      problems.push_back(key + ": expected a number, got '" + s + "'");
      return fallback;
    }
  }

  long integer(const std::string& key, long fallback, std::vector<std::string>& problems) {
    const std::string s = str(key, "");
    if (s.empty()) return fallback;
    try {
      std::size_t pos = 0;
      const long v = std::stol(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      problems.push_back(key + ": expected an integer, got '" + s + "'");
      return fallback;
    }
  }

  bool boolean(const std::string& key, bool fallback, std::vector<std::string>& problems) {
    const std::string s = str(key, "");
    if (s.empty()) return fallback;
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    problems.push_back(key + ": expected true or false, got '" + s + "'");
    return fallback;
  }

  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback,
                            std::vector<std::string>& problems) {
    const std::string s = str(key, "");
    if (s.empty()) return fallback;
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        problems.push_back(key + ": bad list entry '" + item + "'");
      }
    }
    return out;
  }

  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback,
                            std::vector<std::string>& problems) {
    std::vector<double> def(fallback.begin(), fallback.end());
    std::vector<int> out;
    for (double v : reals(key, def, problems)) {
      if (v != std::floor(v)) problems.push_back(key + ": entries must be integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  /// Keys present in the file that no accessor asked for.
  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// Delimited tables. The first line is "# hermite-<kind> schema MAJOR.MINOR",
// the second the comma-separated column names.

inline constexpr int kSchemaMajor = 1;
inline constexpr int kSchemaMinor = 0;

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class TableWriter {
 public:
  TableWriter(const std::string& path, const std::string& kind, std::vector<std::string> columns)
      : out_(path), ncols_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    out_ << "# hermite-" << kind << " schema " << kSchemaMajor << "." << kSchemaMinor << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  /// Cells are preformatted strings so integer and text columns keep their form.
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != ncols_) throw std::logic_error("TableWriter: wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

struct Table {
  std::string kind;
  int major = 0, minor = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw std::out_of_range("no column '" + name + "'");
  }
  double real(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(static_cast<std::size_t>(column(name))));
  }
};

/// Reads a table and rejects schema major versions other than the current one.
inline Table read_table(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty table");
  char kind[64] = {0};
  if (std::sscanf(line.c_str(), "# hermite-%63s schema %d.%d", kind, &t.major, &t.minor) != 3)
    throw std::runtime_error("missing schema line");
  t.kind = kind;
  if (t.major != kSchemaMajor)
    throw std::runtime_error("unsupported schema major version " + std::to_string(t.major));
  if (!std::getline(in, line)) throw std::runtime_error("missing header line");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  t.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return read_table(in);
}

// ---------------------------------------------------------------------------
// Frame container, all little-endian:
//   "HMFR", u32 major, u32 minor, i32 dim, i32 mesh, i32 nvars, i32 m_max,
//   i32 nx, i32 ny, f64 xl xr yb yt time, i32 m[nodes], f64 data[...]

inline constexpr char kFrameMagic[4] = {'H', 'M', 'F', 'R'};
inline constexpr std::uint32_t kFrameMajor = 1;
inline constexpr std::uint32_t kFrameMinor = 0;

namespace detail {

template <class T>
void put(std::ostream& out, T v) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U u = std::bit_cast<U>(v);
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), sizeof b);
}

template <class T>
T get(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof b)) throw std::runtime_error("truncated frame");
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(b[i]) << (8 * i);
  return std::bit_cast<T>(u);
}

}  // namespace detail

inline void write_frame(std::ostream& out, const FieldFrame& f, const Grid& g) {
  out.write(kFrameMagic, 4);
  detail::put<std::uint32_t>(out, kFrameMajor);
  detail::put<std::uint32_t>(out, kFrameMinor);
  detail::put<std::int32_t>(out, f.dim);
  detail::put<std::int32_t>(out, f.mesh == Mesh::primal ? 0 : 1);
  detail::put<std::int32_t>(out, f.nvars);
  detail::put<std::int32_t>(out, f.m_max);
  detail::put<std::int32_t>(out, f.nx);
  detail::put<std::int32_t>(out, f.ny);
  for (double v : {g.xl, g.xr, g.yb, g.yt, f.time}) detail::put<double>(out, v);
  for (int m : f.m) detail::put<std::int32_t>(out, m);
  for (double v : f.data) detail::put<double>(out, v);
}

inline void write_frame(const std::string& path, const FieldFrame& f, const Grid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_frame(out, f, g);
}

struct StoredFrame {
  FieldFrame frame;
  Grid grid;
};

inline StoredFrame read_frame(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kFrameMagic, 4) != 0) throw std::runtime_error("not a frame file");
  const auto major = detail::get<std::uint32_t>(in);
  detail::get<std::uint32_t>(in);
  if (major != kFrameMajor) throw std::runtime_error("unsupported frame major version " + std::to_string(major));
  StoredFrame s;
  FieldFrame& f = s.frame;
  f.dim = detail::get<std::int32_t>(in);
  f.mesh = detail::get<std::int32_t>(in) == 0 ? Mesh::primal : Mesh::dual;
  f.nvars = detail::get<std::int32_t>(in);
  f.m_max = detail::get<std::int32_t>(in);
  f.nx = detail::get<std::int32_t>(in);
  f.ny = detail::get<std::int32_t>(in);
  if (f.dim < 1 || f.dim > 2 || f.nvars < 1 || f.m_max < 0 || f.m_max > poly::kMaxOrder || f.nx < 1 || f.ny < 1)
    throw std::runtime_error("corrupt frame header");
  s.grid.dim = f.dim;
  s.grid.xl = detail::get<double>(in);
  s.grid.xr = detail::get<double>(in);
  s.grid.yb = detail::get<double>(in);
  s.grid.yt = detail::get<double>(in);
  s.grid.nx = f.nx;
  s.grid.ny = f.ny;
  f.time = detail::get<double>(in);
  f.m.resize(static_cast<std::size_t>(f.nodes()));
  for (auto& m : f.m) m = detail::get<std::int32_t>(in);
  f.data.resize(static_cast<std::size_t>(f.nodes() * f.node_stride()));
  for (auto& v : f.data) v = detail::get<double>(in);
  return s;
}

inline StoredFrame read_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return read_frame(in);
}

}  // namespace hermite::io
