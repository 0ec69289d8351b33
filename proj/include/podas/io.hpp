/*
 * Copyright 2026 The podas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PODAS_IO_HPP
#define PODAS_IO_HPP

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "podas/errors.hpp"
#include "podas/param_space.hpp"

namespace podas::io {

/// Text that round-trips a double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace detail

/// Parsed numeric CSV: optional header plus a rows x cols table.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd data;
};

/// Reads comma-separated numbers. A first line containing a non-numeric
/// field is taken as the header. Blank lines are skipped.
inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::trim(line);
    if (sv.empty()) continue;
    std::vector<std::string_view> fields;
    std::vector<std::size_t> columns;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = sv.find(',', start);
      fields.push_back(sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start));
      columns.push_back(start + 1);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    std::vector<double> values(fields.size());
    bool numeric = true;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!detail::parse_double(fields[i], values[i])) {
        numeric = false;
        bad = i;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        for (auto f : fields) table.header.emplace_back(detail::trim(f));
        width = fields.size();
        first = false;
        continue;
      }
      throw ParseError("not a number: '" + std::string(detail::trim(fields[bad])) + "'", line_no,
                       columns[bad]);
    }
    if (width == 0) width = values.size();
    if (values.size() != width)
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(values.size()),
                       line_no, 1);
    first = false;
    rows.push_back(std::move(values));
  }
  table.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c)
      table.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return table;
}

inline std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream f(path, mode);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for reading");
  return f;
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  return f;
}

inline CsvTable read_csv(const std::string& path) {
  auto f = open_in(path);
  return read_csv(f);
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  if (!header.empty()) out << '\n';
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_double(rows(r, c));
    out << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  auto f = open_out(path);
  write_csv(f, header, rows);
}

inline std::vector<std::string> numbered_header(const std::string& prefix, Eigen::Index n) {
  std::vector<std::string> h;
  h.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 1; i <= n; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

// --- snapshots -----------------------------------------------------------

/// Snapshot CSV: one snapshot per row. Returns the N x Ns matrix.
inline Eigen::MatrixXd read_snapshot_csv(std::istream& in) { return read_csv(in).data.transpose(); }

inline void write_snapshot_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& fields) {
  write_csv(out, numbered_header("u_", fields.rows()), fields.transpose());
}

inline constexpr char kSnapshotMagic[5] = {'R', 'S', 'N', 'P', '1'};

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw InvalidArgument("unexpected end of binary data");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace detail

/// RSNP1 block: magic, u64 rows, u64 cols, rows*cols float64 column-major, little-endian.
inline void write_rsnp(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  out.write(kSnapshotMagic, sizeof kSnapshotMagic);
  detail::put_u64(out, static_cast<std::uint64_t>(m.rows()));
  detail::put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) detail::put_f64(out, m(r, c));
  if (!out) throw InvalidArgument("write failed");
}

inline Eigen::MatrixXd read_rsnp(std::istream& in) {
  char magic[sizeof kSnapshotMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kSnapshotMagic, sizeof magic) != 0)
    throw InvalidArgument("missing RSNP1 magic");
  const std::uint64_t rows = detail::get_u64(in);
  const std::uint64_t cols = detail::get_u64(in);
  if (rows > (1ull << 40) || cols > (1ull << 40) || (rows && cols > (1ull << 40) / rows))
    throw InvalidArgument("RSNP1 block too large");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = detail::get_f64(in);
  return m;
}

inline bool has_rsnp_magic(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  char magic[sizeof kSnapshotMagic] = {};
  return f.read(magic, sizeof magic) && std::memcmp(magic, kSnapshotMagic, sizeof magic) == 0;
}

/// Loads an N x Ns snapshot matrix from either RSNP1 binary or CSV.
inline Eigen::MatrixXd load_snapshots(const std::string& path) {
  if (has_rsnp_magic(path)) {
    auto f = open_in(path, std::ios::binary);
    return read_rsnp(f);
  }
  auto f = open_in(path);
  return read_snapshot_csv(f);
}

inline void save_snapshots(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& fields,
                           bool binary) {
  if (binary) {
    auto f = open_out(path, std::ios::binary);
    write_rsnp(f, fields);
  } else {
    auto f = open_out(path);
    write_snapshot_csv(f, fields);
  }
}

// --- parameters ------------------------------------------------------------

/// Parameter CSV: header mu_1..mu_p, one physical sample per row.
inline ParameterSamples read_params_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  return {t.data.transpose(), Frame::Physical};
}

inline void write_params_csv(const std::string& path, const ParameterSamples& samples) {
  write_csv(path, numbered_header("mu_", samples.dim()), samples.values.transpose());
}

/// Space CSV: header axis,lower,upper; one row per axis.
inline ParameterSpace read_space_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  if (t.data.cols() != 3) throw ParseError("space file needs columns axis,lower,upper", 1, 1);
  return ParameterSpace(t.data.col(1), t.data.col(2));
}

inline void write_space_csv(const std::string& path, const ParameterSpace& space) {
  Eigen::MatrixXd rows(space.dim(), 3);
  for (Eigen::Index i = 0; i < space.dim(); ++i) rows.row(i) << double(i + 1), space.lower()[i], space.upper()[i];
  write_csv(path, {"axis", "lower", "upper"}, rows);
}

}  // namespace podas::io

#endif  // PODAS_IO_HPP
