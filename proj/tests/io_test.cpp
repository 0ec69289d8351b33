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

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "podas/io.hpp"

namespace podas::io {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("podas_io_" + name)).string();
}

TEST(Csv, HeaderDetectedAndValuesParsed) {
  std::istringstream in("a, b ,c\n1,2.5,-3e2\n\n+4,5,6\r\n");
  const CsvTable t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.data.rows(), 2);
  EXPECT_EQ(t.data(0, 2), -300.0);
  EXPECT_EQ(t.data(1, 0), 4.0);
}

TEST(Csv, HeaderlessInput) {
  std::istringstream in("1,2\n3,4\n");
  const CsvTable t = read_csv(in);
  EXPECT_TRUE(t.header.empty());
  EXPECT_EQ(t.data.rows(), 2);
}

TEST(Csv, BadNumberReportsLineAndColumn) {
  std::istringstream in("x,y\n1,2\n3,abc\n");
  try {
    read_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(Csv, RaggedRowReportsLine) {
  std::istringstream in("1,2\n3\n");
  try {
    read_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Csv, DoublesRoundTripExactly) {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd m = oracle::random_matrix(7, 4, gen) * 1e3;
  std::stringstream s;
  write_csv(s, numbered_header("v_", 4), m);
  const CsvTable t = read_csv(s);
  EXPECT_EQ(t.header[3], "v_4");
  EXPECT_EQ(t.data, m);
}

TEST(Rsnp, StreamRoundTripIsExact) {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd m = oracle::random_matrix(13, 5, gen);
  std::stringstream s;
  write_rsnp(s, m);
  EXPECT_EQ(s.str().size(), 5 + 16 + 8 * 65u);
  EXPECT_EQ(s.str().substr(0, 5), "RSNP1");
  EXPECT_EQ(read_rsnp(s), m);
}

TEST(Rsnp, LittleEndianLayout) {
  std::stringstream s;
  write_rsnp(s, Eigen::MatrixXd::Constant(1, 1, 1.0));
  const std::string b = s.str();
  EXPECT_EQ(static_cast<unsigned char>(b[5]), 1u);  // rows, low byte first
  // 1.0 = 0x3FF0000000000000
  EXPECT_EQ(static_cast<unsigned char>(b[21 + 7]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(b[21 + 6]), 0xF0u);
}

TEST(Rsnp, RejectsBadInput) {
  std::stringstream wrong("RSNQ1");
  EXPECT_THROW(read_rsnp(wrong), InvalidArgument);
  std::stringstream full;
  write_rsnp(full, Eigen::MatrixXd::Ones(3, 3));
  std::stringstream truncated(full.str().substr(0, 40));
  EXPECT_THROW(read_rsnp(truncated), InvalidArgument);
}

TEST(Files, SnapshotFormatsAreDetected) {
  std::mt19937_64 gen(3);
  const Eigen::MatrixXd fields = oracle::random_matrix(9, 4, gen);
  const std::string bin = temp_path("snap.rsnp"), csv = temp_path("snap.csv");
  save_snapshots(bin, fields, true);
  save_snapshots(csv, fields, false);
  EXPECT_TRUE(has_rsnp_magic(bin));
  EXPECT_FALSE(has_rsnp_magic(csv));
  EXPECT_EQ(load_snapshots(bin), fields);
  EXPECT_EQ(load_snapshots(csv), fields);
  std::remove(bin.c_str());
  std::remove(csv.c_str());
}

TEST(Files, ParamsAndSpace) {
  const ParameterSpace space(Eigen::Vector2d(-1, 5), Eigen::Vector2d(2, 10));
  const ParameterSamples s = sample_uniform(space, 6, 4);
  const std::string pp = temp_path("params.csv"), sp = temp_path("space.csv");
  write_params_csv(pp, s);
  write_space_csv(sp, space);
  EXPECT_EQ(read_params_csv(pp).values, s.values);
  const ParameterSpace back = read_space_csv(sp);
  EXPECT_EQ(back.lower(), space.lower());
  EXPECT_EQ(back.upper(), space.upper());
  std::remove(pp.c_str());
  std::remove(sp.c_str());
  EXPECT_THROW(read_csv(temp_path("does-not-exist.csv")), InvalidArgument);
}

}  // namespace
}  // namespace podas::io
