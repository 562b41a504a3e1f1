#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "dfcnn/dataset.hpp"
#include "dfcnn/error.hpp"

namespace dfcnn {
namespace {

std::string error_of(std::string_view text) {
  try {
    parse_csv(text, "in.csv");
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseCsv, OneColumn) {
  const auto s = parse_csv("1\n2\n3\n");
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()),
            (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(s.times()[2], 2);
}

TEST(ParseCsv, TwoColumnsWithHeader) {
  const auto s = parse_csv("t,v\n0,1\n1,2\n");
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()),
            (std::vector<double>{1, 2}));
  EXPECT_EQ(std::vector<std::int64_t>(s.times().begin(), s.times().end()),
            (std::vector<std::int64_t>{0, 1}));
}

TEST(ParseCsv, OneColumnWithHeaderAndCrlf) {
  const auto s = parse_csv("value\r\n1.5\r\n-2e3\r\n\r\n\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.values()[1], -2000.0);
}

TEST(ParseCsv, IsoDates) {
  const auto s = parse_csv("date,value\n2020-01-30,1\n2020-01-31,2\n2020-02-01,3\n");
  EXPECT_EQ(s.time_kind(), TimeKind::kDate);
  EXPECT_EQ(format_time(s.next_time(s.times().back()), s.time_kind()), "2020-02-02");
  const auto dt = parse_csv("2021-06-01T00:00:00Z,1\n2021-06-01T06:30,2\n");
  EXPECT_EQ(dt.time_kind(), TimeKind::kDateTime);
  EXPECT_EQ(format_time(dt.times()[1], dt.time_kind()), "2021-06-01T06:30:00Z");
}

TEST(ParseCsv, RowNumberedErrors) {
  EXPECT_NE(error_of("1\nx\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("t,v\n0,1\n1,\n").find("row 3"), std::string::npos);
  EXPECT_NE(error_of("1\n2\nnan\n").find("row 3"), std::string::npos);
  EXPECT_NE(error_of("1\ninf\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("1\n\n2\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("0,1\n0,2\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("0,1\n1,2,3\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("0,1\n2020-01-01,2\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("0,1\nabc,2\n").find("row 2"), std::string::npos);
}

TEST(ParseCsv, EmptyInputs) {
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
  EXPECT_NE(error_of("\n\n").find("empty"), std::string::npos);
  EXPECT_NE(error_of("value\n").find("no data"), std::string::npos);
  EXPECT_THROW(parse_csv("a,b,c\n1,2,3\n"), DataError);
}

class LoadCsv : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / "dfcnn_load_csv_test";
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
  }
  std::filesystem::path dir_;
};

TEST_F(LoadCsv, SingleFile) {
  write("alpha.csv", "1\n2\n3\n4\n");
  const auto ds = load_csv(dir_ / "alpha.csv");
  EXPECT_EQ(ds.name, "alpha");
  ASSERT_EQ(ds.series.size(), 1u);
  EXPECT_EQ(ds.series[0].id, "alpha");
  EXPECT_FALSE(ds.horizon.has_value());
}

TEST_F(LoadCsv, DirectoryIsSortedMultiSeries) {
  write("b.csv", "1\n2\n3\n4\n");
  write("a.csv", "5\n6\n7\n8\n");
  write("notes.txt", "ignored");
  const auto ds = load_csv(dir_);
  ASSERT_EQ(ds.series.size(), 2u);
  EXPECT_EQ(ds.series[0].id, "a");
  EXPECT_EQ(ds.series[1].id, "b");
  EXPECT_EQ(ds.name, "dfcnn_load_csv_test");
}

TEST_F(LoadCsv, Errors) {
  EXPECT_THROW(load_csv(dir_ / "missing.csv"), DataError);
  EXPECT_THROW(load_csv(dir_), DataError);  // no csv files yet
  write("bad.csv", "1\nx\n");
  try {
    load_csv(dir_ / "bad.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.csv: row 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace dfcnn
