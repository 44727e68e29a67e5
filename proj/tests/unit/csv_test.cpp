#include "solarcast/csv.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace solarcast;

TEST(Csv, SplitsQuotedFields) {
  const auto f = csv::split_line(R"(a, "b,c" ,"say ""hi""",)");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0], "a");
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "say \"hi\"");
  EXPECT_EQ(f[3], "");
}

TEST(Csv, NextLineStripsBomAndCarriageReturn) {
  std::istringstream in("\xEF\xBB\xBFh1,h2\r\n\r\n1,2\r\n");
  std::string line;
  ASSERT_TRUE(csv::next_line(in, line, true));
  EXPECT_EQ(line, "h1,h2");
  ASSERT_TRUE(csv::next_line(in, line));
  EXPECT_EQ(line, "1,2");
  EXPECT_FALSE(csv::next_line(in, line));
}

TEST(Csv, NormalizedHeadersCompareEqual) {
  EXPECT_EQ(csv::normalize_header("Wind Speed(Max)"), csv::normalize_header("wind_speed_max"));
  EXPECT_EQ(csv::normalize_header("DateTime"), "datetime");
}

TEST(Csv, ParseDouble) {
  EXPECT_EQ(csv::parse_double("1.5"), 1.5);
  EXPECT_EQ(csv::parse_double(" -2e3 "), -2000.0);
  EXPECT_FALSE(csv::parse_double("abc"));
  EXPECT_FALSE(csv::parse_double("1.5x"));
  EXPECT_FALSE(csv::parse_double(""));
}

TEST(Csv, FormatsSixSignificantDigits) {
  EXPECT_EQ(csv::format_number(0.123456789), "0.123457");
  EXPECT_EQ(csv::format_number(2.0), "2");
  EXPECT_EQ(csv::format_number(std::nan("")), "nan");
}

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv::quote_if_needed("plain"), "plain");
  EXPECT_EQ(csv::quote_if_needed("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::quote_if_needed("q\"x"), "\"q\"\"x\"");
}
