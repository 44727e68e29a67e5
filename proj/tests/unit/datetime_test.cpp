#include "solarcast/datetime.hpp"

#include <gtest/gtest.h>

using namespace solarcast;

TEST(DateTime, ParsesEveryAcceptedLayout) {
  const auto expected = make_datetime(2021, 3, 15, 14, 30, 0);
  EXPECT_EQ(parse_datetime("03/15/2021 02:30:00 PM"), expected);
  EXPECT_EQ(parse_datetime("03/15/2021 2:30 PM"), expected);
  EXPECT_EQ(parse_datetime("03/15/2021 14:30"), expected);
  EXPECT_EQ(parse_datetime("2021-03-15T14:30:00"), expected);
  EXPECT_EQ(parse_datetime("2021-03-15 14:30"), expected);
  EXPECT_EQ(parse_datetime("15.03.2021 14:30"), expected);
}

TEST(DateTime, TwelveOClockEdges) {
  EXPECT_EQ(parse_datetime("01/01/2021 12:00:00 AM"), make_datetime(2021, 1, 1, 0));
  EXPECT_EQ(parse_datetime("01/01/2021 12:00:00 PM"), make_datetime(2021, 1, 1, 12));
}

TEST(DateTime, RejectsGarbage) {
  EXPECT_FALSE(parse_datetime(""));
  EXPECT_FALSE(parse_datetime("yesterday"));
  EXPECT_FALSE(parse_datetime("13/45/2021 10:00"));
  EXPECT_FALSE(parse_datetime("2021-02-30 10:00"));
  EXPECT_FALSE(parse_datetime("2021-01-01 25:00"));
}

TEST(DateTime, IsoRoundTrip) {
  const auto t = make_datetime(2020, 2, 29, 23, 59, 58);
  EXPECT_EQ(format_iso(t), "2020-02-29T23:59:58");
  EXPECT_EQ(parse_datetime(format_iso(t)), t);
}

TEST(DateTime, FloorAndCalendarParts) {
  const auto t = make_datetime(2021, 3, 15, 14, 47, 12);
  EXPECT_EQ(floor_to(t, std::chrono::minutes{30}), make_datetime(2021, 3, 15, 14, 30));
  EXPECT_EQ(floor_to(t, std::chrono::minutes{240}), make_datetime(2021, 3, 15, 12, 0));
  EXPECT_EQ(month_of(t), 3u);
  EXPECT_EQ(hour_of(t), 14);
  EXPECT_EQ(hour_of(make_datetime(2021, 1, 1)), 0);
}
