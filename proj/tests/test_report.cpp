#include "polymix/fixtures.hpp"
#include "polymix/report.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace polymix;

TEST(Report, AngleLiterals) {
  constexpr double pi = std::numbers::pi;
  EXPECT_EQ(*parse_angle("pi"), pi);
  EXPECT_EQ(*parse_angle("1.5pi"), 1.5 * pi);
  EXPECT_EQ(*parse_angle("3pi/2"), 1.5 * pi);
  EXPECT_EQ(*parse_angle("3/2pi"), 1.5 * pi);
  EXPECT_EQ(*parse_angle("3.25"), 3.25);
  for (const char* bad : {"", "pie", "1.5 pi", "3pi/0", "3/2pi/2", "xpi", "1.5pi2"}) EXPECT_FALSE(parse_angle(bad)) << bad;
}

TEST(Report, PartitionFile) {
  const Partition p = parse_partition_json(R"({"side":"exterior","labels":["D","N","D"]})");
  EXPECT_EQ(p.side, Side::Exterior);
  ASSERT_EQ(p.labels.size(), 3u);
  EXPECT_EQ(p.labels[1], Label::N);
  EXPECT_EQ(parse_partition_json(partition_to_json(p)), p);
  EXPECT_EQ(parse_partition_json(R"({"labels":["D"]})").side, Side::Interior);
  for (const char* bad : {"[]", "{}", R"({"labels":["X"]})", R"({"labels":"D"})", R"({"side":"up","labels":[]})", "{"})
    EXPECT_THROW(parse_partition_json(bad), std::invalid_argument) << bad;
}

TEST(Report, JsonDump) {
  const Json j = {{"b", 0.1}, {"a", {1, 2}}, {"c", std::numeric_limits<double>::infinity()}, {"d", "s"}};
  EXPECT_EQ(dump_json(j), "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 0.10000000000000001,\n  \"c\": null,\n  \"d\": \"s\"\n}\n");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Report, Diagnostics) {
  const Surface cube = make_cube();
  std::vector<Face> f = cube.faces();
  f.pop_back();
  const Json j = report_json(validate_surface(Surface(cube.vertices(), f)));
  EXPECT_EQ(j["euler"], 1);
  ASSERT_FALSE(j["violations"].empty());
  EXPECT_EQ(j["violations"][0]["kind"], "boundary_edge");
  EXPECT_TRUE(j["violations"][0]["location"].get<std::string>().starts_with("edge "));
}
