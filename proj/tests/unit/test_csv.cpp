#include <string>

#include "doctest.h"
#include "sitegrid/csv.hpp"
#include "sitegrid/error.hpp"

using namespace sitegrid;

TEST_CASE("parse handles quoting, CRLF and BOM") {
  csv::Table table = csv::parse("\xEF\xBB\xBFzip,name\r\n00501,\"a,b\"\r\n"
                                "00502,\"say \"\"hi\"\"\"\n");
  REQUIRE(table.header == std::vector<std::string>{"zip", "name"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0] == std::vector<std::string>{"00501", "a,b"});
  CHECK(table.rows[1] == std::vector<std::string>{"00502", "say \"hi\""});
  CHECK(table.column("name") == 1);
  CHECK(!table.column("absent").has_value());
}

TEST_CASE("parse preserves embedded newlines in quoted fields") {
  csv::Table table = csv::parse("a,b\r\n\"line1\nline2\",x\r\n");
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "line1\nline2");
}

TEST_CASE("parse rejects structural problems distinctly") {
  CHECK_THROWS_WITH_AS(csv::parse(""), doctest::Contains("no header"),
                       Error);
  try {
    csv::parse("");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_file);
  }
  try {
    csv::parse("a,b\n1\n");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::malformed_csv);
  }
  try {
    csv::parse("a,b\n\"unterminated,2\n");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::malformed_csv);
  }
  CHECK_THROWS_AS(csv::parse("a,b\n1,2,3\n"), Error);
}

TEST_CASE("header-only input parses to zero rows") {
  csv::Table table = csv::parse("zip,count\n");
  CHECK(table.rows.empty());
}

TEST_CASE("read_file missing path is a missing_file error") {
  try {
    csv::read_file("/nonexistent/siteground.csv");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_file);
  }
}

TEST_CASE("serialization round-trips through the parser") {
  csv::Table table;
  table.header = {"zip", "note"};
  table.rows = {{"00501", "plain"},
                {"00502", "comma, inside"},
                {"00503", "quote \" inside"},
                {"00504", "line\nbreak"}};
  std::string text = csv::to_string(table);
  csv::Table back = csv::parse(text);
  CHECK(back.header == table.header);
  CHECK(back.rows == table.rows);
}

TEST_CASE("format_double round-trips exactly") {
  for (double value : {0.0, 1.0, -3.25, 0.1, 1e300, 123456.789,
                       0.30000000000000004}) {
    std::string text = csv::format_double(value);
    auto parsed = csv::parse_double(text);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == value);
  }
}

TEST_CASE("numeric parses are strict") {
  CHECK(csv::parse_double(" 2.5 ") == 2.5);
  CHECK(!csv::parse_double("").has_value());
  CHECK(!csv::parse_double("2.5x").has_value());
  CHECK(!csv::parse_double("nan").has_value());
  CHECK(!csv::parse_double("inf").has_value());
  CHECK(csv::parse_int("42") == 42);
  CHECK(!csv::parse_int("42.5").has_value());
  CHECK(!csv::parse_int("4 2").has_value());
}
