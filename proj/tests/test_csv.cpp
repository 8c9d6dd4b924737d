#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "modcert/csv.hpp"
#include "modcert/rng.hpp"

using namespace modcert;

TEST_CASE("empty table writes a header-only file") {
    CsvTable table;
    table.header = {"step", "value"};
    std::stringstream ss;
    table.write(ss);
    CHECK(ss.str() == "step,value\n");
}

TEST_CASE("numbers carry 12 significant digits") {
    CHECK(csv_format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(csv_format_double(0.667026) == "0.667026");
    CHECK(csv_format_double(-8.9e-06) == "-8.9e-06");
}

TEST_CASE("round trip over random records") {
    Rng rng(808);
    CsvTable table;
    table.header = {"a", "b", "text"};
    for (int i = 0; i < 100; ++i) {
        std::string text = "plain";
        switch (rng.below(4)) {
            case 0: text = "with,comma"; break;
            case 1: text = "with \"quote\""; break;
            case 2: text = ""; break;
            default: break;
        }
        table.rows.push_back({csv_format_double(rng.unit()),
                              std::to_string(static_cast<long long>(rng.below(1000000))), text});
    }
    std::stringstream ss;
    table.write(ss);
    const auto back = CsvTable::parse(ss);
    CHECK(back.header == table.header);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) CHECK(back.rows[i] == table.rows[i]);
}

TEST_CASE("mismatched row width is rejected") {
    CsvTable table;
    table.header = {"a", "b"};
    table.rows.push_back({"1"});
    std::stringstream ss;
    CHECK_THROWS_AS(table.write(ss), std::invalid_argument);
}
