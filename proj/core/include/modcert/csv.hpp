#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modcert {

// Minimal RFC-4180-style table: header row plus homogeneous rows, LF line
// endings, fields quoted only when needed. Numbers are rendered with 12
// significant digits.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& out) const;
    static CsvTable parse(std::istream& in);
};

std::string csv_format_double(double value);

}  // namespace modcert
