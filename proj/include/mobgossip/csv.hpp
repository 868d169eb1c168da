#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mobgossip {

// RFC-4180 quoting: fields containing comma, quote, CR or LF are quoted and
// embedded quotes doubled.
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable parse_csv(const std::string& text);

}  // namespace mobgossip
