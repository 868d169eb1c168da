#include "mobgossip/csv.hpp"

#include <algorithm>

namespace mobgossip {

std::string csv_escape(const std::string& field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            os << ',';
        }
        os << csv_escape(fields[i]);
    }
    os << "\r\n";
}

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::vector<std::string> current;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;

    const auto finish_field = [&]() {
        current.push_back(field);
        field.clear();
    };
    const auto finish_row = [&]() {
        finish_field();
        if (table.header.empty()) {
            table.header = current;
        } else {
            table.rows.push_back(current);
        }
        current.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                finish_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_has_content || !field.empty() || !current.empty()) {
                    finish_row();
                }
                break;
            default:
                field += c;
                row_has_content = true;
                break;
        }
    }
    if (row_has_content || !field.empty() || !current.empty()) {
        finish_row();
    }
    return table;
}

}  // namespace mobgossip
