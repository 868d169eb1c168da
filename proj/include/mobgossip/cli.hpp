#pragma once

#include <string>
#include <vector>

#include "mobgossip/csv.hpp"

namespace mobgossip {

// Normalizer expression for plot band checks: factors joined by '*' and '/'.
// A factor is a number, a CSV column name, or one of the shorthands
// logn = ln(n), log2n = ln(n)^2 (reading column n). Example: "k*log2n".
struct Normalizer {
    struct Factor {
        enum class Kind { number, column, logn, log2n };
        Kind kind = Kind::number;
        double value = 1.0;
        std::string column;
        bool divide = false;
    };
    std::vector<Factor> factors;

    static Normalizer parse(const std::string& expr);
    double eval(const CsvTable& table, const std::vector<std::string>& row) const;
};

// Entry point behind tools/main.cpp; exposed so tests can drive argv
// directly. Exit codes: 0 ok, 2 usage/validation error, 3 incomplete run.
int cli_main(int argc, const char* const* argv);

}  // namespace mobgossip
