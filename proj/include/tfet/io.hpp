#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tfet/field.hpp"

namespace tfet {

// Columnar text table. Cells are kept as text so mixed numeric/status columns
// survive a round trip; numbers are written in shortest round-trip form.
struct Table {
    std::vector<std::string> meta;     // '#'-prefixed lines, without the '# '
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
    std::size_t column(const std::string & name) const;  // throws when absent
    double number(std::size_t row, const std::string & name) const;
    bool operator==(const Table &) const = default;
};

std::string format_number(double v);

std::string to_csv(const Table & t);
Table parse_csv(const std::string & text);
void write_text_file(const std::filesystem::path & path, const std::string & text);
std::string read_text_file(const std::filesystem::path & path);
void write_csv(const std::filesystem::path & path, const Table & t);
Table read_csv(const std::filesystem::path & path);

// x, y and one column per field, row-major over nodes (x outer).
Table field_table(const std::vector<const FieldMap *> & fields);

std::string sha256_hex(const std::string & bytes);

} // namespace tfet
