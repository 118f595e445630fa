#pragma once

#include <string>
#include <vector>

namespace rbhp {

/// Round-trip exact, locale-independent double formatting for CSV output.
std::string fmt_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Minimal CSV reader: comma-separated, first row is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};
CsvTable parse_csv(const std::string& text);

}  // namespace rbhp
