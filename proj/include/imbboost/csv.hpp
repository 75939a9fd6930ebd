#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "imbboost/dataset.hpp"

namespace imbboost::prep {

// Plain table of text cells. Comma-delimited, header row mandatory,
// double-quoted fields may contain commas and doubled quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws when absent
};

CsvTable read_csv(const std::filesystem::path& path);
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view cell);

// Loads a labeled table. The header, with the label and time columns taken
// out, must list exactly the schema's feature names in schema order.
// Empty cells become missing; numeric cells parse as decimals; labels must
// be 0 or 1; the time column parses as an integer ordinal.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema);

// Writes features in schema order, then the label, then the time column.
// Numbers use the shortest representation that reads back bit-exactly.
void write_csv(const std::filesystem::path& path, const Dataset& data);

std::string format_number(double value);
double parse_number(std::string_view text);  // throws Error on garbage

}  // namespace imbboost::prep
