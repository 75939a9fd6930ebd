#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "imbboost/dataset.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("imbboost_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

// Numeric-only table with features f0, f1, ... and label "y".
inline imbboost::Dataset numeric_table(const std::vector<std::vector<double>>& cols,
                                       std::vector<std::uint8_t> labels,
                                       std::optional<std::vector<std::int64_t>> time = std::nullopt) {
  imbboost::FeatureSchema schema;
  std::vector<imbboost::ColumnData> data;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    schema.columns.push_back({"f" + std::to_string(j), imbboost::ColumnKind::numeric});
    data.emplace_back(cols[j]);
  }
  schema.label_column = "y";
  if (time) schema.time_column = "t";
  return imbboost::Dataset(schema, std::move(data), std::move(labels), std::move(time));
}

inline imbboost::FeatureSchema diabetes_schema() {
  imbboost::FeatureSchema s;
  for (const char* name : {"pregnancies", "glucose", "blood_pressure", "skin_thickness", "insulin", "bmi",
                           "pedigree", "age"}) {
    s.columns.push_back({name, imbboost::ColumnKind::numeric});
  }
  s.label_column = "outcome";
  return s;
}

}  // namespace fixture
