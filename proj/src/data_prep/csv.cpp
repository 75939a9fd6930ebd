#include "imbboost/csv.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "imbboost/error.hpp"

namespace imbboost::prep {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  throw Error("header mismatch: no column '" + std::string(name) + "'");
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  return text;
}

// Splits one line into views. Unquoted cells point into the line; quoted
// cells are unescaped into `scratch`, which must outlive the views.
void split_views(std::string_view line, std::vector<std::string_view>& cells, std::deque<std::string>& scratch) {
  cells.clear();
  scratch.clear();
  if (line.find('"') == std::string_view::npos) {
    std::size_t from = 0;
    for (;;) {
      const std::size_t comma = line.find(',', from);
      if (comma == std::string_view::npos) {
        cells.push_back(line.substr(from));
        return;
      }
      cells.push_back(line.substr(from, comma - from));
      from = comma + 1;
    }
  }
  for (auto& cell : split_csv_line(line)) {
    scratch.push_back(std::move(cell));
    cells.push_back(scratch.back());
  }
}

// Calls fn(row_number, cells) for each non-empty line after the header.
template <typename Fn>
std::vector<std::string> scan_csv(const std::filesystem::path& path, Fn&& fn) {
  const std::string text = read_file(path);
  std::vector<std::string_view> cells;
  std::deque<std::string> scratch;
  std::vector<std::string> header;
  bool have_header = false;
  std::size_t row = 0;
  std::size_t from = 0;
  while (from < text.size()) {
    std::size_t nl = text.find('\n', from);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + from, nl - from);
    from = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!have_header) {
      header = split_csv_line(line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    split_views(line, cells, scratch);
    if (cells.size() != header.size()) {
      throw Error("csv: row " + std::to_string(row + 1) + " of " + path.string() + " has " +
                  std::to_string(cells.size()) + " cells, header has " + std::to_string(header.size()));
    }
    fn(row++, header, cells);
  }
  if (!have_header) throw Error("header mismatch: " + path.string() + " is empty");
  return header;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  CsvTable table;
  table.header = scan_csv(path, [&](std::size_t, const auto&, const std::vector<std::string_view>& cells) {
    table.rows.emplace_back(cells.begin(), cells.end());
  });
  return table;
}

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || std::isnan(value)) {
    throw Error("numeric parse failure: '" + std::string(text) + "'");
  }
  return value;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
  schema.validate();

  struct Layout {
    std::optional<std::size_t> label_at;
    std::optional<std::size_t> time_at;
    std::vector<std::size_t> feature_at;
  };
  std::optional<Layout> layout;
  std::vector<NumericColumn> numeric(schema.columns.size());
  std::vector<TokenColumn> tokens(schema.columns.size());
  std::vector<std::uint8_t> labels;
  std::vector<std::int64_t> time;

  auto resolve = [&](const std::vector<std::string>& header) {
    Layout l;
    for (std::size_t j = 0; j < header.size(); ++j) {
      const auto& name = header[j];
      if (name == schema.label_column) {
        if (l.label_at) throw Error("header mismatch: label column repeated");
        l.label_at = j;
      } else if (schema.time_column && name == *schema.time_column) {
        if (l.time_at) throw Error("header mismatch: time column repeated");
        l.time_at = j;
      } else {
        l.feature_at.push_back(j);
      }
    }
    if (!l.label_at) throw Error("header mismatch: label column '" + schema.label_column + "' absent");
    if (schema.time_column && !l.time_at) {
      throw Error("header mismatch: time column '" + *schema.time_column + "' absent");
    }
    if (l.feature_at.size() != schema.columns.size()) {
      throw Error("header mismatch: expected " + std::to_string(schema.columns.size()) +
                  " feature columns, found " + std::to_string(l.feature_at.size()));
    }
    for (std::size_t k = 0; k < l.feature_at.size(); ++k) {
      if (header[l.feature_at[k]] != schema.columns[k].name) {
        throw Error("header mismatch: position " + std::to_string(k) + " is '" + header[l.feature_at[k]] +
                    "', schema expects '" + schema.columns[k].name + "'");
      }
    }
    return l;
  };

  auto on_row = [&](std::size_t i, const std::vector<std::string>& header, const std::vector<std::string_view>& cells) {
    if (!layout) layout = resolve(header);
    for (std::size_t k = 0; k < schema.columns.size(); ++k) {
      const std::string_view cell = cells[layout->feature_at[k]];
      if (schema.columns[k].kind == ColumnKind::categorical) {
        tokens[k].emplace_back(cell);
      } else if (cell.empty()) {
        numeric[k].push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        try {
          numeric[k].push_back(parse_number(cell));
        } catch (const Error&) {
          throw Error("numeric parse failure: column '" + schema.columns[k].name + "', row " +
                      std::to_string(i + 1) + ": '" + std::string(cell) + "'");
        }
      }
    }
    const std::string_view label = cells[*layout->label_at];
    if (label == "0") {
      labels.push_back(0);
    } else if (label == "1") {
      labels.push_back(1);
    } else {
      throw Error("non-binary label '" + std::string(label) + "' at row " + std::to_string(i + 1));
    }
    if (layout->time_at) {
      const std::string_view cell = cells[*layout->time_at];
      std::int64_t t = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), t);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error("time index parse failure at row " + std::to_string(i + 1) + ": '" + std::string(cell) + "'");
      }
      time.push_back(t);
    }
  };
  const auto header = scan_csv(path, on_row);
  if (!layout) layout = resolve(header);

  std::vector<ColumnData> columns;
  columns.reserve(schema.columns.size());
  for (std::size_t k = 0; k < schema.columns.size(); ++k) {
    if (schema.columns[k].kind == ColumnKind::numeric) {
      columns.emplace_back(std::move(numeric[k]));
    } else {
      columns.emplace_back(std::move(tokens[k]));
    }
  }
  std::optional<std::vector<std::int64_t>> time_index;
  if (layout->time_at) time_index = std::move(time);
  return Dataset(schema, std::move(columns), std::move(labels), std::move(time_index));
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const auto& schema = data.schema();
  for (const auto& c : schema.columns) out << csv_escape(c.name) << ',';
  out << csv_escape(schema.label_column);
  if (data.has_time()) out << ',' << csv_escape(schema.time_column.value_or("time"));
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.features(); ++j) {
      if (const auto* num = std::get_if<NumericColumn>(&data.column(j))) {
        out << format_number((*num)[i]);
      } else {
        out << csv_escape(std::get<TokenColumn>(data.column(j))[i]);
      }
      out << ',';
    }
    out << static_cast<int>(data.labels()[i]);
    if (data.has_time()) out << ',' << data.time_index()[i];
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace imbboost::prep
