#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haystack {

// 12 significant digits round-trip every quantity we emit and keep the files
// byte-diffable across platforms that share IEEE doubles.
inline std::string format_cell(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::string(buffer);
}

namespace detail {

inline std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace detail

// Comma-separated output with a fixed header row and LF line endings.  The
// stream is opened in binary mode so the bytes are identical on every
// platform; that is what makes rerun-and-diff a meaningful test.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> columns)
      : path_(std::move(path)), columns_(std::move(columns)) {
    if (columns_.empty()) {
      throw std::invalid_argument("csv: need at least one column");
    }
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) {
      throw std::runtime_error("csv: cannot open " + path_.string());
    }
    write_cells(columns_);
  }

  const std::filesystem::path& path() const { return path_; }
  const std::vector<std::string>& columns() const { return columns_; }

  void write_row(std::span<const double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_cell(v));
    write_row(std::span<const std::string>(cells));
  }

  void write_row(std::span<const std::string> cells) {
    if (cells.size() != columns_.size()) {
      throw std::invalid_argument("csv: row width does not match header");
    }
    write_cells(cells);
  }

  // Flushes and reports failure eagerly instead of losing it in a destructor.
  void close() {
    if (!out_.is_open()) return;
    out_.close();
    if (out_.fail()) {
      throw std::runtime_error("csv: write failed for " + path_.string());
    }
  }

 private:
  template <class Cells>
  void write_cells(const Cells& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << detail::csv_escape(cells[i]);
    }
    out_ << '\n';
    if (!out_) {
      throw std::runtime_error("csv: write failed for " + path_.string());
    }
  }

  std::filesystem::path path_;
  std::vector<std::string> columns_;
  std::ofstream out_;
};

}  // namespace haystack
