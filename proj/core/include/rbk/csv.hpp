#pragma once

// Deterministic CSV output: header row, comma separated, 17 significant
// digits, '\n' line endings, written atomically.

#include <filesystem>
#include <string>
#include <vector>

namespace rbk {

std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a temporary sibling and renames it over the target. Errors: Io.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rbk
