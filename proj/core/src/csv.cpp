#include "rbk/csv.hpp"

#include <fstream>

#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw Error(ErrorCode::ValidationError, fmt::format("row has {} cells, header has {}", cells.size(), header_.size()));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out = fmt::format("{}\n", fmt::join(header_, ","));
  for (const auto& row : rows_) {
    out += fmt::format("{}", fmt::join(row, ","));
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace rbk
