#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace goldi {

// Minimal strict CSV: UTF-8, header row required, "." decimal separator,
// double quotes only where a field contains a comma/quote/newline.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;  // path, for error messages

  // Index of a named column; throws DataError naming the column if absent.
  std::size_t col(const std::string& name) const;
  std::optional<std::size_t> find_col(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);

// Shortest round-trip representation (std::to_chars), so re-running a
// pipeline byte-for-byte reproduces its outputs.
std::string fmt_double(double v);
std::string fmt_int(long long v);

double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);
bool parse_bool01(const std::string& s, const std::string& context);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void write_row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace goldi
