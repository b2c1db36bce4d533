#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace stance::cli {

/// Quotes a field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);

/// Fixed six-decimal rendering; "nan" for NaN.
std::string num(double v);

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Reads a CSV file with a header row. Records have as many fields as the
/// header, otherwise MalformedRecord names the file and line.
std::vector<CsvRecord> read_csv(const std::filesystem::path& path,
                                std::vector<std::string>* header = nullptr);

void write_text(const std::filesystem::path& path, const std::string& text);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace stance::cli
